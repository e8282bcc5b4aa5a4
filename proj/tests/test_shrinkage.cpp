#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agtf/shrinkage.hpp"
#include "oracles.hpp"

using namespace agtf;

TEST_CASE("gst_scalar: p = 1 soft threshold") {
  CHECK(gst_scalar(3.0, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(gst_scalar(0.5, 1.0, 1.0) == 0.0);
}

TEST_CASE("gst_scalar: below-threshold inputs shrink to zero") {
  // nu = (2*1*0.5)^(1/1.5) = 1, threshold = 1 + 0.5 = 1.5
  CHECK(gst_scalar(0.5, 1.0, 0.5) == 0.0);
  CHECK(gst_scalar(1.49, 1.0, 0.5) == 0.0);
  CHECK(gst_scalar(0.0, 1.0, 0.5) == 0.0);
}

TEST_CASE("gst_scalar: fixed point above the threshold") {
  const double d = gst_scalar(3.0, 1.0, 0.5);
  CHECK(d == doctest::Approx(2.696).epsilon(1e-3));
  CHECK(d == doctest::Approx(oracles::gst_grid_search(3.0, 1.0, 0.5)).epsilon(1e-4));
  // stationarity: d = sigma - tau*p*d^(p-1)
  CHECK(std::abs(d - 3.0 + 1.0 * 0.5 * std::pow(d, -0.5)) <= 1e-8);
}

TEST_CASE("gst_scalar: never exceeds sigma; zero or stationary") {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const double sigma = 5.0 * rng.uniform01();
    const double tau = 0.01 + 2.0 * rng.uniform01();
    const double p = 0.05 + 0.95 * rng.uniform01();
    const double d = gst_scalar(sigma, tau, p);
    REQUIRE(d <= sigma + 1e-15);
    REQUIRE(d >= 0.0);
    if (d > 0.0 && p < 1.0)
      REQUIRE(std::abs(d - sigma + tau * p * std::pow(d, p - 1.0)) <= 1e-8);
  }
}

TEST_CASE("gst_scalar: objective optimality against the grid oracle, >= 1000 cases") {
  Rng rng(22);
  auto objective = [](double d, double sigma, double tau, double p) {
    return 0.5 * (d - sigma) * (d - sigma) + tau * std::pow(d, p);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const double sigma = 4.0 * rng.uniform01();
    const double tau = 0.01 + 1.5 * rng.uniform01();
    const double p = 0.05 + 0.95 * rng.uniform01();
    const double d = gst_scalar(sigma, tau, p);
    double grid_best = objective(0.0, sigma, tau, p);
    for (double g = 1e-4; g <= sigma; g += 1e-4)
      grid_best = std::min(grid_best, objective(g, sigma, tau, p));
    REQUIRE(objective(d, sigma, tau, p) <= grid_best + 1e-6);
  }
}

TEST_CASE("prox_schatten_p: vanishing tau is the identity") {
  Rng rng(23);
  const RealTensor3 z = oracles::random_tensor(4, 3, 3, rng);
  ProxParams params;
  params.tau = 1e-300;
  params.p = 0.5;
  params.rotate = false;
  const RealTensor3 x = prox_schatten_p(z, params);
  CHECK((x - z).max_abs() <= 1e-9);
}

TEST_CASE("prox_schatten_p: huge tau with p = 1 zeroes the tensor") {
  Rng rng(24);
  const RealTensor3 z = oracles::random_tensor(4, 3, 3, rng);
  ProxParams params;
  params.p = 1.0;
  params.rotate = false;
  double top = 0;
  for (const auto& sv : oracles::frequency_singular_values(z)) top = std::max(top, sv(0));
  params.tau = 2.0 * top;
  const RealTensor3 x = prox_schatten_p(z, params);
  CHECK(x.max_abs() <= 1e-12);
}

TEST_CASE("prox_schatten_p: frequency singular values match the scalar prox") {
  Rng rng(25);
  const RealTensor3 z = oracles::random_tensor(6, 4, 3, rng);
  ProxParams params;
  params.tau = 0.5;
  params.p = 0.5;
  params.rotate = false;
  const RealTensor3 x = prox_schatten_p(z, params);

  const auto before = oracles::frequency_singular_values(z);
  const auto after = oracles::frequency_singular_values(x);
  for (size_t k = 0; k < before.size(); ++k)
    for (Eigen::Index j = 0; j < before[k].size(); ++j)
      CHECK(after[k](j) ==
            doctest::Approx(gst_scalar(before[k](j), params.tau, params.p)).epsilon(1e-8));
}

TEST_CASE("prox_schatten_p: p = 1 equals per-slice soft thresholding") {
  Rng rng(26);
  const RealTensor3 z = oracles::random_tensor(5, 4, 4, rng);
  ProxParams params;
  params.tau = 0.7;
  params.p = 1.0;
  params.rotate = false;
  const RealTensor3 x = prox_schatten_p(z, params);
  const auto before = oracles::frequency_singular_values(z);
  const auto after = oracles::frequency_singular_values(x);
  for (size_t k = 0; k < before.size(); ++k)
    for (Eigen::Index j = 0; j < before[k].size(); ++j)
      CHECK(after[k](j) == doctest::Approx(std::max(before[k](j) - 0.7, 0.0)).epsilon(1e-9));
}

TEST_CASE("prox_schatten_p: never increases a frequency singular value") {
  Rng rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const RealTensor3 z = oracles::random_tensor(4, 3, 3, rng);
    ProxParams params;
    params.tau = 0.05 + rng.uniform01();
    params.p = 0.1 + 0.9 * rng.uniform01();
    params.rotate = false;
    const RealTensor3 x = prox_schatten_p(z, params);
    const auto before = oracles::frequency_singular_values(z);
    const auto after = oracles::frequency_singular_values(x);
    for (size_t k = 0; k < before.size(); ++k)
      for (Eigen::Index j = 0; j < before[k].size(); ++j)
        REQUIRE(after[k](j) <= before[k](j) + 1e-9);
  }
}

TEST_CASE("prox_schatten_p: rotation is un-done and output stays real") {
  Rng rng(28);
  const RealTensor3 z = oracles::random_tensor(6, 3, 4, rng);  // n x K x V
  ProxParams params;
  params.tau = 0.4;
  params.p = 0.5;
  params.rotate = true;
  const RealTensor3 x = prox_schatten_p(z, params);  // throws if imag residue > 1e-8
  REQUIRE(x.dims() == z.dims());

  // Rotated prox equals prox of the rotated tensor in raw orientation.
  ProxParams raw = params;
  raw.rotate = false;
  const RealTensor3 expected = rotate_mode(
      prox_schatten_p(rotate_mode(z, kRotateClusterModeThird), raw),
      inverse_permutation(kRotateClusterModeThird));
  CHECK((x - expected).max_abs() <= 1e-12);
}

TEST_CASE("prox_schatten_p: conjugate-symmetry fast path matches the reference") {
  Rng rng(29);
  for (Eigen::Index n3 : {2, 3, 4, 5}) {
    const RealTensor3 z = oracles::random_tensor(5, 4, n3, rng);
    ProxParams params;
    params.tau = 0.3;
    params.p = 0.6;
    params.rotate = false;
    const RealTensor3 reference = prox_schatten_p(z, params, /*use_conjugate_symmetry=*/false);
    const RealTensor3 mirrored = prox_schatten_p(z, params, /*use_conjugate_symmetry=*/true);
    CHECK((reference - mirrored).max_abs() <= 1e-9);
  }
}

TEST_CASE("prox params validation") {
  ProxParams params;
  params.tau = 0.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params.tau = 1.0;
  params.p = 1.5;
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params.p = 0.5;
  params.gst_max_iter = 0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
}

TEST_CASE("schatten_p_norm: zero tensor") {
  CHECK(schatten_p_norm(RealTensor3(3, 2, 2), 0.5, false) == 0.0);
}

TEST_CASE("schatten_p_norm: n3 = 1, p = 1 is the nuclear norm") {
  Rng rng(30);
  const RealTensor3 t = oracles::random_tensor(5, 3, 1, rng);
  Eigen::JacobiSVD<Matrix> svd(t.slice(0));
  CHECK(schatten_p_norm(t, 1.0, false) ==
        doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
}

TEST_CASE("schatten_p_norm: matches the per-slice SVD oracle on 5x4x2") {
  Rng rng(31);
  const RealTensor3 t = oracles::random_tensor(5, 4, 2, rng);
  double acc = 0;
  for (const auto& sv : oracles::frequency_singular_values(t))
    for (Eigen::Index j = 0; j < sv.size(); ++j) acc += std::pow(sv(j), 0.5);
  CHECK(schatten_p_norm(t, 0.5, false) == doctest::Approx(std::pow(acc, 2.0)).epsilon(1e-8));
}
