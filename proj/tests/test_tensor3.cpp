#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agtf/tensor3.hpp"
#include "oracles.hpp"

using namespace agtf;

namespace {

double max_abs_diff(const RealTensor3& a, const RealTensor3& b) { return (a - b).max_abs(); }

double max_abs_diff(const ComplexTensor3& a, const ComplexTensor3& b) {
  return (a - b).max_abs();
}

}  // namespace

TEST_CASE("mode3_dft: n3 = 1 is the identity") {
  Rng rng(1);
  RealTensor3 t = oracles::random_tensor(3, 2, 1, rng);
  const ComplexTensor3 f = mode3_dft(t);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    CHECK(f.data()[i].real() == doctest::Approx(t.data()[i]).epsilon(1e-14));
    CHECK(f.data()[i].imag() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("mode3_dft: constant tubes concentrate in slice 1") {
  const Eigen::Index V = 4;
  Rng rng(2);
  RealTensor3 t(3, 3, V);
  const RealTensor3 base = oracles::random_tensor(3, 3, 1, rng);
  for (Eigen::Index k = 0; k < V; ++k) t.slice(k) = base.slice(0);

  const ComplexTensor3 f = mode3_dft(t);
  CHECK((f.slice(0) - static_cast<double>(V) * base.slice(0).cast<Complex>()).cwiseAbs().maxCoeff() <
        1e-12);
  for (Eigen::Index k = 1; k < V; ++k) CHECK(f.slice(k).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode3_dft: round trip within 1e-10 on a random 4x3x5 tensor") {
  Rng rng(3);
  const RealTensor3 t = oracles::random_tensor(4, 3, 5, rng);
  const RealTensor3 back = real_part_checked(mode3_dft(mode3_dft(t), true), 1e-10);
  CHECK(max_abs_diff(t, back) <= 1e-10);
}

TEST_CASE("mode3_dft: matches the direct summation oracle in both directions") {
  Rng rng(4);
  const RealTensor3 t = oracles::random_tensor(4, 3, 5, rng);
  CHECK(max_abs_diff(mode3_dft(t), oracles::dft_summation(t, false)) < 1e-11);
  CHECK(max_abs_diff(mode3_dft(to_complex(t), true), oracles::dft_summation(t, true)) < 1e-11);
}

TEST_CASE("mode3_dft: conjugate symmetry of real tensors") {
  Rng rng(5);
  for (Eigen::Index n3 : {2, 3, 4, 5}) {
    const RealTensor3 t = oracles::random_tensor(3, 4, n3, rng);
    const ComplexTensor3 f = mode3_dft(t);
    for (Eigen::Index k = 1; k < n3; ++k) {
      const CMatrix mirrored = f.slice(n3 - k).conjugate();
      CHECK((CMatrix(f.slice(k)) - mirrored).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("mode3_dft: Parseval identity") {
  Rng rng(6);
  const RealTensor3 t = oracles::random_tensor(5, 2, 4, rng);
  const ComplexTensor3 f = mode3_dft(t);
  const double lhs = t.squared_norm();
  const double rhs = f.squared_norm() / static_cast<double>(t.depth());
  CHECK(std::abs(lhs - rhs) / lhs <= 1e-10);
}

TEST_CASE("t_product: n3 = 1 is the matrix product") {
  Rng rng(7);
  const RealTensor3 a = oracles::random_tensor(4, 3, 1, rng);
  const RealTensor3 b = oracles::random_tensor(3, 2, 1, rng);
  const RealTensor3 c = t_product(a, b);
  const Matrix expected = a.slice(0) * b.slice(0);
  CHECK((c.slice(0) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("t_product: identity tensor is neutral") {
  Rng rng(8);
  const RealTensor3 a = oracles::random_tensor(4, 3, 3, rng);
  const RealTensor3 id = RealTensor3::identity(3, 3);
  CHECK(max_abs_diff(t_product(a, id), a) < 1e-12);
}

TEST_CASE("t_product: matches the block-circulant unfolding oracle") {
  Rng rng(9);
  const RealTensor3 a = oracles::random_tensor(5, 4, 3, rng);
  const RealTensor3 b = oracles::random_tensor(4, 2, 3, rng);
  CHECK(max_abs_diff(t_product(a, b), oracles::t_product_bcirc(a, b)) <= 1e-10);
}

TEST_CASE("t_product: randomized block-circulant agreement, >= 100 cases") {
  Rng rng(10);
  for (int trial = 0; trial < 120; ++trial) {
    const Eigen::Index n1 = 1 + rng.uniform_int(5);
    const Eigen::Index m = 1 + rng.uniform_int(5);
    const Eigen::Index n2 = 1 + rng.uniform_int(5);
    const Eigen::Index n3 = 1 + rng.uniform_int(4);
    const RealTensor3 a = oracles::random_tensor(n1, m, n3, rng);
    const RealTensor3 b = oracles::random_tensor(m, n2, n3, rng);
    REQUIRE(max_abs_diff(t_product(a, b), oracles::t_product_bcirc(a, b)) <= 1e-10);
  }
}

TEST_CASE("t_product: dimension mismatch throws") {
  RealTensor3 a(2, 3, 2), b(4, 2, 2), c(3, 2, 3);
  CHECK_THROWS_AS(t_product(a, b), std::invalid_argument);
  CHECK_THROWS_AS(t_product(a, c), std::invalid_argument);
}

TEST_CASE("t_transpose: n3 = 1 is the matrix transpose") {
  Rng rng(11);
  const RealTensor3 a = oracles::random_tensor(4, 3, 1, rng);
  const RealTensor3 at = t_transpose(a);
  CHECK((at.slice(0) - a.slice(0).transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("t_transpose: involution") {
  Rng rng(12);
  const RealTensor3 a = oracles::random_tensor(4, 3, 5, rng);
  CHECK(max_abs_diff(t_transpose(t_transpose(a)), a) == 0.0);
}

TEST_CASE("t_transpose: reverses products") {
  Rng rng(13);
  const RealTensor3 a = oracles::random_tensor(4, 3, 4, rng);
  const RealTensor3 b = oracles::random_tensor(3, 5, 4, rng);
  const RealTensor3 lhs = t_transpose(t_product(a, b));
  const RealTensor3 rhs = t_product(t_transpose(b), t_transpose(a));
  CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("t_svd: identity tensor decomposes into identities") {
  const RealTensor3 id = RealTensor3::identity(3, 4);
  const TSvd svd = t_svd(id);
  CHECK(max_abs_diff(svd.U, RealTensor3::identity(3, 4)) < 1e-10);
  CHECK(max_abs_diff(svd.S, RealTensor3::identity(3, 4)) < 1e-10);
  CHECK(max_abs_diff(svd.V, RealTensor3::identity(3, 4)) < 1e-10);
}

TEST_CASE("t_svd: n3 = 1 matches the matrix SVD") {
  Rng rng(14);
  const RealTensor3 t = oracles::random_tensor(5, 3, 1, rng);
  const TSvd svd = t_svd(t);
  Eigen::JacobiSVD<Matrix> ref(t.slice(0));
  for (Eigen::Index j = 0; j < 3; ++j)
    CHECK(svd.S(j, j, 0) == doctest::Approx(ref.singularValues()(j)).epsilon(1e-10));
}

TEST_CASE("t_svd: reconstruction and per-slice singular values on 6x4x3") {
  Rng rng(15);
  const RealTensor3 t = oracles::random_tensor(6, 4, 3, rng);
  const TSvd svd = t_svd(t);
  const RealTensor3 rebuilt = t_product(t_product(svd.U, svd.S), t_transpose(svd.V));
  CHECK(max_abs_diff(rebuilt, t) <= 1e-8);

  const auto ref = oracles::frequency_singular_values(t);
  const ComplexTensor3 sf = mode3_dft(svd.S);
  for (Eigen::Index k = 0; k < 3; ++k) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(sf(j, j, k).real() == doctest::Approx(ref[k](j)).epsilon(1e-9));
      CHECK(std::abs(sf(j, j, k).imag()) < 1e-9);
    }
    // descending order within each frequency slice
    for (Eigen::Index j = 1; j < 4; ++j)
      CHECK(sf(j, j, k).real() <= sf(j - 1, j - 1, k).real() + 1e-12);
  }
}

TEST_CASE("rotate_mode: identity permutation") {
  Rng rng(16);
  const RealTensor3 t = oracles::random_tensor(3, 4, 2, rng);
  CHECK(max_abs_diff(rotate_mode(t, {0, 1, 2}), t) == 0.0);
}

TEST_CASE("rotate_mode: (1,3,2) applied twice is the identity") {
  Rng rng(17);
  const RealTensor3 t = oracles::random_tensor(3, 4, 2, rng);
  CHECK(max_abs_diff(rotate_mode(rotate_mode(t, {0, 2, 1}), {0, 2, 1}), t) == 0.0);
}

TEST_CASE("rotate_mode: frontal slices of the rotation are lateral slices") {
  Rng rng(18);
  const Eigen::Index n = 4, K = 3, V = 2;
  const RealTensor3 t = oracles::random_tensor(n, K, V, rng);
  const RealTensor3 r = rotate_mode(t, kRotateClusterModeThird);
  REQUIRE(r.dims() == std::array<Eigen::Index, 3>{n, V, K});
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index v = 0; v < V; ++v) CHECK(r(i, v, k) == t(i, k, v));
}

TEST_CASE("rotate_mode: all six permutations invert cleanly") {
  Rng rng(19);
  const RealTensor3 t = oracles::random_tensor(2, 3, 4, rng);
  const ModePermutation perms[] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& perm : perms) {
    const RealTensor3 r = rotate_mode(rotate_mode(t, perm), inverse_permutation(perm));
    CHECK(max_abs_diff(r, t) == 0.0);
  }
  CHECK_THROWS_AS(rotate_mode(t, ModePermutation{0, 0, 1}), std::invalid_argument);
}

TEST_CASE("real_part_checked rejects large imaginary residue") {
  ComplexTensor3 t(1, 1, 1);
  t(0, 0, 0) = Complex(1.0, 1e-3);
  CHECK_THROWS_AS(real_part_checked(t), NumericError);
  t(0, 0, 0) = Complex(1.0, 1e-12);
  CHECK(real_part_checked(t)(0, 0, 0) == 1.0);
}
