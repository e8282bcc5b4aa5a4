// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "agtf/rng.hpp"
#include "agtf/tensor3.hpp"

namespace oracles {

using agtf::CMatrix;
using agtf::Complex;
using agtf::ComplexTensor3;
using agtf::Matrix;
using agtf::RealTensor3;

// Tube-by-tube DFT summation, coded directly from the definition.
inline ComplexTensor3 dft_summation(const RealTensor3& t, bool inverse) {
  const Eigen::Index n3 = t.depth();
  ComplexTensor3 out(t.rows(), t.cols(), n3);
  const double sign = inverse ? 1.0 : -1.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      for (Eigen::Index k = 0; k < n3; ++k) {
        Complex acc(0, 0);
        for (Eigen::Index l = 0; l < n3; ++l) {
          const double angle =
              sign * 2.0 * M_PI * static_cast<double>(k) * static_cast<double>(l) /
              static_cast<double>(n3);
          acc += t(i, j, l) * std::polar(1.0, angle);
        }
        if (inverse) acc /= static_cast<double>(n3);
        out(i, j, k) = acc;
      }
  return out;
}

// Block-circulant unfolding: bcirc(A) is (n1*n3) x (m*n3) with block (r, c)
// equal to A's frontal slice (r - c mod n3); unfold(B) stacks B's frontal
// slices vertically. fold(bcirc(A) * unfold(B)) is the t-product.
inline RealTensor3 t_product_bcirc(const RealTensor3& a, const RealTensor3& b) {
  const Eigen::Index n1 = a.rows(), m = a.cols(), n3 = a.depth(), n2 = b.cols();
  Matrix bcirc(n1 * n3, m * n3);
  for (Eigen::Index r = 0; r < n3; ++r)
    for (Eigen::Index c = 0; c < n3; ++c) {
      const Eigen::Index k = ((r - c) % n3 + n3) % n3;
      bcirc.block(r * n1, c * m, n1, m) = a.slice(k);
    }
  Matrix unfold(m * n3, n2);
  for (Eigen::Index k = 0; k < n3; ++k) unfold.block(k * m, 0, m, n2) = b.slice(k);
  const Matrix prod = bcirc * unfold;
  RealTensor3 out(n1, n2, n3);
  for (Eigen::Index k = 0; k < n3; ++k) out.slice(k) = prod.block(k * n1, 0, n1, n2);
  return out;
}

// Singular values of every frequency slice, via dense SVD on the
// summation-DFT transform.
inline std::vector<Eigen::VectorXd> frequency_singular_values(const RealTensor3& t) {
  const ComplexTensor3 tf = dft_summation(t, false);
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index k = 0; k < t.depth(); ++k) {
    Eigen::JacobiSVD<CMatrix> svd(tf.slice(k));
    out.push_back(svd.singularValues());
  }
  return out;
}

// Grid search for argmin_{d in [0, sigma]} 0.5*(d-sigma)^2 + tau*d^p at the
// given step, refined by a finer local pass around the best grid point.
inline double gst_grid_search(double sigma, double tau, double p, double step = 1e-5) {
  auto objective = [&](double d) { return 0.5 * (d - sigma) * (d - sigma) + tau * std::pow(d, p); };
  double best_d = 0.0, best_f = objective(0.0);
  for (double d = step; d <= sigma + step / 2; d += step) {
    const double f = objective(d);
    if (f < best_f) {
      best_f = f;
      best_d = d;
    }
  }
  const double lo = std::max(0.0, best_d - step), hi = std::min(sigma, best_d + step);
  for (double d = lo; d <= hi; d += step / 100) {
    const double f = objective(d);
    if (f < best_f) {
      best_f = f;
      best_d = d;
    }
  }
  return best_d;
}

inline RealTensor3 random_tensor(Eigen::Index n1, Eigen::Index n2, Eigen::Index n3,
                                 agtf::Rng& rng) {
  RealTensor3 t(n1, n2, n3);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal();
  return t;
}

// Maximum assignment profit by enumerating all permutations (K <= ~8).
inline std::int64_t assignment_brute_force(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& profit) {
  const int n = static_cast<int>(profit.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  do {
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) total += profit(i, perm[i]);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct Contingency {
  std::vector<std::vector<long long>> counts;  // truth x pred
  std::vector<long long> truth_sizes, pred_sizes;
  long long n = 0;
};

inline Contingency contingency_table(const std::vector<int>& truth,
                                     const std::vector<int>& pred) {
  int kt = 0, kp = 0;
  for (int l : truth) kt = std::max(kt, l + 1);
  for (int l : pred) kp = std::max(kp, l + 1);
  Contingency c;
  c.counts.assign(kt, std::vector<long long>(kp, 0));
  c.truth_sizes.assign(kt, 0);
  c.pred_sizes.assign(kp, 0);
  c.n = static_cast<long long>(truth.size());
  for (size_t s = 0; s < truth.size(); ++s) {
    c.counts[truth[s]][pred[s]] += 1;
    c.truth_sizes[truth[s]] += 1;
    c.pred_sizes[pred[s]] += 1;
  }
  return c;
}

// NMI recomputed straight from the contingency table definitions.
inline double nmi_reference(const std::vector<int>& truth, const std::vector<int>& pred) {
  const Contingency c = contingency_table(truth, pred);
  const double n = static_cast<double>(c.n);
  double hu = 0, hv = 0, mi = 0;
  for (long long s : c.truth_sizes)
    if (s > 0) hu -= s / n * std::log(s / n);
  for (long long s : c.pred_sizes)
    if (s > 0) hv -= s / n * std::log(s / n);
  if (hu == 0 && hv == 0) return 1.0;
  if (hu == 0 || hv == 0) return 0.0;
  for (size_t i = 0; i < c.counts.size(); ++i)
    for (size_t j = 0; j < c.counts[i].size(); ++j) {
      const double nij = static_cast<double>(c.counts[i][j]);
      if (nij > 0)
        mi += nij / n *
              std::log(n * nij /
                       (static_cast<double>(c.truth_sizes[i]) *
                        static_cast<double>(c.pred_sizes[j])));
    }
  return mi / std::sqrt(hu * hv);
}

inline double purity_reference(const std::vector<int>& truth, const std::vector<int>& pred) {
  const Contingency c = contingency_table(truth, pred);
  long long total = 0;
  for (size_t j = 0; j < c.pred_sizes.size(); ++j) {
    long long best = 0;
    for (size_t i = 0; i < c.counts.size(); ++i) best = std::max(best, c.counts[i][j]);
    total += best;
  }
  return static_cast<double>(total) / static_cast<double>(c.n);
}

}  // namespace oracles
