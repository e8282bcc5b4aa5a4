#include "agtf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "agtf/errors.hpp"

namespace agtf {

namespace {

int cluster_count(const LabelVector& labels) {
  int c = 0;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("labels must be nonnegative");
    c = std::max(c, l + 1);
  }
  return c;
}

/// Contingency counts: counts(i, j) = |{s : truth[s] == i && pred[s] == j}|,
/// zero-padded to k x k.
ProfitMatrix contingency(const LabelVector& truth, const LabelVector& pred, int k) {
  ProfitMatrix counts = ProfitMatrix::Zero(k, k);
  for (size_t s = 0; s < truth.size(); ++s) counts(truth[s], pred[s]) += 1;
  return counts;
}

void check_lengths(const LabelVector& truth, const LabelVector& pred) {
  if (truth.size() != pred.size())
    throw std::invalid_argument("label vectors must have equal length");
  if (truth.empty()) throw std::invalid_argument("label vectors must be nonempty");
}

}  // namespace

// Jonker-Volgenant style shortest augmenting path assignment with integer
// potentials; exact for integer profits. Solved as min-cost on negated
// profits.
std::vector<int> hungarian_max(const ProfitMatrix& profit) {
  if (profit.rows() != profit.cols())
    throw std::invalid_argument("hungarian_max: matrix must be square");
  const int n = static_cast<int>(profit.rows());
  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

  // 1-based arrays; way[j] remembers the augmenting path.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cost = -profit(i0 - 1, j - 1);
        const std::int64_t cur = cost - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> perm(n);
  for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
  return perm;
}

double acc(const LabelVector& truth, const LabelVector& pred) {
  check_lengths(truth, pred);
  const int k = std::max(cluster_count(truth), cluster_count(pred));
  const ProfitMatrix counts = contingency(truth, pred, k);
  const std::vector<int> perm = hungarian_max(counts);
  std::int64_t matched = 0;
  for (int i = 0; i < k; ++i) matched += counts(i, perm[i]);
  return static_cast<double>(matched) / static_cast<double>(truth.size());
}

double nmi(const LabelVector& truth, const LabelVector& pred) {
  check_lengths(truth, pred);
  const int k = std::max(cluster_count(truth), cluster_count(pred));
  const ProfitMatrix counts = contingency(truth, pred, k);
  const double n = static_cast<double>(truth.size());

  Eigen::VectorXd row = counts.cast<double>().rowwise().sum();
  Eigen::VectorXd col = counts.cast<double>().colwise().sum();

  double h_truth = 0.0, h_pred = 0.0;
  for (int i = 0; i < k; ++i)
    if (row(i) > 0) h_truth -= (row(i) / n) * std::log(row(i) / n);
  for (int j = 0; j < k; ++j)
    if (col(j) > 0) h_pred -= (col(j) / n) * std::log(col(j) / n);

  if (h_truth == 0.0 && h_pred == 0.0) return 1.0;  // both single-cluster
  if (h_truth == 0.0 || h_pred == 0.0) return 0.0;

  double mi = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double nij = static_cast<double>(counts(i, j));
      if (nij > 0) mi += (nij / n) * std::log(n * nij / (row(i) * col(j)));
    }
  const double value = mi / std::sqrt(h_truth * h_pred);
  return std::clamp(value, 0.0, 1.0);
}

double purity(const LabelVector& truth, const LabelVector& pred) {
  check_lengths(truth, pred);
  const int k = std::max(cluster_count(truth), cluster_count(pred));
  const ProfitMatrix counts = contingency(truth, pred, k);
  std::int64_t total = 0;
  for (int j = 0; j < k; ++j) total += counts.col(j).maxCoeff();
  return static_cast<double>(total) / static_cast<double>(truth.size());
}

}  // namespace agtf
