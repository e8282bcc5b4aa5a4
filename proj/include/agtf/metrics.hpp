#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace agtf {

using LabelVector = std::vector<int>;
using ProfitMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Exact max-profit assignment on a square nonnegative integer matrix.
/// Returns perm with perm[row] = assigned column.
std::vector<int> hungarian_max(const ProfitMatrix& profit);

/// Clustering accuracy under the best one-to-one label matching.
double acc(const LabelVector& truth, const LabelVector& pred);

/// Normalized mutual information, sqrt normalization
/// I(U;V) / sqrt(H(U) * H(V)) with natural-log entropies.
double nmi(const LabelVector& truth, const LabelVector& pred);

/// Fraction of samples in their predicted cluster's majority truth class.
double purity(const LabelVector& truth, const LabelVector& pred);

}  // namespace agtf
