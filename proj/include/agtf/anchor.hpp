#pragma once

#include <cstdint>
#include <vector>

#include "agtf/tensor3.hpp"

namespace agtf {

/// One view of a multi-view dataset: rows are samples, columns are features.
struct ViewMatrix {
  Matrix data;
  int view_id = 0;
};

/// Per-view sample-to-anchor similarity graph: nonnegative, rows on the
/// probability simplex with at most neighbor_k nonzeros.
struct AnchorGraph {
  Matrix S;  // n x m
  int view_id = 0;
};

enum class AnchorMethod { kKMeans, kUniformRandom };

/// Standardize features in place: zero mean, unit variance per column;
/// zero-variance columns are left centered.
void standardize_features(Matrix& x);

/// Select m anchors in the view's feature space. kmeans runs Lloyd with
/// seeded k-means++ initialization (<= 100 iterations or centroid shift
/// < 1e-6); uniform_random picks m distinct sample rows.
Matrix select_anchors(const ViewMatrix& x, Eigen::Index m, std::uint64_t seed,
                      AnchorMethod method);

/// Adaptive-neighbor closed-form anchor graph. For sample i with sorted
/// squared anchor distances d_1 <= ... <= d_m,
///   s_ij = (d_{k+1} - d_j) / (k*d_{k+1} - sum_{h<=k} d_h)
/// on the k nearest anchors, 0 elsewhere. Degenerate rows (d_{k+1} equal to
/// all k nearest) fall back to uniform 1/k. Ties broken by lower anchor
/// index.
AnchorGraph build_anchor_graph(const ViewMatrix& x, const Matrix& anchors, Eigen::Index k);

/// Stack per-view graphs into the n x m x V tensor consumed by the solver.
RealTensor3 assemble_graph_tensor(const std::vector<AnchorGraph>& graphs);

}  // namespace agtf
