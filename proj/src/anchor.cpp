#include "agtf/anchor.hpp"

#include <algorithm>
#include <numeric>

#include "agtf/errors.hpp"
#include "agtf/rng.hpp"

namespace agtf {

void standardize_features(Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    const double var = x.col(j).squaredNorm() / static_cast<double>(x.rows());
    if (var > 0) x.col(j) /= std::sqrt(var);
  }
}

namespace {

Matrix sample_rows(const Matrix& x, Eigen::Index m, Rng& rng) {
  // Partial Fisher-Yates over row indices: m distinct rows.
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = i + static_cast<Eigen::Index>(rng.uniform_int(n - i));
    std::swap(idx[i], idx[j]);
  }
  Matrix anchors(m, x.cols());
  for (Eigen::Index i = 0; i < m; ++i) anchors.row(i) = x.row(idx[i]);
  return anchors;
}

// Squared Euclidean distances from every row of x to every row of centers.
Matrix squared_distances(const Matrix& x, const Matrix& centers) {
  const Eigen::VectorXd xn = x.rowwise().squaredNorm();
  const Eigen::VectorXd cn = centers.rowwise().squaredNorm();
  Matrix d = (-2.0 * x * centers.transpose());
  d.colwise() += xn;
  d.rowwise() += cn.transpose();
  return d.cwiseMax(0.0);
}

Matrix kmeans_pp_init(const Matrix& x, Eigen::Index m, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(m, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_int(n)));
  Eigen::VectorXd dist2 =
      (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (Eigen::Index c = 1; c < m; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0) {
      const double target = rng.uniform01() * total;
      double acc = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_int(n));
    }
    centers.row(c) = x.row(pick);
    dist2 = dist2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

Matrix kmeans(const Matrix& x, Eigen::Index m, Rng& rng) {
  constexpr int kMaxIter = 100;
  constexpr double kShiftTol = 1e-6;
  const Eigen::Index n = x.rows();
  Matrix centers = kmeans_pp_init(x, m, rng);
  std::vector<Eigen::Index> assign(n, 0);

  for (int it = 0; it < kMaxIter; ++it) {
    const Matrix d = squared_distances(x, centers);
    for (Eigen::Index i = 0; i < n; ++i) d.row(i).minCoeff(&assign[i]);

    Matrix next = Matrix::Zero(m, x.cols());
    std::vector<Eigen::Index> count(m, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(assign[i]) += x.row(i);
      ++count[assign[i]];
    }
    for (Eigen::Index c = 0; c < m; ++c) {
      if (count[c] > 0) {
        next.row(c) /= static_cast<double>(count[c]);
      } else {
        // Re-seed an empty cluster at the point farthest from its center.
        Eigen::Index far = 0;
        d.rowwise().minCoeff().maxCoeff(&far);
        next.row(c) = x.row(far);
      }
    }
    const double shift = (next - centers).rowwise().norm().maxCoeff();
    centers = next;
    if (shift < kShiftTol) break;
  }
  return centers;
}

}  // namespace

Matrix select_anchors(const ViewMatrix& x, Eigen::Index m, std::uint64_t seed,
                      AnchorMethod method) {
  if (x.data.rows() == 0 || x.data.cols() == 0)
    throw DataError("select_anchors: empty view matrix");
  if (m < 1 || m > x.data.rows())
    throw ConfigError("select_anchors: need 1 <= m <= n");
  Rng rng(seed);
  switch (method) {
    case AnchorMethod::kUniformRandom:
      return sample_rows(x.data, m, rng);
    case AnchorMethod::kKMeans:
      return kmeans(x.data, m, rng);
  }
  throw ConfigError("select_anchors: unknown method");
}

AnchorGraph build_anchor_graph(const ViewMatrix& x, const Matrix& anchors, Eigen::Index k) {
  const Eigen::Index n = x.data.rows();
  const Eigen::Index m = anchors.rows();
  if (x.data.cols() != anchors.cols())
    throw ConfigError("build_anchor_graph: feature dimension mismatch");
  if (k < 1 || k >= m) throw ConfigError("build_anchor_graph: need 1 <= k < m");

  const Matrix d2 = squared_distances(x.data, anchors);
  Matrix s = Matrix::Zero(n, m);
  std::vector<Eigen::Index> order(m);

  for (Eigen::Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return d2(i, a) != d2(i, b) ? d2(i, a) < d2(i, b) : a < b;
    });
    const double d_kp1 = d2(i, order[k]);
    double sum_k = 0;
    for (Eigen::Index h = 0; h < k; ++h) sum_k += d2(i, order[h]);
    const double denom = static_cast<double>(k) * d_kp1 - sum_k;
    if (denom > 0) {
      for (Eigen::Index h = 0; h < k; ++h) s(i, order[h]) = (d_kp1 - d2(i, order[h])) / denom;
    } else {
      // All k nearest distances equal d_{k+1}: uniform fallback.
      for (Eigen::Index h = 0; h < k; ++h) s(i, order[h]) = 1.0 / static_cast<double>(k);
    }
  }
  return AnchorGraph{std::move(s), x.view_id};
}

RealTensor3 assemble_graph_tensor(const std::vector<AnchorGraph>& graphs) {
  if (graphs.empty()) throw ConfigError("assemble_graph_tensor: no views");
  const Eigen::Index n = graphs.front().S.rows();
  const Eigen::Index m = graphs.front().S.cols();
  RealTensor3 t(n, m, static_cast<Eigen::Index>(graphs.size()));
  for (size_t v = 0; v < graphs.size(); ++v) {
    if (graphs[v].S.rows() != n || graphs[v].S.cols() != m)
      throw ConfigError("assemble_graph_tensor: graph shape mismatch across views");
    t.slice(static_cast<Eigen::Index>(v)) = graphs[v].S;
  }
  return t;
}

}  // namespace agtf
