#include "agtf/shrinkage.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace agtf {

void ProxParams::validate() const {
  if (!(tau > 0)) throw ConfigError("ProxParams: tau must be positive");
  if (!(p > 0) || p > 1) throw ConfigError("ProxParams: p must lie in (0, 1]");
  if (!(gst_tol > 0)) throw ConfigError("ProxParams: gst_tol must be positive");
  if (gst_max_iter < 1) throw ConfigError("ProxParams: gst_max_iter must be >= 1");
}

double gst_scalar(double sigma, double tau, double p, double tol, int max_iter) {
  if (sigma <= 0) return 0.0;
  if (p == 1.0) return std::max(sigma - tau, 0.0);

  const double nu = std::pow(2.0 * tau * (1.0 - p), 1.0 / (2.0 - p));
  const double threshold = nu + tau * p * std::pow(nu, p - 1.0);
  if (sigma <= threshold) return 0.0;

  double delta = sigma;
  for (int it = 0; it < max_iter; ++it) {
    const double next = sigma - tau * p * std::pow(delta, p - 1.0);
    if (std::abs(next - delta) < tol) return next;
    delta = next;
  }
  return delta;
}

namespace {

// Shrinks the singular values of one frequency slice and reconstructs it.
template <typename MatrixType>
MatrixType shrink_slice(const MatrixType& a, const ProxParams& params, Eigen::Index k) {
  Eigen::JacobiSVD<MatrixType> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericError("prox_schatten_p: SVD failed on frequency slice " + std::to_string(k));
  Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index j = 0; j < sv.size(); ++j)
    sv(j) = gst_scalar(sv(j), params.tau, params.p, params.gst_tol, params.gst_max_iter);
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace

double schatten_p_norm(const RealTensor3& t, double p, bool rotate) {
  if (!(p > 0) || p > 1) throw ConfigError("schatten_p_norm: p must lie in (0, 1]");
  const RealTensor3 oriented = rotate ? rotate_mode(t, kRotateClusterModeThird) : t;
  const ComplexTensor3 tf = mode3_dft(oriented);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < tf.depth(); ++k) {
    Eigen::JacobiSVD<CMatrix> svd(tf.slice(k));
    const Eigen::VectorXd& sv = svd.singularValues();
    for (Eigen::Index j = 0; j < sv.size(); ++j) acc += std::pow(sv(j), p);
  }
  return std::pow(acc, 1.0 / p);
}

RealTensor3 prox_schatten_p(const RealTensor3& z, const ProxParams& params,
                            bool use_conjugate_symmetry) {
  params.validate();
  const RealTensor3 oriented = params.rotate ? rotate_mode(z, kRotateClusterModeThird) : z;
  const Eigen::Index n3 = oriented.depth();
  const ComplexTensor3 zf = mode3_dft(oriented);
  ComplexTensor3 xf(oriented.rows(), oriented.cols(), n3);

  const Eigen::Index last = use_conjugate_symmetry ? n3 / 2 : n3 - 1;
  for (Eigen::Index k = 0; k <= last; ++k) {
    xf.slice(k) = shrink_slice<CMatrix>(zf.slice(k), params, k);
    if (use_conjugate_symmetry && k > 0 && 2 * k != n3)
      xf.slice(n3 - k) = xf.slice(k).conjugate();
  }

  RealTensor3 x = real_part_checked(mode3_dft(xf, /*inverse=*/true));
  return params.rotate ? rotate_mode(x, inverse_permutation(kRotateClusterModeThird)) : x;
}

}  // namespace agtf
