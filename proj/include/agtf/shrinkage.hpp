#pragma once

#include "agtf/tensor3.hpp"

namespace agtf {

/// Parameters of the tensor Schatten-p proximal operator.
struct ProxParams {
  double tau = 1.0;          // threshold, must be > 0
  double p = 0.5;            // in (0, 1]
  bool rotate = true;        // prox in the cluster-mode-third orientation
  double gst_tol = 1e-10;
  int gst_max_iter = 100;

  void validate() const;
};

/// Generalized soft thresholding: argmin_{d >= 0} 0.5*(d - sigma)^2 + tau*d^p.
/// p = 1 is the closed-form soft threshold; for p < 1 the result is 0 below
/// the GST threshold and otherwise the fixed point of
/// d <- sigma - tau*p*d^(p-1) started at d = sigma.
double gst_scalar(double sigma, double tau, double p, double tol = 1e-10, int max_iter = 100);

/// Tensor Schatten p-norm: (sum over frequency slices i, singular values j of
/// sigma_j(Tbar^(i))^p)^(1/p), on the optionally rotated tensor.
double schatten_p_norm(const RealTensor3& t, double p, bool rotate);

/// Proximal operator of tau * ||.||_Sp^p: per-frequency-slice singular value
/// shrinkage by gst_scalar, applied in the rotated orientation when
/// params.rotate is set. `use_conjugate_symmetry` computes only the first
/// ceil((n3+1)/2) frequency slices and mirrors the rest; the all-slices path
/// is the correctness reference.
RealTensor3 prox_schatten_p(const RealTensor3& z, const ProxParams& params,
                            bool use_conjugate_symmetry = false);

}  // namespace agtf
