#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "agtf/errors.hpp"

namespace agtf {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Dense third-order tensor, frontal-slice-major storage (slice index is the
/// slowest-varying one, column-major inside each slice).
template <typename Scalar>
class Tensor3 {
 public:
  using SliceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SliceMap = Eigen::Map<SliceMatrix>;
  using ConstSliceMap = Eigen::Map<const SliceMatrix>;

  Tensor3() : n1_(0), n2_(0), n3_(0) {}

  Tensor3(Eigen::Index n1, Eigen::Index n2, Eigen::Index n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(static_cast<size_t>(n1 * n2 * n3), Scalar(0)) {
    if (n1 <= 0 || n2 <= 0 || n3 <= 0)
      throw std::invalid_argument("Tensor3: dimensions must be positive");
  }

  static Tensor3 zeros(Eigen::Index n1, Eigen::Index n2, Eigen::Index n3) {
    return Tensor3(n1, n2, n3);
  }

  /// t-algebra identity: first frontal slice is I, the rest are zero.
  static Tensor3 identity(Eigen::Index n, Eigen::Index n3) {
    Tensor3 t(n, n, n3);
    t.slice(0) = SliceMatrix::Identity(n, n);
    return t;
  }

  Eigen::Index rows() const { return n1_; }
  Eigen::Index cols() const { return n2_; }
  Eigen::Index depth() const { return n3_; }
  std::array<Eigen::Index, 3> dims() const { return {n1_, n2_, n3_}; }
  Eigen::Index size() const { return n1_ * n2_ * n3_; }

  Scalar& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return data_[static_cast<size_t>(k * n1_ * n2_ + j * n1_ + i)];
  }
  Scalar operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[static_cast<size_t>(k * n1_ * n2_ + j * n1_ + i)];
  }

  /// Frontal slice k as an n1 x n2 matrix view.
  SliceMap slice(Eigen::Index k) {
    return SliceMap(data_.data() + k * n1_ * n2_, n1_, n2_);
  }
  ConstSliceMap slice(Eigen::Index k) const {
    return ConstSliceMap(data_.data() + k * n1_ * n2_, n1_, n2_);
  }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  bool same_dims(const Tensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

  double squared_norm() const {
    double s = 0;
    for (const Scalar& v : data_) s += std::norm(v);
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }

  /// Largest absolute entry (infinity norm over all entries).
  double max_abs() const {
    double m = 0;
    for (const Scalar& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  Eigen::Index n1_, n2_, n3_;
  std::vector<Scalar> data_;
};

using RealTensor3 = Tensor3<double>;
using ComplexTensor3 = Tensor3<Complex>;

// ---- elementwise arithmetic --------------------------------------------

template <typename Scalar>
Tensor3<Scalar> operator+(const Tensor3<Scalar>& a, const Tensor3<Scalar>& b) {
  if (!a.same_dims(b)) throw std::invalid_argument("Tensor3 +: dimension mismatch");
  Tensor3<Scalar> c = a;
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

template <typename Scalar>
Tensor3<Scalar> operator-(const Tensor3<Scalar>& a, const Tensor3<Scalar>& b) {
  if (!a.same_dims(b)) throw std::invalid_argument("Tensor3 -: dimension mismatch");
  Tensor3<Scalar> c = a;
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

template <typename Scalar>
Tensor3<Scalar> operator*(double s, const Tensor3<Scalar>& a) {
  Tensor3<Scalar> c = a;
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] *= s;
  return c;
}

ComplexTensor3 to_complex(const RealTensor3& t);

/// Real part of a complex tensor; throws NumericError if any imaginary
/// magnitude exceeds `imag_tol` (guards frequency-domain pipelines fed with
/// real data).
RealTensor3 real_part_checked(const ComplexTensor3& t, double imag_tol = 1e-8);

RealTensor3 real_part(const ComplexTensor3& t);

// ---- mode-3 DFT ---------------------------------------------------------

/// DFT along the third mode applied to every tube T[i,j,:]. Forward is the
/// unnormalized transform; inverse uses conjugated twiddles scaled by 1/n3,
/// so inverse(forward(T)) == T.
ComplexTensor3 mode3_dft(const ComplexTensor3& t, bool inverse = false);
ComplexTensor3 mode3_dft(const RealTensor3& t, bool inverse = false);

// ---- t-algebra ----------------------------------------------------------

/// t-product A * B: slice-wise products in the mode-3 DFT domain, equal to
/// the block-circulant matrix product in the time domain.
RealTensor3 t_product(const RealTensor3& a, const RealTensor3& b);
ComplexTensor3 t_product(const ComplexTensor3& a, const ComplexTensor3& b);

/// t-transpose: slice 1 (conjugate-)transposed, slices 2..n3 transposed and
/// reversed in order.
template <typename Scalar>
Tensor3<Scalar> t_transpose(const Tensor3<Scalar>& a) {
  Tensor3<Scalar> b(a.cols(), a.rows(), a.depth());
  b.slice(0) = a.slice(0).adjoint();
  for (Eigen::Index k = 1; k < a.depth(); ++k)
    b.slice(a.depth() - k) = a.slice(k).adjoint();
  return b;
}

struct TSvd {
  RealTensor3 U;      // n1 x n1 x n3
  RealTensor3 S;      // n1 x n2 x n3, f-diagonal, slices sorted descending
  RealTensor3 V;      // n2 x n2 x n3; T == U * S * t_transpose(V)
};

/// Full t-SVD of a real tensor: per-frequency-slice SVDs with conjugate
/// symmetry enforced across mirrored slices so the factors are real.
TSvd t_svd(const RealTensor3& t);

// ---- mode rotation ------------------------------------------------------

/// Mode permutation: output dim l equals input dim perm[l]; element
/// (x0,x1,x2) of the input lands at output index (x_perm[0], x_perm[1],
/// x_perm[2]).
using ModePermutation = std::array<int, 3>;

inline constexpr ModePermutation kRotateClusterModeThird = {0, 2, 1};

template <typename Scalar>
Tensor3<Scalar> rotate_mode(const Tensor3<Scalar>& t, const ModePermutation& perm) {
  std::array<bool, 3> seen = {false, false, false};
  for (int p : perm) {
    if (p < 0 || p > 2 || seen[p])
      throw std::invalid_argument("rotate_mode: not a permutation of {0,1,2}");
    seen[p] = true;
  }
  const std::array<Eigen::Index, 3> d = t.dims();
  Tensor3<Scalar> out(d[perm[0]], d[perm[1]], d[perm[2]]);
  std::array<Eigen::Index, 3> x;
  for (x[2] = 0; x[2] < d[2]; ++x[2])
    for (x[1] = 0; x[1] < d[1]; ++x[1])
      for (x[0] = 0; x[0] < d[0]; ++x[0])
        out(x[perm[0]], x[perm[1]], x[perm[2]]) = t(x[0], x[1], x[2]);
  return out;
}

inline ModePermutation inverse_permutation(const ModePermutation& perm) {
  ModePermutation inv{};
  for (int l = 0; l < 3; ++l) inv[perm[l]] = l;
  return inv;
}

}  // namespace agtf
