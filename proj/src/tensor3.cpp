#include "agtf/tensor3.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace agtf {

namespace {

// Twiddle matrix W with W(r,c) = exp(-2*pi*i*r*c/n), conjugated for the
// inverse transform.
CMatrix dft_matrix(Eigen::Index n, bool inverse) {
  CMatrix w(n, n);
  const double sign = inverse ? 1.0 : -1.0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((r * c) % n) /
                           static_cast<double>(n);
      w(r, c) = Complex(std::cos(angle), std::sin(angle));
    }
  if (inverse) w /= static_cast<double>(n);
  return w;
}

ComplexTensor3 apply_mode3(const ComplexTensor3& t, const CMatrix& w) {
  ComplexTensor3 out(t.rows(), t.cols(), t.depth());
  for (Eigen::Index k = 0; k < t.depth(); ++k) {
    auto dst = out.slice(k);
    dst.setZero();
    for (Eigen::Index j = 0; j < t.depth(); ++j) dst += w(k, j) * t.slice(j);
  }
  return out;
}

}  // namespace

ComplexTensor3 to_complex(const RealTensor3& t) {
  ComplexTensor3 c(t.rows(), t.cols(), t.depth());
  for (Eigen::Index i = 0; i < t.size(); ++i) c.data()[i] = Complex(t.data()[i], 0.0);
  return c;
}

RealTensor3 real_part(const ComplexTensor3& t) {
  RealTensor3 r(t.rows(), t.cols(), t.depth());
  for (Eigen::Index i = 0; i < t.size(); ++i) r.data()[i] = t.data()[i].real();
  return r;
}

RealTensor3 real_part_checked(const ComplexTensor3& t, double imag_tol) {
  double max_imag = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i)
    max_imag = std::max(max_imag, std::abs(t.data()[i].imag()));
  if (max_imag > imag_tol)
    throw NumericError("real_part_checked: imaginary residue " + std::to_string(max_imag) +
                       " exceeds tolerance " + std::to_string(imag_tol));
  return real_part(t);
}

ComplexTensor3 mode3_dft(const ComplexTensor3& t, bool inverse) {
  return apply_mode3(t, dft_matrix(t.depth(), inverse));
}

ComplexTensor3 mode3_dft(const RealTensor3& t, bool inverse) {
  return mode3_dft(to_complex(t), inverse);
}

ComplexTensor3 t_product(const ComplexTensor3& a, const ComplexTensor3& b) {
  if (a.cols() != b.rows() || a.depth() != b.depth())
    throw std::invalid_argument("t_product: dimension mismatch");
  const ComplexTensor3 af = mode3_dft(a);
  const ComplexTensor3 bf = mode3_dft(b);
  ComplexTensor3 cf(a.rows(), b.cols(), a.depth());
  for (Eigen::Index k = 0; k < a.depth(); ++k) cf.slice(k) = af.slice(k) * bf.slice(k);
  return mode3_dft(cf, /*inverse=*/true);
}

RealTensor3 t_product(const RealTensor3& a, const RealTensor3& b) {
  return real_part_checked(t_product(to_complex(a), to_complex(b)));
}

TSvd t_svd(const RealTensor3& t) {
  const Eigen::Index n1 = t.rows(), n2 = t.cols(), n3 = t.depth();
  const ComplexTensor3 tf = mode3_dft(t);
  ComplexTensor3 uf(n1, n1, n3), sf(n1, n2, n3), vf(n2, n2, n3);

  // Slices 0 and n3/2 (even n3) of the spectrum of a real tensor are real;
  // the rest come in conjugate pairs. Decompose the first half and mirror
  // so the time-domain factors are real.
  const Eigen::Index half = n3 / 2 + 1;
  for (Eigen::Index k = 0; k < half; ++k) {
    const bool self_conjugate = (k == 0) || (2 * k == n3);
    CMatrix u, v;
    Eigen::VectorXd sv;
    if (self_conjugate) {
      Eigen::JacobiSVD<Matrix> svd(tf.slice(k).real(),
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.info() != Eigen::Success)
        throw NumericError("t_svd: SVD failed on frequency slice " + std::to_string(k));
      u = svd.matrixU().cast<Complex>();
      v = svd.matrixV().cast<Complex>();
      sv = svd.singularValues();
    } else {
      Eigen::JacobiSVD<CMatrix> svd(tf.slice(k), Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.info() != Eigen::Success)
        throw NumericError("t_svd: SVD failed on frequency slice " + std::to_string(k));
      u = svd.matrixU();
      v = svd.matrixV();
      sv = svd.singularValues();
    }
    uf.slice(k) = u;
    vf.slice(k) = v;
    auto sslice = sf.slice(k);
    sslice.setZero();
    for (Eigen::Index j = 0; j < sv.size(); ++j) sslice(j, j) = Complex(sv(j), 0.0);
    if (!self_conjugate) {
      uf.slice(n3 - k) = u.conjugate();
      vf.slice(n3 - k) = v.conjugate();
      sf.slice(n3 - k) = sf.slice(k);
    }
  }

  TSvd out;
  out.U = real_part_checked(mode3_dft(uf, true));
  out.S = real_part_checked(mode3_dft(sf, true));
  out.V = real_part_checked(mode3_dft(vf, true));
  return out;
}

}  // namespace agtf
