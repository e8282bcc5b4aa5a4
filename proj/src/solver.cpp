#include "agtf/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "agtf/errors.hpp"

namespace agtf {

void SolverConfig::validate() const {
  if (K < 2) throw ConfigError("SolverConfig: K must be >= 2");
  if (lambda1 < 0 || lambda2 < 0)
    throw ConfigError("SolverConfig: lambda1 and lambda2 must be nonnegative");
  if (!(p > 0) || p > 1) throw ConfigError("SolverConfig: p must lie in (0, 1]");
  if (!(mu0 > 0) || !(rho0 > 0) || !(sigma0 > 0))
    throw ConfigError("SolverConfig: penalty initials must be positive");
  if (!(eta > 1)) throw ConfigError("SolverConfig: eta must be > 1");
  if (!(penalty_cap > 0)) throw ConfigError("SolverConfig: penalty_cap must be positive");
  if (!(epsilon > 0)) throw ConfigError("SolverConfig: epsilon must be positive");
  if (max_iter < 1) throw ConfigError("SolverConfig: max_iter must be >= 1");
}

Eigen::VectorXd simplex_project(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  // theta from the largest prefix whose entries stay positive after the
  // shift (Held et al. / Duchi et al. sort-based projection).
  double cumsum = 0.0, theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

namespace {

// Frequency-domain views of the state pieces an update needs. Recomputed per
// update; the tensors themselves stay in the time domain.
ComplexTensor3 fft(const RealTensor3& t) { return mode3_dft(t); }

RealTensor3 ifft_real(const ComplexTensor3& t) {
  return real_part_checked(mode3_dft(t, /*inverse=*/true));
}

}  // namespace

const ComplexTensor3& SolverState::frequency_S() const {
  if (S_freq_.rows() != S.rows() || S_freq_.cols() != S.cols() ||
      S_freq_.depth() != S.depth())
    S_freq_ = mode3_dft(S);
  return S_freq_;
}

void update_G(SolverState& state) {
  const Eigen::Index V = state.S.depth();
  const ComplexTensor3& Sf = state.frequency_S();
  const ComplexTensor3 Hf = fft(state.H);
  const ComplexTensor3 Ff = fft(state.F);
  const ComplexTensor3 Y3f = fft(state.Y3);
  const double sigma = state.sigma;

  ComplexTensor3 B1f(state.G.rows(), state.G.cols(), V);
  for (Eigen::Index v = 0; v < V; ++v) {
    const CMatrix W1 = Ff.slice(v) - Y3f.slice(v) / sigma;
    B1f.slice(v) =
        (Sf.slice(v).adjoint() * Hf.slice(v) + (sigma / 2.0) * W1) / (1.0 + sigma / 2.0);
  }
  const RealTensor3 B1 = ifft_real(B1f);

  for (Eigen::Index v = 0; v < V; ++v) {
    auto g = state.G.slice(v);
    const auto b = B1.slice(v);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      g.row(i) = simplex_project(b.row(i).transpose()).transpose();
  }
}

void update_H(SolverState& state) {
  const Eigen::Index V = state.S.depth();
  const ComplexTensor3& Sf = state.frequency_S();
  const ComplexTensor3 Gf = fft(state.G);
  const ComplexTensor3 Qf = fft(state.Q);
  const ComplexTensor3 Jf = fft(state.J);
  const ComplexTensor3 Y1f = fft(state.Y1);
  const ComplexTensor3 Y2f = fft(state.Y2);

  ComplexTensor3 Hf(state.H.rows(), state.H.cols(), V);
  for (Eigen::Index v = 0; v < V; ++v) {
    const CMatrix W2 = Qf.slice(v) - Y1f.slice(v) / state.mu;
    const CMatrix W3 = Jf.slice(v) - Y2f.slice(v) / state.rho;
    const CMatrix B2 = 2.0 * Sf.slice(v) * Gf.slice(v) + state.mu * W2 + state.rho * W3;
    Eigen::JacobiSVD<CMatrix> svd(B2, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
      throw NumericError("update_H: SVD failed on frequency slice " + std::to_string(v));
    Hf.slice(v) = svd.matrixU() * svd.matrixV().adjoint();
  }
  state.H = ifft_real(Hf);
}

void update_Q(SolverState& state) {
  const RealTensor3& H = state.H;
  for (Eigen::Index i = 0; i < state.Q.size(); ++i)
    state.Q.data()[i] = std::max(H.data()[i] + state.Y1.data()[i] / state.mu, 0.0);
}

namespace {

// J and F share the Schatten prox structure; lambda == 0 degenerates to the
// unpenalized minimizer target + multiplier correction.
RealTensor3 schatten_prox_step(const RealTensor3& target, const RealTensor3& multiplier,
                               double penalty, double lambda, double p, bool rotate) {
  RealTensor3 z = target;
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] += multiplier.data()[i] / penalty;
  if (lambda == 0.0) return z;
  ProxParams params;
  params.tau = lambda / penalty;
  params.p = p;
  params.rotate = rotate;
  return prox_schatten_p(z, params);
}

}  // namespace

void update_J(SolverState& state, const SolverConfig& config) {
  state.J = schatten_prox_step(state.H, state.Y2, state.rho, config.lambda1, config.p,
                               config.rotate_prox);
}

void update_F(SolverState& state, const SolverConfig& config) {
  state.F = schatten_prox_step(state.G, state.Y3, state.sigma, config.lambda2, config.p,
                               config.rotate_prox_anchor);
}

void update_multipliers(SolverState& state, const SolverConfig& config) {
  for (Eigen::Index i = 0; i < state.Y1.size(); ++i)
    state.Y1.data()[i] += state.mu * (state.H.data()[i] - state.Q.data()[i]);
  for (Eigen::Index i = 0; i < state.Y2.size(); ++i)
    state.Y2.data()[i] += state.rho * (state.H.data()[i] - state.J.data()[i]);
  for (Eigen::Index i = 0; i < state.Y3.size(); ++i)
    state.Y3.data()[i] += state.sigma * (state.G.data()[i] - state.F.data()[i]);
  state.mu = std::min(config.eta * state.mu, config.penalty_cap);
  state.rho = std::min(config.eta * state.rho, config.penalty_cap);
  state.sigma = std::min(config.eta * state.sigma, config.penalty_cap);
}

Residuals residuals(const SolverState& state) {
  Residuals r;
  r.res_HQ = (state.H - state.Q).max_abs();
  r.res_HJ = (state.H - state.J).max_abs();
  r.res_GF = (state.G - state.F).max_abs();
  return r;
}

double objective(const SolverState& state, const SolverConfig& config) {
  // ||S - H * t_transpose(G)||_F^2 expanded per frequency slice,
  //   (1/V) sum_v [ ||Sbar||^2 - 2 Re<Gbar, Sbar^H Hbar> + <Gbar (Hbar^H Hbar), Gbar> ],
  // which avoids materializing any n x m intermediate.
  const Eigen::Index V = state.S.depth();
  const ComplexTensor3& Sf = state.frequency_S();
  const ComplexTensor3 Hf = fft(state.H);
  const ComplexTensor3 Gf = fft(state.G);
  double fit = static_cast<double>(V) * state.S.squared_norm();
  for (Eigen::Index v = 0; v < V; ++v) {
    const CMatrix sh = Sf.slice(v).adjoint() * Hf.slice(v);
    const CMatrix gram = Hf.slice(v).adjoint() * Hf.slice(v);
    fit -= 2.0 * Gf.slice(v).conjugate().cwiseProduct(sh).sum().real();
    fit += (CMatrix(Gf.slice(v)) * gram).cwiseProduct(Gf.slice(v).conjugate()).sum().real();
  }
  double value = fit / static_cast<double>(V);
  if (config.lambda1 > 0)
    value += config.lambda1 *
             std::pow(schatten_p_norm(state.H, config.p, config.rotate_prox), config.p);
  if (config.lambda2 > 0)
    value += config.lambda2 *
             std::pow(schatten_p_norm(state.G, config.p, config.rotate_prox_anchor), config.p);
  return value;
}

SolverState init_state(const RealTensor3& S, const SolverConfig& config) {
  config.validate();
  const Eigen::Index n = S.rows(), m = S.cols(), V = S.depth();
  const Eigen::Index K = config.K;
  if (K > std::min(n, m)) throw ConfigError("init_state: K must be <= min(n, m)");

  SolverState state;
  state.S = S;
  state.mu = config.mu0;
  state.rho = config.rho0;
  state.sigma = config.sigma0;

  // Every frequency slice of H starts as the first K columns of I_n, which
  // in the time domain puts that matrix in slice 1 and zeros elsewhere.
  ComplexTensor3 Hf(n, K, V);
  for (Eigen::Index v = 0; v < V; ++v)
    Hf.slice(v) = CMatrix::Identity(n, K);
  state.H = ifft_real(Hf);
  state.Q = state.H;
  state.J = state.H;

  state.Y1 = RealTensor3::zeros(n, K, V);
  state.Y2 = RealTensor3::zeros(n, K, V);
  state.Y3 = RealTensor3::zeros(m, K, V);

  state.G = RealTensor3::zeros(m, K, V);
  state.F = RealTensor3::zeros(m, K, V);
  update_G(state);  // one simplex-projected least-squares pass, Y3 = 0, F = 0
  state.F = state.G;

  state.iter = 0;
  return state;
}

ClusterResult extract_labels(const SolverState& state, const SolverConfig& config) {
  const Eigen::Index V = state.S.depth();

  auto average_slices = [V](const RealTensor3& t) {
    Matrix avg = Matrix::Zero(t.rows(), t.cols());
    for (Eigen::Index v = 0; v < V; ++v) avg += t.slice(v);
    return Matrix(avg / static_cast<double>(V));
  };
  auto row_argmax = [](const Matrix& a) {
    std::vector<int> labels(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      int best = 0;
      for (Eigen::Index k = 1; k < a.cols(); ++k)
        if (a(i, k) > a(i, best)) best = static_cast<int>(k);
      labels[i] = best;
    }
    return labels;
  };

  ClusterResult result;
  result.sample_labels = row_argmax(average_slices(state.Q));
  result.anchor_labels = row_argmax(average_slices(state.G));
  result.iterations = state.iter;
  result.trace = state.trace;
  const Residuals r = residuals(state);
  result.converged = state.iter > 0 && r.all_below(config.epsilon);
  return result;
}

std::pair<SolverState, ClusterResult> run(const RealTensor3& S, const SolverConfig& config,
                                          const IterationObserver& observer) {
  SolverState state = init_state(S, config);

  for (int it = 1; it <= config.max_iter; ++it) {
    TraceRecord record;
    record.iter = it;
    record.mu = state.mu;
    record.rho = state.rho;
    record.sigma = state.sigma;

    update_G(state);
    update_H(state);
    update_Q(state);
    update_J(state, config);
    update_F(state, config);

    const Residuals r = residuals(state);
    record.res_HQ = r.res_HQ;
    record.res_HJ = r.res_HJ;
    record.res_GF = r.res_GF;
    record.objective = objective(state, config);

    update_multipliers(state, config);
    state.iter = it;
    state.trace.push_back(record);
    if (observer) observer(state);

    if (r.all_below(config.epsilon)) break;
  }

  ClusterResult result = extract_labels(state, config);
  return {std::move(state), std::move(result)};
}

}  // namespace agtf
