#include "ringsim/meanfield.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "integrator.hpp"

namespace ringsim {
namespace {

constexpr cplx kI(0.0, 1.0);

double norm_of(const MeanFieldState& d) {
  return std::sqrt(d.p_ee * d.p_ee + std::norm(d.s_ge) + std::norm(d.s_ring));
}

void validate(const MeanFieldParams& p) {
  if (p.n < 0) throw InvalidArgument("mean-field n must be non-negative");
  if (!(p.rabi >= 0.0) || !std::isfinite(p.rabi)) {
    throw InvalidArgument("mean-field rabi must be finite and non-negative");
  }
  if (!(p.gamma_T >= 0.0)) throw InvalidArgument("mean-field gamma_T must be non-negative");
  if (!(p.gamma_sym >= 0.0)) throw InvalidArgument("mean-field gamma_sym must be non-negative");
  if (!(p.gamma_I > 0.0)) throw InvalidArgument("mean-field gamma_I must be positive");
}

}  // namespace

const char* variant_name(MeanFieldVariant v) {
  return v == MeanFieldVariant::paper ? "meanfield_paper" : "meanfield_rederived";
}

MeanFieldParams MeanFieldParams::from_config(const SystemConfig& config, double rabi,
                                             double delta, MeanFieldVariant variant) {
  const SymmetricBlock b = symmetric_block(config);
  MeanFieldParams p;
  p.delta = delta;
  p.rabi = rabi;
  p.j_sym = b.j_R;
  p.gamma_sym = b.gamma_R;
  p.j = b.j;
  p.gamma = b.gamma;
  p.n = config.n_ring();
  p.gamma_T = config.impurity.gamma_T;
  p.gamma0 = config.units.gamma0;
  p.gamma_I = config.impurity.gamma_I;
  p.delta_I = config.impurity.delta_I;
  p.variant = variant;
  return p;
}

MeanFieldParams MeanFieldParams::at_dark_point(const SystemConfig& config, double rabi,
                                               MeanFieldVariant variant) {
  SystemConfig bare = config;
  bare.impurity.gamma_T = 0.0;
  const cplx dark = symmetric_block(bare).dark_eigenvalue();
  MeanFieldParams p = from_config(bare, rabi, dark.real(), variant);
  p.gamma_T = -2.0 * dark.imag();
  return p;
}

MeanFieldParams MeanFieldParams::decoupled(double rabi, double delta, double gamma_T,
                                           MeanFieldVariant variant) {
  MeanFieldParams p;
  p.rabi = rabi;
  p.delta = delta;
  p.gamma_T = gamma_T;
  p.variant = variant;
  return p;
}

std::vector<double> MeanFieldState::pack() const {
  return {p_ee, s_ge.real(), s_ge.imag(), s_ring.real(), s_ring.imag()};
}

MeanFieldState MeanFieldState::unpack(const std::vector<double>& x) {
  MeanFieldState s;
  s.p_ee = x[0];
  s.s_ge = {x[1], x[2]};
  s.s_ring = {x[3], x[4]};
  return s;
}

MeanFieldState mf_derivatives(const MeanFieldState& st, const MeanFieldParams& p) {
  const double p_ee = st.p_ee;
  const cplx s = st.s_ge;
  const cplx S = st.s_ring;
  const double n = p.n;
  MeanFieldState d;

  if (p.variant == MeanFieldVariant::paper) {
    const double big_delta = -p.delta;
    const cplx c = kI * p.j + p.gamma / 2.0;
    const double total = p.gamma0 + p.gamma_T;
    d.p_ee = -2.0 * p.rabi * s.imag() + ((kI * p.j - p.gamma / 2.0) * s * std::conj(S)).real() -
             (c * S * std::conj(s)).real() - total * p_ee;
    d.s_ge = -(kI * big_delta + total / 2.0) * s + kI * p.rabi * (2.0 * p_ee - 1.0) +
             2.0 * S * p_ee * c - S * c;
    d.s_ring = -(big_delta + kI * p.j_sym + p.gamma_sym / 2.0) * S - n * s * c - kI * n * p.rabi;
    return d;
  }

  const double scale = std::sqrt(p.gamma_I / p.gamma0);
  const double omega_I = scale * p.rabi;
  const double total = p.gamma_I + p.gamma_T;
  const cplx c = scale * (kI * p.j + p.gamma / 2.0);
  d.p_ee = -total * p_ee - 2.0 * omega_I * s.imag() -
           2.0 * (scale * (p.gamma / 2.0 + kI * p.j) * std::conj(s) * S).real();
  d.s_ge = (kI * (p.delta + p.delta_I) - total / 2.0) * s + c * (2.0 * p_ee - 1.0) * S +
           kI * omega_I * (2.0 * p_ee - 1.0);
  d.s_ring = (kI * p.delta - kI * p.j_sym - p.gamma_sym / 2.0) * S - n * c * s - kI * n * p.rabi;
  return d;
}

Eigen::MatrixXd mf_jacobian(const MeanFieldState& state, const MeanFieldParams& params) {
  // The right-hand side is quadratic, so central differences are exact up to rounding.
  const std::vector<double> x0 = state.pack();
  Eigen::MatrixXd jac(5, 5);
  const double h = 1e-4;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> xp = x0;
    std::vector<double> xm = x0;
    xp[k] += h;
    xm[k] -= h;
    const auto fp = mf_derivatives(MeanFieldState::unpack(xp), params).pack();
    const auto fm = mf_derivatives(MeanFieldState::unpack(xm), params).pack();
    for (int r = 0; r < 5; ++r) jac(r, k) = (fp[r] - fm[r]) / (2.0 * h);
  }
  return jac;
}

MeanFieldResult mf_steady_state(const MeanFieldParams& params, const MeanFieldOptions& opt) {
  validate(params);
  MeanFieldResult out;
  using State = detail::AdaptiveIntegrator::State;
  auto rhs = [&](const State& x, State& dx, double) {
    dx = mf_derivatives(MeanFieldState::unpack(x), params).pack();
  };

  State x = MeanFieldState{}.pack();
  double t = 0.0;
  bool diverged = false;
  {
    detail::AdaptiveIntegrator integ(rhs, 1e-16, 1e-10, 1e-2);
    while (t < opt.t_max) {
      integ.advance(x, t, std::min(opt.t_max, t + opt.checkpoint_dt));
      out.min_p_ee = std::min(out.min_p_ee, x[0]);
      out.max_p_ee = std::max(out.max_p_ee, x[0]);
      const double scale = std::abs(x[0]) + std::hypot(x[1], x[2]) + std::hypot(x[3], x[4]);
      if (!std::isfinite(scale) || scale > 1e3 * (1.0 + params.n)) {
        diverged = true;
        break;
      }
      if (norm_of(mf_derivatives(MeanFieldState::unpack(x), params)) < opt.tolerance) {
        out.integration_converged = true;
        break;
      }
    }
  }
  out.integration_time = t;
  if (diverged) {
    out.warnings.push_back("trajectory from vacuum diverges; returning the unstable fixed point");
    x = MeanFieldState{}.pack();
  } else if (!out.integration_converged) {
    out.warnings.push_back("integration did not reach the tolerance by t_max; polished by Newton");
  }

  // Damped Newton polish.
  double fnorm = norm_of(mf_derivatives(MeanFieldState::unpack(x), params));
  for (int it = 0; it < 100 && fnorm > 1e-15; ++it) {
    const MeanFieldState cur = MeanFieldState::unpack(x);
    const std::vector<double> f = mf_derivatives(cur, params).pack();
    const Eigen::MatrixXd jac = mf_jacobian(cur, params);
    // Minimum-norm step: the ring block is singular when the ring is absent.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    const Eigen::VectorXd step = cod.solve(Eigen::Map<const Eigen::VectorXd>(f.data(), 5));
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      std::vector<double> trial = x;
      Eigen::Map<Eigen::VectorXd>(trial.data(), 5) -= lambda * step;
      const double tn = norm_of(mf_derivatives(MeanFieldState::unpack(trial), params));
      if (tn < fnorm) {
        x = trial;
        fnorm = tn;
        improved = true;
        break;
      }
    }
    out.newton_iterations = it + 1;
    if (!improved) break;
  }
  out.state = MeanFieldState::unpack(x);
  out.residual = fnorm;
  const double scale = std::max(1e-300, params.rabi * params.rabi);
  if (!(fnorm < std::max(1e-14, 1e-8 * scale))) {
    std::ostringstream os;
    os << "mean-field steady state did not converge: residual " << fnorm << " after "
       << out.newton_iterations << " Newton iterations";
    if (diverged) os << " (the trajectory from vacuum diverges)";
    throw SolverError(os.str());
  }
  Eigen::MatrixXd jac = mf_jacobian(out.state, params);
  // Without a ring S is not a degree of freedom; only (p, s) decide stability.
  if (params.n == 0) jac = Eigen::MatrixXd(jac.topLeftCorner(3, 3));
  Eigen::EigenSolver<Eigen::MatrixXd> es(jac, false);
  out.stable = es.eigenvalues().real().maxCoeff() < 0.0;
  if (!out.stable && !diverged) {
    out.warnings.push_back("fixed point is not linearly stable");
  }
  return out;
}

MeanFieldResult mf_sigma_abs(const MeanFieldParams& params, const MeanFieldOptions& options) {
  if (params.rabi == 0.0) {
    MeanFieldResult r;
    r.integration_converged = true;
    r.warnings.push_back("zero drive: no absorption");
    return r;
  }
  MeanFieldResult r = mf_steady_state(params, options);
  if (params.gamma_T == 0.0) {
    r.warnings.push_back("gamma_T = 0: nothing is extracted, absorption is zero");
    return r;
  }
  r.sigma_abs_over_sigma =
      params.gamma_T * params.gamma0 * r.state.p_ee / (4.0 * params.rabi * params.rabi);
  return r;
}

}  // namespace ringsim
