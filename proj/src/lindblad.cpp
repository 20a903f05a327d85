#include "ringsim/lindblad.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "integrator.hpp"

namespace ringsim {
namespace {

using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplets = std::vector<Eigen::Triplet<cplx>>;

int excitation_count(ImpurityLevel level, std::uint32_t bits) {
  return std::popcount(bits) + (level == ImpurityLevel::e ? 1 : 0);
}

// Lowering operator of emitter `site` (impurity when site == n) restricted to
// the layout.
SpMat lowering(const HilbertLayout& layout, int site) {
  const int n = layout.n_ring();
  const int dim = layout.dimension();
  Triplets t;
  for (int k = 0; k < dim; ++k) {
    const ImpurityLevel lev = layout.level(k);
    const std::uint32_t bits = layout.ring_bits(k);
    std::uint32_t target = 0;
    if (site == n) {
      if (lev != ImpurityLevel::e) continue;
      target = HilbertLayout::make_code(n, ImpurityLevel::g, bits);
    } else {
      if (!(bits & (1u << site))) continue;
      target = HilbertLayout::make_code(n, lev, bits & ~(1u << site));
    }
    const int r = layout.index_of(target);
    if (r >= 0) t.emplace_back(r, k, 1.0);
  }
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat level_transition(const HilbertLayout& layout, ImpurityLevel to, ImpurityLevel from) {
  const int n = layout.n_ring();
  const int dim = layout.dimension();
  Triplets t;
  for (int k = 0; k < dim; ++k) {
    if (layout.level(k) != from) continue;
    const int r = layout.index_of(HilbertLayout::make_code(n, to, layout.ring_bits(k)));
    if (r >= 0) t.emplace_back(r, k, 1.0);
  }
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

struct Generator {
  int dim = 0;
  SpMat k_eff;                 // H − (i/2) Σ C†C
  std::vector<SpMat> jumps;

  // ρ̇ = −i(Kρ − ρK†) + Σ C ρ C†
  void apply(const Eigen::Ref<const Eigen::MatrixXcd>& rho, Eigen::Ref<Eigen::MatrixXcd> out) const {
    const Eigen::MatrixXcd a = k_eff * rho;
    out = cplx(0.0, -1.0) * a + cplx(0.0, 1.0) * a.adjoint();
    for (std::size_t c = 0; c < jumps.size(); ++c) {
      const Eigen::MatrixXcd crho = jumps[c] * rho;
      out += (jumps[c] * crho.adjoint()).adjoint();
    }
  }
};

Generator build_generator(const HilbertLayout& layout, const LiouvilleSpec& spec) {
  const SystemConfig& cfg = spec.config;
  const int n = cfg.n_ring();
  const int dim = layout.dimension();
  const CouplingMatrices cm = coupling_matrices(cfg);
  const DriveSpec& drive = spec.drive;
  const bool coherent = drive.kind == DriveKind::coherent;

  std::vector<SpMat> low;
  low.reserve(n + 1);
  for (int s = 0; s <= n; ++s) low.push_back(lowering(layout, s));

  SpMat h(dim, dim);
  {
    Triplets diag;
    const double delta = coherent ? drive.detuning : 0.0;
    for (int k = 0; k < dim; ++k) {
      const ImpurityLevel lev = layout.level(k);
      const std::uint32_t bits = layout.ring_bits(k);
      double e = -delta * std::popcount(bits);
      if (lev == ImpurityLevel::e) e += -delta - cfg.impurity.delta_I;
      if (e != 0.0) diag.emplace_back(k, k, e);
    }
    h.setFromTriplets(diag.begin(), diag.end());
  }
  Eigen::MatrixXd gamma = cm.gamma_part;
  SpMat decay_sum(dim, dim);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const SpMat hop = SpMat(low[i].adjoint()) * low[j];
      if (i != j && cm.j_part(i, j) != 0.0) h += cm.j_part(i, j) * hop;
      if (gamma(i, j) != 0.0) decay_sum += gamma(i, j) * hop;
    }
  }

  Generator g;
  g.dim = dim;
  if (coherent) {
    const Eigen::VectorXcd omega = drive.amplitude * illumination_profile(cfg, drive);
    for (int s = 0; s <= n; ++s) {
      if (omega(s) == cplx(0.0)) continue;
      h += omega(s) * SpMat(low[s].adjoint()) + std::conj(omega(s)) * low[s];
    }
  }

  // Collective emission channels from the eigen-decomposition of Γ.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
  const double gmax = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int k = 0; k <= n; ++k) {
    const double rate = es.eigenvalues()(k);
    if (rate < -1e-10 * gmax) {
      throw SolverError("collective decay matrix is not positive semidefinite");
    }
    if (rate <= 1e-14 * gmax) continue;
    SpMat c(dim, dim);
    for (int s = 0; s <= n; ++s) {
      const double u = es.eigenvectors()(s, k);
      if (u != 0.0) c += cplx(std::sqrt(rate) * u) * low[s];
    }
    g.jumps.push_back(c);
  }

  SpMat dissipative = decay_sum;
  const double gamma_T = cfg.impurity.gamma_T;
  if (gamma_T > 0.0) {
    const SpMat c = std::sqrt(gamma_T) * level_transition(layout, ImpurityLevel::t, ImpurityLevel::e);
    g.jumps.push_back(c);
    dissipative += SpMat(SpMat(c.adjoint()) * c);
  }
  if (spec.repump_rate > 0.0) {
    const SpMat c =
        std::sqrt(spec.repump_rate) * level_transition(layout, ImpurityLevel::g, ImpurityLevel::t);
    g.jumps.push_back(c);
    dissipative += SpMat(SpMat(c.adjoint()) * c);
  }
  if (!coherent) {
    const Eigen::VectorXcd profile = illumination_profile(cfg, drive);
    SpMat c(dim, dim);
    for (int s = 0; s <= n; ++s) {
      if (profile(s) != cplx(0.0)) c += profile(s) * SpMat(low[s].adjoint());
    }
    c *= std::sqrt(drive.amplitude);
    g.jumps.push_back(c);
    dissipative += SpMat(SpMat(c.adjoint()) * c);
  }

  g.k_eff = h - cplx(0.0, 0.5) * dissipative;
  g.k_eff.makeCompressed();
  for (auto& c : g.jumps) c.makeCompressed();
  return g;
}

struct Observables {
  double p_e = 0.0;
  double p_t = 0.0;
  double p_ground = 0.0;  // |g, 0⟩
  std::vector<double> ring;
};

Observables observe(const HilbertLayout& layout, const Eigen::MatrixXcd& rho) {
  Observables o;
  const int n = layout.n_ring();
  o.ring.assign(n, 0.0);
  for (int k = 0; k < layout.dimension(); ++k) {
    const double p = rho(k, k).real();
    const ImpurityLevel lev = layout.level(k);
    const std::uint32_t bits = layout.ring_bits(k);
    if (lev == ImpurityLevel::e) o.p_e += p;
    if (lev == ImpurityLevel::t) o.p_t += p;
    if (lev == ImpurityLevel::g && bits == 0) o.p_ground = p;
    for (int j = 0; j < n; ++j) {
      if (bits & (1u << j)) o.ring[j] += p;
    }
  }
  return o;
}

OracleResult run(const HilbertLayout& layout, const LiouvilleSpec& spec,
                 const OracleOptions& opt) {
  if (!std::isfinite(spec.drive.amplitude) || spec.drive.amplitude <= 0.0) {
    throw InvalidArgument("oracle drive amplitude must be finite and positive");
  }
  if (spec.repump_rate < 0.0) throw InvalidArgument("repump rate must be non-negative");
  if (!(opt.tolerance > 0.0) || !(opt.t_max > 0.0) || !(opt.checkpoint_dt > 0.0) ||
      opt.plateau_checkpoints < 1) {
    throw InvalidArgument("invalid oracle options");
  }
  const Generator gen = build_generator(layout, spec);
  const int dim = gen.dim;
  using State = detail::AdaptiveIntegrator::State;
  const auto as_matrix = [dim](const State& s) {
    return Eigen::Map<const Eigen::MatrixXcd>(reinterpret_cast<const cplx*>(s.data()), dim, dim);
  };
  auto rhs = [&](const State& x, State& dx, double) {
    dx.resize(x.size());
    Eigen::Map<Eigen::MatrixXcd> out(reinterpret_cast<cplx*>(dx.data()), dim, dim);
    gen.apply(as_matrix(x), out);
  };

  State x(2 * static_cast<std::size_t>(dim) * dim, 0.0);
  const int ground = layout.index_of(HilbertLayout::make_code(layout.n_ring(), ImpurityLevel::g, 0));
  x[2 * (static_cast<std::size_t>(ground) * dim + ground)] = 1.0;

  const double amp = spec.drive.amplitude / spec.config.units.gamma0;
  const double excitation_scale = spec.drive.kind == DriveKind::coherent ? amp * amp : amp;
  detail::AdaptiveIntegrator integ(rhs, opt.abs_tol * std::min(1.0, excitation_scale), opt.rel_tol,
                                   1e-3);
  double t = 0.0;
  int streak = 0;
  int checkpoint = 0;
  double rate = 0.0;
  double min_eig = 0.0;
  State dx(x.size());

  const auto check_trace_psd = [&](bool psd) {
    const Eigen::MatrixXcd rho = as_matrix(x);
    const double trace_err = std::abs(rho.trace() - cplx(1.0));
    if (trace_err > 1e-8) {
      std::ostringstream os;
      os << "trace drifted by " << trace_err << " at t = " << t;
      throw SolverError(os.str());
    }
    if (psd) {
      const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      if (min_eig < -1e-8) {
        std::ostringstream os;
        os << "density matrix lost positivity (min eigenvalue " << min_eig << ") at t = " << t;
        throw SolverError(os.str());
      }
    }
    return trace_err;
  };

  while (true) {
    const double t_next = std::min(opt.t_max, t + opt.checkpoint_dt);
    integ.advance(x, t, t_next);
    ++checkpoint;
    check_trace_psd(checkpoint % opt.psd_check_every == 0);

    rhs(x, dx, t);
    const Eigen::MatrixXcd rho = as_matrix(x);
    const Eigen::MatrixXcd drho = as_matrix(dx);
    const Observables o = observe(layout, rho);
    const Observables d = observe(layout, drho);
    const double keep = 1.0 - o.p_t;
    const double q = o.p_e / keep;
    const double dq = (d.p_e * keep + o.p_e * d.p_t) / (keep * keep);
    rate = q > 0.0 ? std::abs(dq / q) : std::numeric_limits<double>::infinity();
    streak = rate < opt.tolerance ? streak + 1 : 0;

    if (streak >= opt.plateau_checkpoints) {
      OracleResult r;
      r.dimension = dim;
      r.final_time = t;
      r.steps = integ.steps();
      r.plateau_rate = rate;
      r.trace_error = check_trace_psd(true);
      r.min_eigenvalue = min_eig;
      r.impurity_population = q;
      r.trap_population = o.p_t;
      r.ring_populations.resize(o.ring.size());
      for (std::size_t j = 0; j < o.ring.size(); ++j) r.ring_populations[j] = o.ring[j] / keep;
      r.excitation_probability = 1.0 - o.p_ground / keep;
      const double gamma_T = spec.config.impurity.gamma_T;
      r.trap_flux = gamma_T * q;
      r.sigma_abs_over_sigma = spec.drive.kind == DriveKind::coherent
                                   ? gamma_T * spec.config.units.gamma0 * q /
                                         (4.0 * spec.drive.amplitude * spec.drive.amplitude)
                                   : gamma_T * q / spec.drive.amplitude;
      return r;
    }
    if (t >= opt.t_max) {
      std::ostringstream os;
      os << "no plateau reached by t_max = " << opt.t_max << ": |d ln p_ee/dt| = " << rate
         << ", p_ee = " << q << ", P_t = " << o.p_t << ", steps = " << integ.steps()
         << ", basis dimension = " << dim;
      throw SolverError("lindblad oracle did not reach a plateau", os.str());
    }
  }
}

}  // namespace

HilbertLayout::HilbertLayout(int n_ring, int max_excitations)
    : n_ring_(n_ring), max_exc_(max_excitations) {
  if (n_ring < 0 || n_ring > 12) {
    throw InvalidArgument("HilbertLayout supports 0 to 12 ring emitters");
  }
  const std::uint32_t per_level = 1u << n_ring;
  lookup_.assign(3 * per_level, -1);
  for (int lev = 0; lev < 3; ++lev) {
    for (std::uint32_t bits = 0; bits < per_level; ++bits) {
      const auto level = static_cast<ImpurityLevel>(lev);
      if (max_exc_ >= 0 && excitation_count(level, bits) > max_exc_) continue;
      const std::uint32_t c = make_code(n_ring, level, bits);
      lookup_[c] = static_cast<int>(codes_.size());
      codes_.push_back(c);
    }
  }
}

int HilbertLayout::index_of(std::uint32_t code) const {
  return code < lookup_.size() ? lookup_[code] : -1;
}

OracleResult evolve_to_steady(const LiouvilleSpec& spec, const OracleOptions& options) {
  if (spec.config.n_ring() > 5) {
    throw InvalidArgument("full-basis oracle supports N <= 5; use truncated_basis_evolve");
  }
  return run(HilbertLayout(spec.config.n_ring()), spec, options);
}

OracleResult truncated_basis_evolve(const LiouvilleSpec& spec, int max_excitations,
                                    const OracleOptions& options) {
  if (max_excitations != 1 && max_excitations != 2) {
    throw InvalidArgument("max_excitations must be 1 or 2");
  }
  if (spec.config.n_ring() > 9) {
    throw InvalidArgument("truncated oracle supports N <= 9");
  }
  return run(HilbertLayout(spec.config.n_ring(), max_excitations), spec, options);
}

TruncationCheck truncation_convergence(const LiouvilleSpec& spec, const OracleOptions& options) {
  TruncationCheck c;
  c.order1 = truncated_basis_evolve(spec, 1, options);
  c.order2 = truncated_basis_evolve(spec, 2, options);
  const double ref = std::max(std::abs(c.order2.impurity_population), 1e-300);
  c.relative_difference =
      std::abs(c.order1.impurity_population - c.order2.impurity_population) / ref;
  c.converged = c.relative_difference <= 0.1;
  return c;
}

OracleResult oracle_steady_state(const LiouvilleSpec& spec, const OracleOptions& options) {
  return spec.config.n_ring() <= 5 ? evolve_to_steady(spec, options)
                                   : truncated_basis_evolve(spec, 2, options);
}

}  // namespace ringsim
