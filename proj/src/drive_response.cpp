#include "ringsim/drive_response.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

namespace ringsim {
namespace {

void check_weak(const DriveSpec& drive, std::vector<std::string>& warnings) {
  if (drive.amplitude > kWeakDriveLimit) {
    std::ostringstream os;
    os << "drive amplitude " << drive.amplitude << " exceeds the weak-drive limit "
       << kWeakDriveLimit << " Gamma0";
    warnings.push_back(os.str());
  }
}

void check_amplitude(const DriveSpec& drive) {
  if (!std::isfinite(drive.amplitude) || drive.amplitude <= 0.0) {
    throw InvalidArgument("drive amplitude must be finite and positive");
  }
}

double populations_ring(const Eigen::VectorXcd& b, int n_ring) {
  return n_ring > 0 ? b.head(n_ring).squaredNorm() : 0.0;
}

}  // namespace

DriveSpec DriveSpec::coherent(double rabi, double detuning, IlluminationMask mask) {
  DriveSpec d;
  d.kind = DriveKind::coherent;
  d.amplitude = rabi;
  d.detuning = detuning;
  d.mask = mask;
  return d;
}

DriveSpec DriveSpec::incoherent(double pump, IlluminationMask mask) {
  DriveSpec d;
  d.kind = DriveKind::incoherent;
  d.amplitude = pump;
  d.mask = mask;
  return d;
}

Eigen::VectorXcd illumination_profile(const SystemConfig& config, const DriveSpec& drive) {
  const int n = config.n_ring();
  const double knorm = drive.k_hat.norm();
  if (!(knorm > 0.0)) throw InvalidArgument("drive k_hat must be non-zero");
  const Vec3 k = drive.k_hat / knorm * config.units.k0;
  const double sign = drive.kind == DriveKind::coherent ? 1.0 : -1.0;

  Eigen::VectorXcd v(n + 1);
  for (int j = 0; j < n; ++j) {
    const bool lit = drive.mask != IlluminationMask::center_only;
    v(j) = lit ? std::polar(1.0, sign * k.dot(config.geometry.positions[j])) : cplx(0.0);
  }
  const bool center_lit = drive.mask != IlluminationMask::ring_only;
  v(n) = center_lit ? std::sqrt(config.impurity.gamma_I / config.units.gamma0) *
                          std::polar(1.0, sign * k.dot(config.geometry.impurity_position))
                    : cplx(0.0);
  return v;
}

Eigen::VectorXcd steady_state_coherent(const SystemConfig& config, const DriveSpec& drive) {
  if (drive.kind != DriveKind::coherent) {
    throw InvalidArgument("steady_state_coherent needs a coherent drive");
  }
  check_amplitude(drive);
  const Eigen::MatrixXcd m =
      effective_hamiltonian(coupling_matrices(config), config.impurity.gamma_T);
  const Eigen::Index dim = m.rows();
  const Eigen::MatrixXcd a = drive.detuning * Eigen::MatrixXcd::Identity(dim, dim) - m;
  const Eigen::VectorXcd omega = drive.amplitude * illumination_profile(config, drive);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
    std::ostringstream os;
    os << "steady state system is singular at detuning " << drive.detuning
       << " (a mode with zero width sits on resonance); perturb the detuning";
    throw SolverError(os.str());
  }
  return lu.solve(-omega);
}

AbsorptionResult sigma_abs_coherent(const SystemConfig& config, const DriveSpec& drive) {
  AbsorptionResult out;
  check_weak(drive, out.warnings);
  out.amplitudes = steady_state_coherent(config, drive);
  const int n = config.n_ring();
  out.impurity_population = std::norm(out.amplitudes(n));
  out.ring_population = populations_ring(out.amplitudes, n);

  const double gamma_T = config.impurity.gamma_T;
  if (gamma_T == 0.0) {
    out.warnings.push_back("gamma_T = 0: nothing is extracted, absorption is zero");
    return out;
  }
  const double omega = drive.amplitude;
  out.sigma_abs_over_sigma =
      gamma_T * config.units.gamma0 * out.impurity_population / (4.0 * omega * omega);
  out.sigma_abs_over_quarter_sigma = 4.0 * out.sigma_abs_over_sigma;
  return out;
}

SingleModeEstimate single_mode_sigma(const ModeSet& modes, const SystemConfig& config,
                                     const DriveSpec& drive, int mode_index) {
  if (mode_index < 0 || mode_index >= modes.size()) {
    throw InvalidArgument("single_mode_sigma: mode index out of range");
  }
  check_amplitude(drive);
  const double omega = drive.amplitude;
  const Eigen::VectorXcd omega_vec = omega * illumination_profile(config, drive);
  const Eigen::VectorXcd v = modes.vector(mode_index);
  const cplx overlap = v.transpose() * omega_vec;
  const double imp = std::abs(modes.impurity_amplitude(mode_index));
  const double width = modes.decay_rate(mode_index);

  SingleModeEstimate est;
  est.sigma_abs_over_sigma = config.impurity.gamma_T * config.units.gamma0 /
                             (omega * omega * width * width) * imp * imp * std::norm(overlap);
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < modes.size(); ++k) {
    if (k == mode_index) continue;
    gap = std::min(gap, std::abs(modes.frequency(k) - modes.frequency(mode_index)));
  }
  est.isolation_ratio = gap / width;
  est.reliable = est.isolation_ratio > 5.0;
  est.surpasses_single = 0.5 * width < imp * std::abs(overlap) / omega;
  return est;
}

AbsorptionResult sigma_abs_incoherent(const ModeSet& modes, const SystemConfig& config,
                                      const DriveSpec& drive) {
  if (drive.kind != DriveKind::incoherent) {
    throw InvalidArgument("sigma_abs_incoherent needs an incoherent drive");
  }
  check_amplitude(drive);
  AbsorptionResult out;
  check_weak(drive, out.warnings);
  const Eigen::VectorXcd profile = illumination_profile(config, drive);
  const int n = config.n_ring();
  const double gamma_T = config.impurity.gamma_T;

  double p_imp = 0.0;
  double p_ring = 0.0;
  for (int k = 0; k < modes.size(); ++k) {
    const Eigen::VectorXcd v = modes.vector(k);
    const double overlap2 = std::norm(cplx(v.transpose() * profile));
    const double gamma = modes.decay_rate(k);
    const double imp2 = std::norm(v(n));
    if (gamma <= 0.0) {
      if (overlap2 * (imp2 + v.head(n).squaredNorm()) < 1e-24) continue;
      throw SolverError("eigenmode with zero decay rate is pumped; the perturbative "
                        "incoherent response diverges");
    }
    p_imp += drive.amplitude / gamma * imp2 * overlap2;
    p_ring += drive.amplitude / gamma * (n > 0 ? v.head(n).squaredNorm() : 0.0) * overlap2;
  }
  out.impurity_population = p_imp;
  out.ring_population = p_ring;
  if (gamma_T == 0.0) {
    out.warnings.push_back("gamma_T = 0: nothing is extracted, absorption is zero");
    return out;
  }
  out.sigma_abs_over_sigma = gamma_T * p_imp / drive.amplitude;
  out.sigma_abs_over_quarter_sigma = 4.0 * out.sigma_abs_over_sigma;
  return out;
}

AbsorptionResult sigma_abs_incoherent_exact(const ModeSet& modes, const SystemConfig& config,
                                            const DriveSpec& drive) {
  if (drive.kind != DriveKind::incoherent) {
    throw InvalidArgument("sigma_abs_incoherent_exact needs an incoherent drive");
  }
  check_amplitude(drive);
  AbsorptionResult out;
  check_weak(drive, out.warnings);
  const Eigen::VectorXcd profile = illumination_profile(config, drive);
  const int n = config.n_ring();
  const Eigen::MatrixXcd& v = modes.right_vectors;
  // In the mode basis (V⁻¹ = Vᵀ) the Lyapunov equation is diagonal.
  const Eigen::VectorXcd x = v.transpose() * profile;
  const Eigen::Index dim = x.size();
  Eigen::MatrixXcd rho_modes(dim, dim);
  const cplx I(0.0, 1.0);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const cplx denom = modes.eigenvalues(a) - std::conj(modes.eigenvalues(b));
      const cplx num = x(a) * std::conj(x(b));
      rho_modes(a, b) = std::abs(num) < 1e-300 ? cplx(0.0) : -I * drive.amplitude * num / denom;
    }
  }
  const Eigen::MatrixXcd rho = v * rho_modes * v.adjoint();
  out.impurity_population = rho(n, n).real();
  for (int j = 0; j < n; ++j) out.ring_population += rho(j, j).real();
  const double gamma_T = config.impurity.gamma_T;
  if (gamma_T == 0.0) {
    out.warnings.push_back("gamma_T = 0: nothing is extracted, absorption is zero");
    return out;
  }
  out.sigma_abs_over_sigma = gamma_T * out.impurity_population / drive.amplitude;
  out.sigma_abs_over_quarter_sigma = 4.0 * out.sigma_abs_over_sigma;
  return out;
}

std::vector<SpectrumPoint> spectrum_scan(const SystemConfig& config, const DriveSpec& drive,
                                         double detuning_min, double detuning_max,
                                         int n_points) {
  if (n_points < 1) throw InvalidArgument("spectrum_scan needs at least one point");
  if (!(detuning_max >= detuning_min)) {
    throw InvalidArgument("spectrum_scan: detuning_max must not be below detuning_min");
  }
  std::vector<SpectrumPoint> out;
  out.reserve(n_points);
  const double step = n_points > 1 ? (detuning_max - detuning_min) / (n_points - 1) : 0.0;
  DriveSpec d = drive;
  for (int i = 0; i < n_points; ++i) {
    d.detuning = detuning_min + step * i;
    const AbsorptionResult r = sigma_abs_coherent(config, d);
    out.push_back({d.detuning, r.sigma_abs_over_sigma, r.sigma_abs_over_quarter_sigma,
                   r.impurity_population, r.ring_population});
  }
  return out;
}

DarkResonance tune_dark_resonance(const SystemConfig& base, bool tune_gamma_T) {
  DarkResonance out;
  out.config = base;
  const CouplingMatrices c = coupling_matrices(base);
  out.bare_mode = darkest_coupled_mode(diagonalize_effective(c, 0.0));
  if (tune_gamma_T) out.config.impurity.gamma_T = out.bare_mode.decay_rate;
  out.mode = out.config.impurity.gamma_T == 0.0
                 ? out.bare_mode
                 : darkest_coupled_mode(diagonalize_effective(c, out.config.impurity.gamma_T));
  out.detuning = out.mode.frequency;
  return out;
}

double single_emitter_sigma_coherent(double gamma_T, double gamma0) {
  return gamma0 * gamma_T / ((gamma0 + gamma_T) * (gamma0 + gamma_T));
}

double single_emitter_sigma_incoherent(double gamma_T, double gamma0) {
  return gamma_T / (gamma0 + gamma_T);
}

}  // namespace ringsim
