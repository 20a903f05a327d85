#include "ringsim/toymodel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include <unsupported/Eigen/MatrixFunctions>

namespace ringsim {
namespace {

constexpr int kDim = 6;
constexpr cplx kI(0.0, 1.0);

using Op = Eigen::Matrix<cplx, kDim, kDim>;

int idx(int antenna, int center) { return 3 * antenna + center; }

Op antenna_lowering() {
  Op m = Op::Zero();
  for (int c = 0; c < 3; ++c) m(idx(0, c), idx(1, c)) = 1.0;
  return m;
}

Op center_transition(int to, int from) {
  Op m = Op::Zero();
  for (int a = 0; a < 2; ++a) m(idx(a, to), idx(a, from)) = 1.0;
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_psd(const Eigen::Matrix2d& m, const char* name) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-12 * scale || !m.allFinite()) {
    std::ostringstream os;
    os << name << " matrix is not positive semidefinite";
    throw InvalidArgument(os.str());
  }
}

// √λ_k Σ_i u_ik ops[i] for each positive eigenvalue of a PSD 2×2 matrix.
std::vector<Op> channels(const Eigen::Matrix2d& m, const Op& first, const Op& second) {
  std::vector<Op> out;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int k = 0; k < 2; ++k) {
    const double rate = es.eigenvalues()(k);
    if (rate <= 1e-14 * scale) continue;
    const Eigen::Vector2d u = es.eigenvectors().col(k);
    out.push_back(std::sqrt(rate) * (u(0) * first + u(1) * second));
  }
  return out;
}

double target_population(const Eigen::Ref<const Eigen::MatrixXcd>& rho) {
  return rho(idx(0, 2), idx(0, 2)).real() + rho(idx(1, 2), idx(1, 2)).real();
}

// exp(L t); the generator is small enough for a dense Padé exponential.
Eigen::MatrixXcd propagator(const Eigen::MatrixXcd& l, double t) {
  const Eigen::MatrixXcd p = (l * t).exp();
  if (!p.allFinite()) throw SolverError("toy model propagator is not finite");
  return p;
}

}  // namespace

const char* scenario_name(PumpScenario s) {
  switch (s) {
    case PumpScenario::antenna: return "antenna";
    case PumpScenario::center: return "center";
    case PumpScenario::collective: return "collective";
  }
  return "collective";
}

ToyConfig ToyConfig::from_distance(double n_eff, double distance_in_lambda, double gamma_l,
                                   AntennaDecayScaling scaling, const UnitConvention& units) {
  if (!(n_eff >= 1.0) || !std::isfinite(n_eff)) {
    throw InvalidArgument("toy model n_eff must be finite and >= 1");
  }
  if (!(distance_in_lambda > 0.0) || !std::isfinite(distance_in_lambda)) {
    throw InvalidArgument("toy model distance must be finite and positive");
  }
  ToyConfig c;
  c.n_eff = n_eff;
  c.distance = distance_in_lambda;
  c.gamma_c = units.gamma0;
  c.gamma_a = (scaling == AntennaDecayScaling::linear ? n_eff : n_eff * n_eff) * units.gamma0;
  c.gamma_l = gamma_l;
  const cplx g = ring_center_coupling(distance_in_lambda * units.wavelength(), units);
  const double factor = std::sqrt(c.gamma_a / c.gamma_c);
  c.omega_R = factor * g.real();
  c.gamma_ac = factor * (-2.0 * g.imag());
  c.validate();
  return c;
}

void ToyConfig::validate() const {
  if (!(n_eff > 0.0)) throw InvalidArgument("toy model n_eff must be positive");
  if (!(gamma_a >= 0.0) || !(gamma_c >= 0.0) || !(gamma_l >= 0.0)) {
    throw InvalidArgument("toy model decay rates must be non-negative");
  }
  if (!(drive.bandwidth >= 0.0)) throw InvalidArgument("toy model bandwidth must be non-negative");
  Eigen::Matrix2d gamma;
  gamma << gamma_a, gamma_ac, gamma_ac, gamma_c;
  check_psd(gamma, "decay");
  check_psd(nu, "pump");
}

Eigen::Matrix2d pump_matrix(PumpScenario scenario, double n_eff, double nu, double nu_ac) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  if (scenario != PumpScenario::center) m(0, 0) = n_eff * nu;
  if (scenario != PumpScenario::antenna) m(1, 1) = nu;
  if (scenario == PumpScenario::collective) m(0, 1) = m(1, 0) = nu_ac;
  return m;
}

BrightDark bright_dark_states(double gamma_a, double gamma_c, double gamma_ac) {
  Eigen::Matrix2d g;
  g << gamma_a, gamma_ac, gamma_ac, gamma_c;
  check_psd(g, "decay");
  BrightDark bd;
  const double inf = std::numeric_limits<double>::infinity();
  const double diff = gamma_a - gamma_c;
  const double root = std::sqrt(diff * diff + 4.0 * gamma_ac * gamma_ac);
  const double mean = 0.5 * (gamma_a + gamma_c);
  bd.dark_gamma = mean - 0.5 * root;
  bd.bright_gamma = mean + 0.5 * root;

  if (gamma_ac != 0.0) {
    bd.formula_c_plus = (diff - root) / (2.0 * gamma_ac);
    bd.formula_c_minus = (diff + root) / (2.0 * gamma_ac);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
    bd.dark_gamma = es.eigenvalues()(0);
    bd.bright_gamma = es.eigenvalues()(1);
    bd.dark_vector = es.eigenvectors().col(0);
    bd.bright_vector = es.eigenvectors().col(1);
  } else if (diff >= 0.0) {
    bd.formula_c_plus = 0.0;
    bd.formula_c_minus = inf;
    bd.dark_vector = Eigen::Vector2d(0.0, 1.0);
    bd.bright_vector = Eigen::Vector2d(1.0, 0.0);
  } else {
    bd.formula_c_plus = -inf;
    bd.formula_c_minus = 0.0;
    bd.dark_vector = Eigen::Vector2d(1.0, 0.0);
    bd.bright_vector = Eigen::Vector2d(0.0, 1.0);
  }
  // Fix signs: positive center component (positive antenna component if the center is empty).
  for (Eigen::Vector2d* v : {&bd.dark_vector, &bd.bright_vector}) {
    const double ref = std::abs((*v)(1)) > 1e-15 ? (*v)(1) : (*v)(0);
    if (ref < 0.0) *v = -*v;
  }
  const auto coefficient = [inf](const Eigen::Vector2d& v) {
    if (std::abs(v(1)) > 1e-15) return v(0) / v(1);
    return v(0) >= 0.0 ? inf : -inf;
  };
  bd.c_plus = gamma_ac == 0.0 ? bd.formula_c_plus : coefficient(bd.dark_vector);
  bd.c_minus = gamma_ac == 0.0 ? bd.formula_c_minus : coefficient(bd.bright_vector);
  return bd;
}

ToyLiouvillian toy_generator(const ToyConfig& config) {
  config.validate();
  const Op sa = antenna_lowering();
  const Op sc = center_transition(0, 1);
  const Op sl = center_transition(2, 1);
  const Op na = sa.adjoint() * sa;
  const Op nc = sc.adjoint() * sc;
  const Op pl = center_transition(2, 2);
  const ToyDrive& d = config.drive;

  Op h = (config.omega_a - d.detuning) * na + (config.omega_c - d.detuning) * nc +
         config.omega_l * pl + config.omega_R * (sa.adjoint() * sc + sc.adjoint() * sa);
  if (d.rabi != 0.0) {
    if (d.mask != PumpScenario::center) {
      h += std::sqrt(config.n_eff) * d.rabi * (sa + sa.adjoint());
    }
    if (d.mask != PumpScenario::antenna) h += d.rabi * (sc + sc.adjoint());
  }

  Eigen::Matrix2d gamma;
  gamma << config.gamma_a, config.gamma_ac, config.gamma_ac, config.gamma_c;
  std::vector<Op> jumps = channels(gamma, sa, sc);
  for (const Op& c : channels(config.nu, sa.adjoint(), sc.adjoint())) jumps.push_back(c);
  if (config.gamma_l > 0.0) jumps.push_back(std::sqrt(config.gamma_l) * sl);
  if (d.bandwidth > 0.0) jumps.push_back(std::sqrt(2.0 * d.bandwidth) * (na + nc));

  Op k = h;
  for (const Op& c : jumps) k -= 0.5 * kI * (c.adjoint() * c);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(kDim, kDim);
  ToyLiouvillian out;
  out.hamiltonian = h;
  out.superop = -kI * kron(id, k) + kI * kron(k.conjugate(), id);
  for (const Op& c : jumps) out.superop += kron(c.conjugate(), c);
  return out;
}

Eigen::MatrixXcd toy_evolve(const ToyConfig& config, double t_end) {
  if (!(t_end >= 0.0)) throw InvalidArgument("toy evolution time must be non-negative");
  const Eigen::MatrixXcd prop = propagator(toy_generator(config).superop, t_end);
  return Eigen::Map<const Eigen::MatrixXcd>(prop.col(0).data(), kDim, kDim);
}

std::vector<TimePoint> target_population_curve(const ToyConfig& config, double t_max,
                                               int n_samples) {
  if (!(t_max > 0.0) || n_samples < 1) {
    throw InvalidArgument("target_population_curve needs t_max > 0 and n_samples >= 1");
  }
  const Eigen::MatrixXcd step = propagator(toy_generator(config).superop, t_max / n_samples);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(kDim * kDim);
  x(0) = 1.0;  // |0, g⟩⟨0, g|
  std::vector<TimePoint> out;
  out.reserve(n_samples);
  for (int i = 1; i <= n_samples; ++i) {
    x = step * x;
    const Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), kDim, kDim);
    out.push_back({t_max * i / n_samples, target_population(rho)});
  }
  return out;
}

std::vector<ToySpectrum> coherent_spectrum_and_area(const ToyConfig& config, double delta_min,
                                                    double delta_max, int n_points, double t_fix,
                                                    const std::vector<double>& bandwidths) {
  if (n_points < 2 || !(delta_max > delta_min)) {
    throw InvalidArgument("coherent spectrum needs at least two points and delta_max > delta_min");
  }
  if (!(t_fix > 0.0)) throw InvalidArgument("coherent spectrum needs t_fix > 0");
  if (config.drive.rabi == 0.0) throw InvalidArgument("coherent spectrum needs a non-zero drive");
  std::vector<ToySpectrum> out;
  for (double b : bandwidths) {
    ToySpectrum s;
    s.bandwidth = b;
    ToyConfig c = config;
    c.drive.bandwidth = b;
    const double step = (delta_max - delta_min) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
      c.drive.detuning = delta_min + step * i;
      const Eigen::MatrixXcd rho = toy_evolve(c, t_fix);
      s.detunings.push_back(c.drive.detuning);
      s.target_population.push_back(target_population(rho));
    }
    for (int i = 1; i < n_points; ++i) {
      s.area += 0.5 * step * (s.target_population[i] + s.target_population[i - 1]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

double coherent_transfer_rate(const ToyConfig& config, double detuning) {
  config.validate();
  if (config.drive.bandwidth != 0.0) {
    throw InvalidArgument("the linear-response transfer rate needs zero bandwidth");
  }
  const ToyDrive& d = config.drive;
  Eigen::Vector2cd omega;
  omega(0) = d.mask != PumpScenario::center ? std::sqrt(config.n_eff) : 0.0;
  omega(1) = d.mask != PumpScenario::antenna ? 1.0 : 0.0;
  Eigen::Matrix2cd m;
  m << config.omega_a - 0.5 * kI * config.gamma_a, config.omega_R - 0.5 * kI * config.gamma_ac,
      config.omega_R - 0.5 * kI * config.gamma_ac,
      config.omega_c - 0.5 * kI * (config.gamma_c + config.gamma_l);
  const Eigen::Vector2cd b =
      (detuning * Eigen::Matrix2cd::Identity() - m).partialPivLu().solve(-omega);
  const double rate = config.gamma_l * std::norm(b(1));
  if (!std::isfinite(rate)) throw SolverError("toy transfer rate is not finite (singular response)");
  return rate;
}

TransferRateSpectrum coherent_transfer_rate_spectrum(const ToyConfig& config, double delta_min,
                                                     double delta_max, int n_points) {
  if (n_points < 2 || !(delta_max > delta_min)) {
    throw InvalidArgument("transfer spectrum needs at least two points and delta_max > delta_min");
  }
  TransferRateSpectrum out;
  const double step = (delta_max - delta_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double delta = delta_min + step * i;
    out.detunings.push_back(delta);
    out.rate.push_back(coherent_transfer_rate(config, delta));
  }
  for (int i = 1; i < n_points; ++i) out.area += 0.5 * step * (out.rate[i] + out.rate[i - 1]);
  return out;
}

std::vector<int> local_maxima(const std::vector<double>& values) {
  std::vector<int> out;
  const int n = static_cast<int>(values.size());
  for (int i = 1; i + 1 < n; ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

}  // namespace ringsim
