#pragma once

// Two-dipole reduction: an antenna two-level dipole of moment √N_a μ standing
// in for the ring, and a Λ-type center (g, e, t) whose e→t channel is the
// trap. Basis of the 6-dimensional space: index = 3·antenna + center with
// antenna ∈ {0, 1} and center ∈ {g, e, t} = {0, 1, 2}.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringsim/core_model.hpp"

namespace ringsim {

enum class PumpScenario { antenna, center, collective };
enum class AntennaDecayScaling { linear, quadratic };  // Γ_a = N_a Γ_c or N_a² Γ_c

const char* scenario_name(PumpScenario s);

struct ToyDrive {
  double rabi = 0.0;       // Ω seen by a single-μ dipole; the antenna sees √N_a Ω
  double detuning = 0.0;   // δ = ω_L − ω_c
  double bandwidth = 0.0;  // laser linewidth, modeled as dephasing at this rate
  PumpScenario mask = PumpScenario::collective;
};

struct ToyConfig {
  double n_eff = 1.0;       // N_a
  double distance = 0.1;    // R in units of λ0
  double omega_a = 0.0;
  double omega_c = 0.0;
  double omega_l = 0.0;
  double omega_R = 0.0;     // coherent antenna-center coupling Ω(R)
  double gamma_a = 1.0;
  double gamma_c = 1.0;
  double gamma_ac = 0.0;
  double gamma_l = 0.0;     // trap rate
  Eigen::Matrix2d nu = Eigen::Matrix2d::Zero();  // incoherent pump (antenna, center)
  ToyDrive drive;

  /// Couplings from the ring-center Green's function at distance R:
  /// Ω(R) = √(Γ_a/Γ_c)·J(R), Γ_ac = √(Γ_a/Γ_c)·Γ(R), which reduce to √N_a J and
  /// √N_a Γ for the default linear scaling.
  static ToyConfig from_distance(double n_eff, double distance_in_lambda, double gamma_l,
                                 AntennaDecayScaling scaling = AntennaDecayScaling::linear,
                                 const UnitConvention& units = {});

  void validate() const;
};

/// Incoherent pump matrix for a scenario: the antenna absorbs at N_a ν and
/// the center at ν; correlated pumping ν_ac defaults to zero.
Eigen::Matrix2d pump_matrix(PumpScenario scenario, double n_eff, double nu, double nu_ac = 0.0);

struct BrightDark {
  double c_plus = 0.0;   // dark state ∝ c_+|10⟩ + |01⟩ (antenna, center)
  double c_minus = 0.0;  // bright state ∝ c_−|10⟩ + |01⟩
  Eigen::Vector2d dark_vector;
  Eigen::Vector2d bright_vector;
  double dark_gamma = 0.0;
  double bright_gamma = 0.0;
  // Closed-form coefficients with the radicand (Γ_a − Γ_c)² + 4Γ_ac².
  double formula_c_plus = 0.0;
  double formula_c_minus = 0.0;
};

/// Eigen-decomposition of [[Γ_a, Γ_ac], [Γ_ac, Γ_c]]. At Γ_ac = 0 the
/// coefficients take their limits: 0 for the state on the center and ±∞ for
/// the state on the antenna.
BrightDark bright_dark_states(double gamma_a, double gamma_c, double gamma_ac);

/// Column-stacked Liouvillian (36×36) acting on vec(ρ), in the frame rotating
/// at the drive frequency.
struct ToyLiouvillian {
  Eigen::MatrixXcd superop;
  Eigen::MatrixXcd hamiltonian;  // 6×6
};

ToyLiouvillian toy_generator(const ToyConfig& config);

struct TimePoint {
  double time = 0.0;
  double target_population = 0.0;
};

/// P_t(t) from the vacuum at n_samples equally spaced times in (0, t_max].
std::vector<TimePoint> target_population_curve(const ToyConfig& config, double t_max,
                                               int n_samples);

/// Evolves vec(ρ) from vacuum to t and returns the 6×6 density matrix.
Eigen::MatrixXcd toy_evolve(const ToyConfig& config, double t);

struct ToySpectrum {
  double bandwidth = 0.0;
  std::vector<double> detunings;
  std::vector<double> target_population;  // P_t(t_fix)
  double area = 0.0;                       // trapezoidal ∫ P_t dδ
};

/// Coherent-drive spectra P_t(t_fix) versus δ, one per bandwidth, with their
/// integrated areas.
std::vector<ToySpectrum> coherent_spectrum_and_area(const ToyConfig& config, double delta_min,
                                                    double delta_max, int n_points, double t_fix,
                                                    const std::vector<double>& bandwidths);

struct TransferRateSpectrum {
  std::vector<double> detunings;
  std::vector<double> rate;  // Γ_l⟨σ_c^ee⟩ / Ω² in the weak-drive steady state
  double area = 0.0;
};

/// Γ_l⟨σ_c^ee⟩/Ω² at one detuning, from the weak-drive steady state of the
/// single-excitation block. Requires zero bandwidth.
double coherent_transfer_rate(const ToyConfig& config, double detuning);

/// Weak-drive linear response of the single-excitation block, so no
/// illumination time enters. Requires zero bandwidth.
TransferRateSpectrum coherent_transfer_rate_spectrum(const ToyConfig& config, double delta_min,
                                                     double delta_max, int n_points);

/// Indices of strict local maxima of a sampled curve.
std::vector<int> local_maxima(const std::vector<double>& values);

}  // namespace ringsim
