#pragma once

// Weak-drive steady states and absorption cross sections.
//
// Cross sections are reported in units of σ = 6π/k0². The absorbed-photon rate
// is the trap flux Γ_T⟨σ_I^ee⟩; for a coherent drive of Rabi frequency Ω the
// incident rate is (4Ω²/Γ0)(A/σ), for an incoherent pump ε it is ε(A/σ).

#include <string>
#include <vector>

#include "ringsim/spectral.hpp"

namespace ringsim {

enum class DriveKind { coherent, incoherent };
enum class IlluminationMask { all, ring_only, center_only };

struct DriveSpec {
  DriveKind kind = DriveKind::coherent;
  double amplitude = 1e-3;  // Rabi frequency Ω (coherent) or pump rate ε (incoherent)
  double detuning = 0.0;    // δ = ω_L − ω0, coherent only
  Vec3 k_hat = Vec3::UnitZ();
  IlluminationMask mask = IlluminationMask::all;

  static DriveSpec coherent(double rabi, double detuning,
                            IlluminationMask mask = IlluminationMask::all);
  static DriveSpec incoherent(double pump, IlluminationMask mask = IlluminationMask::all);
};

/// Drives above this amplitude (in Γ0) produce a weak-drive warning.
inline constexpr double kWeakDriveLimit = 0.05;

struct AbsorptionResult {
  double sigma_abs_over_sigma = 0.0;
  double sigma_abs_over_quarter_sigma = 0.0;
  double impurity_population = 0.0;
  double ring_population = 0.0;
  Eigen::VectorXcd amplitudes;  // coherent path only
  std::vector<std::string> warnings;
};

/// Unit-amplitude illumination profile over the N+1 emitters: mask × phase ×
/// relative dipole strength (√(Γ_I/Γ0) on the impurity). Coherent drives use
/// e^{+ik·r}; the incoherent |R_k⟩ = R_k†|g⟩ uses e^{−ik·r}.
Eigen::VectorXcd illumination_profile(const SystemConfig& config, const DriveSpec& drive);

/// Solves (δ·Id − M) b = −Ω_vec, M the effective Hamiltonian including
/// −iΓ_T/2 on the impurity.
Eigen::VectorXcd steady_state_coherent(const SystemConfig& config, const DriveSpec& drive);

/// σ_abs/σ = Γ_T Γ0 |b_I|² / 4Ω².
AbsorptionResult sigma_abs_coherent(const SystemConfig& config, const DriveSpec& drive);

struct SingleModeEstimate {
  double sigma_abs_over_sigma = 0.0;
  bool reliable = true;            // mode isolated by more than 5 Γ_ν0
  double isolation_ratio = 0.0;    // min |ω_m − ω_ν0| / Γ_ν0
  bool surpasses_single = false;   // Γ_ν0/2 < |⟨I|ν0⟩||⟨ν0ᵀ|Ω⟩|/Ω
};

/// One-mode approximation (Γ_T Γ0 / Ω²Γ_ν0²)|⟨I|ν0⟩|²|⟨ν0ᵀ|Ω⟩|². `modes` must
/// be diagonalized with the same Γ_T as `config`.
SingleModeEstimate single_mode_sigma(const ModeSet& modes, const SystemConfig& config,
                                     const DriveSpec& drive, int mode_index);

/// Σ_ν (Γ_T/Γ_ν)|⟨I|ν⟩|²|⟨νᵀ|R_k⟩|², the incoherent cross section keeping
/// only the mode-diagonal terms.
AbsorptionResult sigma_abs_incoherent(const ModeSet& modes, const SystemConfig& config,
                                      const DriveSpec& drive);

/// First-order incoherent steady state including inter-mode coherences
/// (solves Mρ − ρM† = −iε|R_k⟩⟨R_k|). Reference for the mode-diagonal form.
AbsorptionResult sigma_abs_incoherent_exact(const ModeSet& modes, const SystemConfig& config,
                                            const DriveSpec& drive);

struct SpectrumPoint {
  double detuning = 0.0;
  double sigma_abs_over_sigma = 0.0;
  double sigma_abs_over_quarter_sigma = 0.0;
  double impurity_population = 0.0;
  double ring_population = 0.0;
};

std::vector<SpectrumPoint> spectrum_scan(const SystemConfig& config, const DriveSpec& drive,
                                         double detuning_min, double detuning_max,
                                         int n_points);

/// Operating point on the darkest impurity-coupled mode: optionally sets Γ_T
/// to that mode's width at Γ_T = 0, then puts the drive on resonance with the
/// darkest coupled mode of the system including Γ_T.
struct DarkResonance {
  SystemConfig config;
  double detuning = 0.0;
  DarkModeReport bare_mode;   // at Γ_T = 0
  DarkModeReport mode;        // at the chosen Γ_T
};

DarkResonance tune_dark_resonance(const SystemConfig& base, bool tune_gamma_T);

/// Single emitter with Γ0 and trap Γ_T on resonance: Γ0Γ_T/(Γ0+Γ_T)².
double single_emitter_sigma_coherent(double gamma_T, double gamma0 = 1.0);
/// Single emitter under the same incoherent light: Γ_T/(Γ0+Γ_T).
double single_emitter_sigma_incoherent(double gamma_T, double gamma0 = 1.0);

}  // namespace ringsim
