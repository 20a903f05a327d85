#pragma once

// Semiclassical (factorized) model of the driven ring plus impurity: the
// impurity population p = ⟨σ_I^ee⟩, its coherence s = ⟨σ_I^ge⟩ and the
// collective ring coherence S = ⟨S⁻⟩ = Σ_j ⟨σ_j^-⟩.

#include <string>
#include <vector>

#include "ringsim/spectral.hpp"

namespace ringsim {

enum class MeanFieldVariant {
  // Factorized Heisenberg equations of the model used everywhere else
  // (includes δ_I and the √(Γ_I/Γ0) impurity dipole scaling).
  rederived,
  // Reduced three-equation form: Δ = −δ, real Δ in the S equation,
  // impurity with Γ0, coherence decay (Γ0 + Γ_T)/2.
  paper,
};

const char* variant_name(MeanFieldVariant v);

struct MeanFieldParams {
  double delta = 0.0;      // drive detuning δ = ω_L − ω0 (Δ = −δ)
  double rabi = 5e-4;      // Ω_r
  double j_sym = 0.0;      // J_R
  double gamma_sym = 0.0;  // Γ_R (includes the self term Γ0)
  double j = 0.0;          // ring-impurity couplings per ring emitter
  double gamma = 0.0;
  int n = 0;
  double gamma_T = 0.0;
  double gamma0 = 1.0;
  double gamma_I = 1.0;
  double delta_I = 0.0;
  MeanFieldVariant variant = MeanFieldVariant::rederived;

  static MeanFieldParams from_config(const SystemConfig& config, double rabi, double delta,
                                     MeanFieldVariant variant = MeanFieldVariant::rederived);
  /// Γ_T = −2 Im λ_dark and δ = Re λ_dark from the symmetric block at Γ_T = 0.
  static MeanFieldParams at_dark_point(const SystemConfig& config, double rabi,
                                       MeanFieldVariant variant = MeanFieldVariant::rederived);
  /// Couplings J = Γ = 0 and no ring.
  static MeanFieldParams decoupled(double rabi, double delta, double gamma_T,
                                   MeanFieldVariant variant = MeanFieldVariant::rederived);
};

struct MeanFieldState {
  double p_ee = 0.0;
  cplx s_ge;
  cplx s_ring;

  std::vector<double> pack() const;
  static MeanFieldState unpack(const std::vector<double>& x);
};

MeanFieldState mf_derivatives(const MeanFieldState& state, const MeanFieldParams& params);

struct MeanFieldResult {
  MeanFieldState state;
  double sigma_abs_over_sigma = 0.0;
  bool integration_converged = false;  // trajectory from vacuum reached the tolerance
  bool stable = true;                  // all Jacobian eigenvalues have negative real part
  double integration_time = 0.0;
  int newton_iterations = 0;
  double residual = 0.0;               // ‖derivatives‖ at the returned state
  double min_p_ee = 0.0;               // extremes of p_ee along the trajectory
  double max_p_ee = 0.0;
  std::vector<std::string> warnings;
};

struct MeanFieldOptions {
  double tolerance = 1e-10;  // ‖derivatives‖ in Γ0
  double t_max = 2e5;
  double checkpoint_dt = 1.0;
};

/// Integrates from vacuum, then polishes with damped Newton. A diverging
/// trajectory (unstable fixed point) falls back to Newton from vacuum and is
/// reported with stable = false. Throws SolverError when Newton fails.
MeanFieldResult mf_steady_state(const MeanFieldParams& params, const MeanFieldOptions& options = {});

/// σ_abs/σ = Γ_T Γ0 p_ee / 4Ω_r² from the steady state; Γ_T = 0 gives zero with a warning.
MeanFieldResult mf_sigma_abs(const MeanFieldParams& params, const MeanFieldOptions& options = {});

/// Jacobian of mf_derivatives in the packed coordinates (p, Re s, Im s, Re S, Im S).
Eigen::MatrixXd mf_jacobian(const MeanFieldState& state, const MeanFieldParams& params);

}  // namespace ringsim
