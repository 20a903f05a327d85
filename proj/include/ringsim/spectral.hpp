#pragma once

// Eigenmodes of the non-Hermitian effective Hamiltonian, the symmetric-sector
// reduction, and dark-mode identification.

#include <vector>

#include "ringsim/core_model.hpp"

namespace ringsim {

/// Eigen-decomposition of the complex symmetric effective Hamiltonian.
/// Eigenvalues are ν = ω_ν − iΓ_ν/2. Right vectors are stored as columns and
/// normalized transpose-biorthogonally (vᵀv = 1); the left vector of each mode
/// is its transpose. Modes are sorted by ascending Γ_ν.
struct ModeSet {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_vectors;
  Eigen::MatrixXcd matrix;  // the diagonalized effective Hamiltonian
  int impurity_index = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  double frequency(int k) const { return eigenvalues(k).real(); }
  double decay_rate(int k) const { return -2.0 * eigenvalues(k).imag(); }
  Eigen::VectorXcd vector(int k) const { return right_vectors.col(k); }
  /// ⟨I|ν⟩ under the transpose normalization.
  cplx impurity_amplitude(int k) const { return right_vectors(impurity_index, k); }
  /// |⟨I|ν⟩|² with the vector rescaled to unit conjugate norm.
  double impurity_weight(int k) const;
  /// ‖M v − ν v‖ / ‖v‖.
  double residual(int k) const;
};

/// Effective Hamiltonian g − (δ_I + iΓ_T/2)|I⟩⟨I| of the single-excitation
/// sector; g carries J − iΓ/2 off the diagonal and −iΓ/2 on it.
Eigen::MatrixXcd effective_hamiltonian(const CouplingMatrices& couplings, double gamma_T);

/// Throws SolverError (with a matrix dump) if the eigensolver fails or a mode
/// cannot be transpose-normalized.
ModeSet diagonalize_effective(const CouplingMatrices& couplings, double gamma_T);

/// Collective ring modes J_m − iΓ_m/2 from the discrete Fourier transform of
/// the circulant ring block, phases e^{i2πmj/N}. Entry m = 0 is (J_R, Γ_R).
struct RingModes {
  std::vector<double> j_m;
  std::vector<double> gamma_m;

  int size() const { return static_cast<int>(j_m.size()); }
  cplx eigenvalue(int m) const { return {j_m[m], -0.5 * gamma_m[m]}; }
};

RingModes ring_mode_spectrum(const CouplingMatrices& couplings);

/// The 2×2 block on {|R⟩, |I⟩}, |R⟩ the symmetric ring mode.
struct SymmetricBlock {
  double j_R = 0.0;
  double gamma_R = 0.0;
  double j = 0.0;      // ring-impurity dispersive coupling (per ring emitter)
  double gamma = 0.0;  // ring-impurity dissipative coupling
  cplx lambda_R;       // J_R − iΓ_R/2
  cplx lambda_I;       // −δ_I − iΓ_I/2
  cplx off_diagonal;   // √(NΓ_I/Γ0)(J − iΓ/2)
  cplx lambda_plus;
  cplx lambda_minus;
  cplx alpha;  // dark eigenvector on |R⟩ (unit conjugate norm)
  cplx beta;   // dark eigenvector on |I⟩

  /// The root with the smaller decay rate.
  cplx dark_eigenvalue() const {
    return lambda_plus.imag() > lambda_minus.imag() ? lambda_plus : lambda_minus;
  }
  cplx bright_eigenvalue() const {
    return lambda_plus.imag() > lambda_minus.imag() ? lambda_minus : lambda_plus;
  }
};

SymmetricBlock symmetric_block(const SystemConfig& config);
/// Closed-form roots and dark vector of [[λ_R, c], [c, λ_I]].
SymmetricBlock symmetric_block_from(cplx lambda_R, cplx lambda_I, cplx off_diagonal);

struct DarkModeReport {
  int mode_index = -1;
  double decay_rate = 0.0;
  double frequency = 0.0;
  double impurity_weight = 0.0;
  cplx eigenvalue;
};

/// Minimal-Γ_ν mode among those with impurity weight above `weight_threshold`.
/// Ring modes with m ≠ 0 have no amplitude at the center and are skipped.
DarkModeReport darkest_coupled_mode(const ModeSet& modes, double weight_threshold = 1e-6);

/// The dark-state condition J_R + δ_I ≈ J(N − Γ_I/Γ0), solved for δ_I.
/// `predicted_delta_I` uses the quasi-static 1/r³ couplings (the regime the
/// condition is derived in); `predicted_delta_I_full` uses the full Green's
/// tensor. The residuals J_R − (N−1)J vanish for the identical-emitter optimum.
struct DarkCondition {
  double predicted_delta_I = 0.0;
  double identical_residual = 0.0;
  double predicted_delta_I_full = 0.0;
  double identical_residual_full = 0.0;
};

DarkCondition dark_condition_delta(int n, double lambda_over_d, double gamma_I = 1.0);

/// |Σ_{j≠1} r_1j⁻³ − (N−1)/R³| for a regular N-gon of radius R.
double inverse_cubic_sum_residual(int n, double radius = 1.0);

}  // namespace ringsim
