#pragma once

// Brute-force master-equation evolution of the ring plus a three-level
// impurity (g, e, t), used to validate the weak-drive formulas.
//
// Basis: |a, bits⟩ with the impurity level a ∈ {g, e, t} as the slowest index
// and ring emitter j excited when bit j of `bits` is set. The state code is
// a·2^N + bits. With an excitation cutoff K only states whose ring excitation
// count plus (a == e) is at most K are kept; the trap level counts as zero.

#include <cstdint>
#include <vector>

#include "ringsim/drive_response.hpp"

namespace ringsim {

enum class ImpurityLevel : int { g = 0, e = 1, t = 2 };

class HilbertLayout {
 public:
  /// max_excitations < 0 keeps the full 3·2^N basis.
  HilbertLayout(int n_ring, int max_excitations = -1);

  int n_ring() const { return n_ring_; }
  int max_excitations() const { return max_exc_; }
  int dimension() const { return static_cast<int>(codes_.size()); }
  std::uint32_t code(int index) const { return codes_[index]; }
  /// Basis index of a state code, or −1 if the state is truncated away.
  int index_of(std::uint32_t code) const;
  static std::uint32_t make_code(int n_ring, ImpurityLevel level, std::uint32_t bits) {
    return (static_cast<std::uint32_t>(level) << n_ring) | bits;
  }
  ImpurityLevel level(int index) const {
    return static_cast<ImpurityLevel>(codes_[index] >> n_ring_);
  }
  std::uint32_t ring_bits(int index) const { return codes_[index] & ((1u << n_ring_) - 1u); }

 private:
  int n_ring_;
  int max_exc_;
  std::vector<std::uint32_t> codes_;
  std::vector<int> lookup_;
};

/// Hamiltonian (flip-flop J_ij, detunings, drive) and dissipators (collective
/// Γ_ij, trap Γ_T, optional repump t→g, incoherent pump through R_k) are all
/// derived from the system configuration and drive.
struct LiouvilleSpec {
  SystemConfig config;
  DriveSpec drive;
  double repump_rate = 0.0;
};

struct OracleOptions {
  double tolerance = 1e-6;       // plateau: |d ln p_ee/dt| below this, in Γ0
  double t_max = 1e4;            // in 1/Γ0
  double checkpoint_dt = 0.5;
  int plateau_checkpoints = 20;  // consecutive checkpoints meeting the tolerance
  // Absolute error per density-matrix element in units of the excitation
  // scale: Ω²/Γ0² for a coherent drive, ε/Γ0 for an incoherent pump.
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int psd_check_every = 40;      // checkpoints between positivity checks
};

struct OracleResult {
  double impurity_population = 0.0;   // ⟨σ_I^ee⟩ conditioned on not trapped
  std::vector<double> ring_populations;
  double trap_flux = 0.0;             // Γ_T ⟨σ_I^ee⟩
  double sigma_abs_over_sigma = 0.0;
  double trap_population = 0.0;
  double excitation_probability = 0.0;  // 1 − ⟨g, 0|ρ|g, 0⟩ − P_t, conditioned
  double final_time = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  double plateau_rate = 0.0;
  long steps = 0;
  int dimension = 0;
};

/// Evolves from |g⟩⟨g| on the full basis (N ≤ 5) until the plateau criterion
/// holds. Throws SolverError when no plateau is reached by t_max, or when the
/// trace or positivity checks fail.
OracleResult evolve_to_steady(const LiouvilleSpec& spec, const OracleOptions& options = {});

/// Same contract on the basis truncated at 1 or 2 excitations (N ≤ 9).
OracleResult truncated_basis_evolve(const LiouvilleSpec& spec, int max_excitations,
                                    const OracleOptions& options = {});

struct TruncationCheck {
  OracleResult order1;
  OracleResult order2;
  double relative_difference = 0.0;
  bool converged = true;  // orders agree within 10%
};

TruncationCheck truncation_convergence(const LiouvilleSpec& spec,
                                       const OracleOptions& options = {});

/// Full basis for N ≤ 5, two-excitation truncation above.
OracleResult oracle_steady_state(const LiouvilleSpec& spec, const OracleOptions& options = {});

}  // namespace ringsim
