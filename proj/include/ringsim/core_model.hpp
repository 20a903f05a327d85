#pragma once

// Geometry, polarization and dipole-dipole couplings of a ring of two-level
// emitters with an absorbing impurity at its center.
//
// Units: rates in Γ0 and lengths in 1/k0 throughout (Γ0 = k0 = 1), so the
// resonant wavelength is λ0 = 2π.

#include <vector>

#include "ringsim/types.hpp"

namespace ringsim {

struct UnitConvention {
  double gamma0 = 1.0;
  double k0 = 1.0;

  double wavelength() const { return 2.0 * kPi / k0; }
  // Resonant single-emitter scattering cross section 6π/k0².
  double sigma() const { return 6.0 * kPi / (k0 * k0); }
};

/// Complex dipole orientation, unit norm under the conjugate inner product.
class Polarization {
 public:
  /// (x̂ + iŷ)/√2, the default for every emitter.
  static Polarization circular_inplane();
  /// Normalizes `v`; throws InvalidArgument for a zero or non-finite vector.
  static Polarization from_vector(const CVec3& v);

  const CVec3& vector() const { return v_; }
  bool is_circular_inplane(double tol = 1e-12) const;

 private:
  explicit Polarization(const CVec3& v) : v_(v) {}
  CVec3 v_;
};

struct RingGeometry {
  int n_ring = 0;
  double spacing = 0.0;  // nearest-neighbour distance d
  double radius = 0.0;   // R = d / (2 sin(π/N))
  std::vector<Vec3> positions;
  Vec3 impurity_position = Vec3::Zero();
};

struct ImpuritySpec {
  double delta_I = 0.0;  // transition detuning from the ring emitters
  double gamma_I = 1.0;  // free-space decay rate
  double gamma_T = 0.0;  // extraction rate into the trap level (t)
  Polarization polarization = Polarization::circular_inplane();
};

struct SystemConfig {
  RingGeometry geometry;
  Polarization ring_polarization = Polarization::circular_inplane();
  ImpuritySpec impurity;
  UnitConvention units;

  int n_ring() const { return geometry.n_ring; }
  int dimension() const { return geometry.n_ring + 1; }
  int impurity_index() const { return geometry.n_ring; }

  /// Ring of `n` emitters at spacing λ0/lambda_over_d plus a central impurity.
  static SystemConfig ring(int n, double lambda_over_d, const ImpuritySpec& impurity = {});
  /// The impurity alone (no ring), used for single-emitter reference values.
  static SystemConfig impurity_only(const ImpuritySpec& impurity = {});
};

/// g is the complex (N+1)×(N+1) coupling matrix, impurity at index N.
/// Off-diagonal g equals J − iΓ/2; the diagonal holds −iΓ0/2 (ring) and
/// −iΓ_I/2 (impurity). The impurity detuning and Γ_T are kept separate and
/// only enter through effective_hamiltonian().
struct CouplingMatrices {
  Eigen::MatrixXcd g;
  Eigen::MatrixXd j_part;
  Eigen::MatrixXd gamma_part;
  int n_ring = 0;
  double impurity_detuning = 0.0;

  int dimension() const { return static_cast<int>(g.rows()); }
};

/// Regular N-gon in the z = 0 plane centred on the origin. For n = 1 the single
/// emitter sits at distance R = d from the impurity.
RingGeometry build_geometry(int n, double lambda_over_d);

/// Free-space Green's tensor coupling between dipoles at r_i and r_j:
///
///   G_ij = 3Γ0/(4 k0³ r³) e^{ik0r} [ (1 − ik0r − k0²r²)(p_i*·p_j)
///                                  + (−3 + 3ik0r + k0²r²)(p_i*·r̂)(p_j·r̂) ]
///
/// with r = r_i − r_j. Throws InvalidArgument for coincident positions.
cplx greens_scalar(const Vec3& r_i, const Vec3& r_j, const Polarization& p_i,
                   const Polarization& p_j, const UnitConvention& units = {});

/// Static (k0 r → 0) limit of the real part of greens_scalar, the 1/r³
/// near-field interaction 3Γ0/(4k0³r³)[p_i*·p_j − 3(p_i*·r̂)(p_j·r̂)].
double near_field_coupling(const Vec3& r_i, const Vec3& r_j, const Polarization& p_i,
                           const Polarization& p_j, const UnitConvention& units = {});

/// Ring-impurity coupling at distance R for in-plane circular dipoles, the
/// closed form of greens_scalar: 3Γ0/(8k0³R³) e^{ik0R}(−1 + ik0R − k0²R²).
cplx ring_center_coupling(double radius, const UnitConvention& units = {});

CouplingMatrices coupling_matrices(const SystemConfig& config);

}  // namespace ringsim
