#include "ringsim/core_model.hpp"

#include <cmath>
#include <sstream>

namespace ringsim {

Polarization Polarization::circular_inplane() {
  const double s = 1.0 / std::sqrt(2.0);
  return Polarization(CVec3(cplx(s, 0.0), cplx(0.0, s), cplx(0.0, 0.0)));
}

Polarization Polarization::from_vector(const CVec3& v) {
  const double norm = v.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw InvalidArgument("polarization vector must be finite and non-zero");
  }
  return Polarization(v / norm);
}

bool Polarization::is_circular_inplane(double tol) const {
  return (v_ - circular_inplane().vector()).norm() < tol;
}

RingGeometry build_geometry(int n, double lambda_over_d) {
  if (n < 1) {
    throw InvalidArgument("ring needs at least one emitter (n_ring >= 1)");
  }
  if (!std::isfinite(lambda_over_d) || lambda_over_d <= 0.0) {
    throw InvalidArgument("lambda_over_d must be finite and positive");
  }
  RingGeometry geo;
  geo.n_ring = n;
  geo.spacing = 2.0 * kPi / lambda_over_d;
  geo.radius = n == 1 ? geo.spacing : geo.spacing / (2.0 * std::sin(kPi / n));
  geo.positions.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    geo.positions.emplace_back(geo.radius * std::cos(phi), geo.radius * std::sin(phi), 0.0);
  }
  return geo;
}

SystemConfig SystemConfig::ring(int n, double lambda_over_d, const ImpuritySpec& impurity) {
  if (!(impurity.gamma_I > 0.0) || !std::isfinite(impurity.gamma_I)) {
    throw InvalidArgument("gamma_I must be positive");
  }
  if (!(impurity.gamma_T >= 0.0) || !std::isfinite(impurity.gamma_T)) {
    throw InvalidArgument("gamma_T must be non-negative");
  }
  if (!std::isfinite(impurity.delta_I)) {
    throw InvalidArgument("delta_I must be finite");
  }
  SystemConfig cfg;
  cfg.geometry = build_geometry(n, lambda_over_d);
  cfg.impurity = impurity;
  return cfg;
}

SystemConfig SystemConfig::impurity_only(const ImpuritySpec& impurity) {
  if (!(impurity.gamma_I > 0.0) || !(impurity.gamma_T >= 0.0)) {
    throw InvalidArgument("impurity needs gamma_I > 0 and gamma_T >= 0");
  }
  SystemConfig cfg;
  cfg.impurity = impurity;
  return cfg;
}

cplx greens_scalar(const Vec3& r_i, const Vec3& r_j, const Polarization& p_i,
                   const Polarization& p_j, const UnitConvention& units) {
  const Vec3 sep = r_i - r_j;
  const double r = sep.norm();
  if (!(r > 0.0)) {
    throw InvalidArgument("greens_scalar: coincident emitter positions");
  }
  const Vec3 rhat = sep / r;
  const double kr = units.k0 * r;
  const cplx I(0.0, 1.0);

  const CVec3& pi = p_i.vector();
  const CVec3& pj = p_j.vector();
  const cplx pp = pi.dot(pj);  // Eigen's dot conjugates the left operand
  const cplx pi_r = (pi.conjugate().array() * rhat.cast<cplx>().array()).sum();
  const cplx pj_r = (pj.array() * rhat.cast<cplx>().array()).sum();

  const cplx transverse = 1.0 - I * kr - kr * kr;
  const cplx longitudinal = -3.0 + 3.0 * I * kr + kr * kr;
  const double prefactor = 3.0 * units.gamma0 / (4.0 * kr * kr * kr);
  return prefactor * std::exp(I * kr) * (transverse * pp + longitudinal * pi_r * pj_r);
}

double near_field_coupling(const Vec3& r_i, const Vec3& r_j, const Polarization& p_i,
                           const Polarization& p_j, const UnitConvention& units) {
  const Vec3 sep = r_i - r_j;
  const double r = sep.norm();
  if (!(r > 0.0)) {
    throw InvalidArgument("near_field_coupling: coincident emitter positions");
  }
  const Vec3 rhat = sep / r;
  const double kr = units.k0 * r;
  const CVec3& pi = p_i.vector();
  const CVec3& pj = p_j.vector();
  const cplx pp = pi.dot(pj);
  const cplx pi_r = (pi.conjugate().array() * rhat.cast<cplx>().array()).sum();
  const cplx pj_r = (pj.array() * rhat.cast<cplx>().array()).sum();
  return (3.0 * units.gamma0 / (4.0 * kr * kr * kr) * (pp - 3.0 * pi_r * pj_r)).real();
}

cplx ring_center_coupling(double radius, const UnitConvention& units) {
  if (!(radius > 0.0)) {
    throw InvalidArgument("ring_center_coupling: radius must be positive");
  }
  const double kr = units.k0 * radius;
  const cplx I(0.0, 1.0);
  return 3.0 * units.gamma0 / (8.0 * kr * kr * kr) * std::exp(I * kr) * (-1.0 + I * kr - kr * kr);
}

CouplingMatrices coupling_matrices(const SystemConfig& config) {
  const int n = config.n_ring();
  const int dim = n + 1;
  const auto& units = config.units;
  const double imp_scale = std::sqrt(config.impurity.gamma_I / units.gamma0);

  std::vector<Vec3> pos(config.geometry.positions);
  pos.push_back(config.geometry.impurity_position);

  CouplingMatrices out;
  out.n_ring = n;
  out.impurity_detuning = config.impurity.delta_I;
  out.g = Eigen::MatrixXcd::Zero(dim, dim);

  auto pol = [&](int i) -> const Polarization& {
    return i == n ? config.impurity.polarization : config.ring_polarization;
  };

  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if ((pos[i] - pos[j]).norm() == 0.0) {
        std::ostringstream msg;
        msg << "overlapping emitter positions at indices " << i << " and " << j;
        throw InvalidArgument(msg.str());
      }
      const double scale = (i == n || j == n) ? imp_scale : 1.0;
      out.g(i, j) = scale * greens_scalar(pos[i], pos[j], pol(i), pol(j), units);
      out.g(j, i) = scale * greens_scalar(pos[j], pos[i], pol(j), pol(i), units);
    }
  }
  for (int i = 0; i < n; ++i) out.g(i, i) = cplx(0.0, -0.5 * units.gamma0);
  out.g(n, n) = cplx(0.0, -0.5 * config.impurity.gamma_I);

  out.j_part = out.g.real();
  out.gamma_part = -2.0 * out.g.imag();
  out.j_part.diagonal().setZero();
  return out;
}

}  // namespace ringsim
