#include <doctest.h>

#include <cmath>
#include <random>

#include "ringsim/core_model.hpp"

using namespace ringsim;

namespace {

// Straight transcription of the dyadic Green's tensor, written independently
// of the library with plain complex arithmetic.
cplx reference_green(const Vec3& ri, const Vec3& rj, const CVec3& pi, const CVec3& pj) {
  const Vec3 r = ri - rj;
  const double d = r.norm();
  const Vec3 rh = r / d;
  const cplx i(0.0, 1.0);
  cplx pipj = 0.0, pir = 0.0, pjr = 0.0;
  for (int a = 0; a < 3; ++a) {
    pipj += std::conj(pi(a)) * pj(a);
    pir += std::conj(pi(a)) * rh(a);
    pjr += pj(a) * rh(a);
  }
  return 3.0 / (4.0 * d * d * d) * std::exp(i * d) *
         ((1.0 - i * d - d * d) * pipj + (-3.0 + 3.0 * i * d + d * d) * pir * pjr);
}

Vec3 rotate_z(const Vec3& v, double phi) {
  return {std::cos(phi) * v.x() - std::sin(phi) * v.y(),
          std::sin(phi) * v.x() + std::cos(phi) * v.y(), v.z()};
}

}  // namespace

TEST_SUITE("core_model") {
  TEST_CASE("polygon radius") {
    const RingGeometry hex = build_geometry(6, 7.3);
    CHECK(hex.radius == doctest::Approx(hex.spacing).epsilon(1e-14));

    // d = 1 corresponds to λ/d = 2π.
    const RingGeometry square = build_geometry(4, 2.0 * kPi);
    CHECK(square.spacing == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(square.radius == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    const RingGeometry nine = build_geometry(9, 20.0);
    CHECK(nine.spacing == doctest::Approx(kPi / 10.0).epsilon(1e-14));
    CHECK(nine.radius == doctest::Approx(0.45927012120429334).epsilon(1e-13));
  }

  TEST_CASE("positions lie on the circle with nearest-neighbour spacing d") {
    for (int n = 2; n <= 16; ++n) {
      const RingGeometry g = build_geometry(n, 13.0);
      REQUIRE(static_cast<int>(g.positions.size()) == n);
      for (int i = 0; i < n; ++i) {
        CHECK(g.positions[i].norm() == doctest::Approx(g.radius).epsilon(1e-12));
        const double nn = (g.positions[i] - g.positions[(i + 1) % n]).norm();
        CHECK(std::abs(nn / g.spacing - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("single ring emitter sits at distance d") {
    const RingGeometry g = build_geometry(1, 10.0);
    REQUIRE(g.positions.size() == 1);
    CHECK(g.radius == doctest::Approx(g.spacing));
    CHECK(g.positions[0].norm() == doctest::Approx(g.spacing));
  }

  TEST_CASE("invalid geometry is rejected") {
    CHECK_THROWS_AS(build_geometry(-1, 10.0), InvalidArgument);
    CHECK_THROWS_AS(build_geometry(5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(build_geometry(5, std::nan("")), InvalidArgument);
  }

  TEST_CASE("polarization normalization") {
    const Polarization c = Polarization::circular_inplane();
    CHECK(c.vector().squaredNorm() == doctest::Approx(1.0));
    CHECK(c.is_circular_inplane());
    const Polarization p = Polarization::from_vector(CVec3(cplx(3, 0), cplx(0, 4), 0));
    CHECK(p.vector().squaredNorm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(Polarization::from_vector(CVec3::Zero()), InvalidArgument);
  }

  TEST_CASE("Green's tensor matches a direct transcription") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Polarization c = Polarization::circular_inplane();
    for (int t = 0; t < 50; ++t) {
      const Vec3 a(u(rng), u(rng), u(rng));
      const Vec3 b(u(rng), u(rng), u(rng));
      const cplx ref = reference_green(a, b, c.vector(), c.vector());
      const cplx got = greens_scalar(a, b, c, c);
      CHECK(std::abs(got - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }

  TEST_CASE("separation along z with circular dipoles") {
    const Polarization c = Polarization::circular_inplane();
    const cplx i(0.0, 1.0);
    for (double z : {0.05, 0.7, 3.0}) {
      const cplx expect = 3.0 / (4.0 * z * z * z) * std::exp(i * z) * (1.0 - i * z - z * z);
      const cplx got = greens_scalar(Vec3(0, 0, z), Vec3::Zero(), c, c);
      CHECK(std::abs(got - expect) < 1e-12 * std::abs(expect));
    }
  }

  TEST_CASE("in-plane separation reduces to the ring-center closed form") {
    const Polarization c = Polarization::circular_inplane();
    const cplx i(0.0, 1.0);
    for (double r : {0.1, 0.45927, 2.0}) {
      const cplx expect =
          3.0 / (8.0 * r * r * r) * std::exp(i * r) * (-1.0 + i * r - r * r);
      CHECK(std::abs(greens_scalar(Vec3(r, 0, 0), Vec3::Zero(), c, c) - expect) <
            1e-12 * std::abs(expect));
      CHECK(std::abs(ring_center_coupling(r) - expect) < 1e-12 * std::abs(expect));
    }
  }

  TEST_CASE("dissipative coupling saturates at the single-emitter rate") {
    const Polarization c = Polarization::circular_inplane();
    const cplx g = greens_scalar(Vec3(1e-3, 0, 0), Vec3::Zero(), c, c);
    CHECK(std::abs(-2.0 * g.imag() - 1.0) < 1e-4);
  }

  TEST_CASE("near-field coupling is the static limit") {
    const Polarization c = Polarization::circular_inplane();
    const Vec3 r(1e-3, 2e-3, 0);
    const double nf = near_field_coupling(r, Vec3::Zero(), c, c);
    const double full = greens_scalar(r, Vec3::Zero(), c, c).real();
    CHECK(std::abs(nf / full - 1.0) < 1e-4);
    // In plane, circular dipoles: -3/(8 r^3).
    CHECK(nf == doctest::Approx(-3.0 / (8.0 * std::pow(r.norm(), 3))).epsilon(1e-12));
  }

  TEST_CASE("coincident positions throw") {
    const Polarization c = Polarization::circular_inplane();
    CHECK_THROWS_AS(greens_scalar(Vec3::Zero(), Vec3::Zero(), c, c), InvalidArgument);
  }

  TEST_CASE("Green's tensor symmetry on random coplanar pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const Polarization c = Polarization::circular_inplane();
    for (int t = 0; t < 100; ++t) {
      const Vec3 a(u(rng), u(rng), 0.0);
      const Vec3 b(u(rng), u(rng), 0.0);
      CHECK(greens_scalar(a, b, c, c) == greens_scalar(b, a, c, c));
    }
  }

  TEST_CASE("coupling matrices: symmetry, reality split, diagonal") {
    ImpuritySpec imp;
    imp.gamma_I = 0.7;
    imp.delta_I = 0.3;
    const SystemConfig cfg = SystemConfig::ring(7, 11.0, imp);
    const CouplingMatrices cm = coupling_matrices(cfg);
    const int dim = cm.dimension();
    REQUIRE(dim == 8);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        CHECK(cm.g(i, j) == cm.g(j, i));
        if (i != j) {
          CHECK(cm.j_part(i, j) == cm.g(i, j).real());
          CHECK(cm.gamma_part(i, j) == -2.0 * cm.g(i, j).imag());
        }
      }
    }
    for (int i = 0; i < 7; ++i) CHECK(cm.gamma_part(i, i) == doctest::Approx(1.0));
    CHECK(cm.gamma_part(7, 7) == doctest::Approx(0.7));
    CHECK(cm.impurity_detuning == doctest::Approx(0.3));
  }

  TEST_CASE("N = 2 ring coupling is symmetric") {
    const CouplingMatrices cm = coupling_matrices(SystemConfig::ring(2, 15.0));
    CHECK(cm.g(0, 1) == cm.g(1, 0));
  }

  TEST_CASE("dissipation matrix is positive semidefinite") {
    for (int n = 2; n <= 16; ++n) {
      for (double lod : {2.0, 5.0, 10.0, 20.0, 40.0, 60.0}) {
        const CouplingMatrices cm = coupling_matrices(SystemConfig::ring(n, lod));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cm.gamma_part);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
      }
    }
  }

  TEST_CASE("impurity coupling equals the closed form at the ring radius") {
    const SystemConfig cfg = SystemConfig::ring(9, 20.0);
    const CouplingMatrices cm = coupling_matrices(cfg);
    const cplx expect = ring_center_coupling(cfg.geometry.radius);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(cm.g(i, 9) - expect) < 1e-13);
  }

  TEST_CASE("impurity coupling carries the dipole scaling") {
    ImpuritySpec imp;
    imp.gamma_I = 0.25;
    const SystemConfig cfg = SystemConfig::ring(5, 20.0, imp);
    const CouplingMatrices cm = coupling_matrices(cfg);
    const cplx expect = 0.5 * ring_center_coupling(cfg.geometry.radius);
    CHECK(std::abs(cm.g(0, 5) - expect) < 1e-13);
  }

  TEST_CASE("couplings are invariant under a rotation about z") {
    SystemConfig cfg = SystemConfig::ring(8, 9.0);
    const CouplingMatrices base = coupling_matrices(cfg);
    for (Vec3& p : cfg.geometry.positions) p = rotate_z(p, 0.37);
    const CouplingMatrices rot = coupling_matrices(cfg);
    CHECK((base.g - rot.g).cwiseAbs().maxCoeff() < 1e-12);
  }
}
