#include <doctest.h>

#include <cmath>

#include "ringsim/meanfield.hpp"
#include "ringsim/drive_response.hpp"

using namespace ringsim;

namespace {

double quantum_at(const SystemConfig& cfg, double rabi, double delta) {
  return sigma_abs_coherent(cfg, DriveSpec::coherent(rabi, delta)).sigma_abs_over_sigma;
}

SystemConfig with_trap(const SystemConfig& base, double gamma_T) {
  SystemConfig cfg = base;
  cfg.impurity.gamma_T = gamma_T;
  return cfg;
}

}  // namespace

TEST_SUITE("meanfield") {
  TEST_CASE("decoupled impurity is a driven two-level atom") {
    for (auto variant : {MeanFieldVariant::rederived, MeanFieldVariant::paper}) {
      for (auto [delta, gt] : {std::pair{0.0, 1.0}, std::pair{0.4, 0.3}, std::pair{-1.2, 2.0}}) {
        const double rabi = 1e-3;
        const MeanFieldResult r = mf_sigma_abs(MeanFieldParams::decoupled(rabi, delta, gt, variant));
        const double expect = rabi * rabi / (delta * delta + std::pow(1.0 + gt, 2) / 4.0);
        CHECK(std::abs(r.state.p_ee / expect - 1.0) < 1e-3);
        CHECK(r.stable);
      }
    }
  }

  TEST_CASE("variants coincide in the decoupled limit") {
    const MeanFieldParams a = MeanFieldParams::decoupled(1e-3, 0.25, 0.6, MeanFieldVariant::rederived);
    const MeanFieldParams b = MeanFieldParams::decoupled(1e-3, 0.25, 0.6, MeanFieldVariant::paper);
    MeanFieldState s;
    s.p_ee = 1e-5;
    s.s_ge = cplx(2e-4, -1e-4);
    const MeanFieldState da = mf_derivatives(s, a);
    const MeanFieldState db = mf_derivatives(s, b);
    CHECK(da.p_ee == doctest::Approx(db.p_ee).epsilon(1e-14));
    CHECK(std::abs(da.s_ge - db.s_ge) < 1e-18);
  }

  TEST_CASE("vacuum is the stable fixed point without drive") {
    const MeanFieldParams p = MeanFieldParams::from_config(with_trap(SystemConfig::ring(9, 10.0), 0.01), 0.0, 1.0);
    const MeanFieldState vac;
    const MeanFieldState d = mf_derivatives(vac, p);
    CHECK(d.p_ee == 0.0);
    CHECK(std::abs(d.s_ge) == 0.0);
    CHECK(std::abs(d.s_ring) == 0.0);
    Eigen::EigenSolver<Eigen::MatrixXd> es(mf_jacobian(vac, p));
    CHECK(es.eigenvalues().real().maxCoeff() < 0.0);
  }

  TEST_CASE("pack and unpack round-trip") {
    MeanFieldState s;
    s.p_ee = 0.1;
    s.s_ge = cplx(0.2, -0.3);
    s.s_ring = cplx(-0.4, 0.5);
    const MeanFieldState t = MeanFieldState::unpack(s.pack());
    CHECK(t.p_ee == s.p_ee);
    CHECK(t.s_ge == s.s_ge);
    CHECK(t.s_ring == s.s_ring);
  }

  TEST_CASE("close to the quantum model for a compact ring") {
    const SystemConfig base = SystemConfig::ring(9, 4.0);
    const MeanFieldParams p = MeanFieldParams::at_dark_point(base, 5e-4);
    const double mf = mf_sigma_abs(p).sigma_abs_over_sigma;
    const double q = quantum_at(with_trap(base, p.gamma_T), 5e-4, p.delta);
    CHECK(std::abs(mf / q - 1.0) < 0.1);
  }

  TEST_CASE("quantum cross section exceeds the mean-field one beyond lambda/d = 8") {
    for (double lod : {10.0, 15.0}) {
      const SystemConfig base = SystemConfig::ring(9, lod);
      const MeanFieldParams p = MeanFieldParams::at_dark_point(base, 5e-4);
      const double mf = mf_sigma_abs(p).sigma_abs_over_sigma;
      const double q = quantum_at(with_trap(base, p.gamma_T), 5e-4, p.delta);
      CHECK(mf < q);
    }
  }

  TEST_CASE("weak-drive scaling of the steady state") {
    const SystemConfig base = SystemConfig::ring(9, 4.0);
    MeanFieldParams p = MeanFieldParams::at_dark_point(base, 4e-4);
    const MeanFieldResult full = mf_steady_state(p);
    p.rabi = 2e-4;
    const MeanFieldResult half = mf_steady_state(p);
    CHECK(std::abs(std::abs(half.state.s_ge) / std::abs(full.state.s_ge) - 0.5) < 0.005);
    CHECK(std::abs(std::abs(half.state.s_ring) / std::abs(full.state.s_ring) - 0.5) < 0.005);
    CHECK(std::abs(half.state.p_ee / full.state.p_ee - 0.25) < 0.0025);
  }

  TEST_CASE("populations stay physical along the trajectory") {
    for (double lod : {3.0, 6.0, 12.0}) {
      const MeanFieldResult r = mf_sigma_abs(MeanFieldParams::at_dark_point(SystemConfig::ring(9, lod), 5e-4));
      CHECK(r.min_p_ee >= -1e-12);
      CHECK(r.max_p_ee <= 1.0);
      CHECK(r.residual < 1e-8);
    }
  }

  TEST_CASE("zero trap rate gives zero cross section with a warning") {
    const MeanFieldResult r = mf_sigma_abs(MeanFieldParams::decoupled(1e-3, 0.0, 0.0));
    CHECK(r.sigma_abs_over_sigma == 0.0);
    CHECK_FALSE(r.warnings.empty());
  }

  TEST_CASE("variant names") {
    CHECK(std::string(variant_name(MeanFieldVariant::rederived)) == "meanfield_rederived");
    CHECK(std::string(variant_name(MeanFieldVariant::paper)) == "meanfield_paper");
  }
}
