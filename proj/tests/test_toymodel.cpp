#include <doctest.h>

#include <cmath>

#include "ringsim/toymodel.hpp"

using namespace ringsim;

namespace {

ToyConfig coherent_toy(double n_eff, double distance, PumpScenario mask, double rabi = 0.1) {
  ToyConfig c = ToyConfig::from_distance(n_eff, distance, 1.0);
  c.drive.rabi = rabi;
  c.drive.mask = mask;
  return c;
}

double trace_of(const Eigen::MatrixXcd& rho) { return rho.trace().real(); }

}  // namespace

TEST_SUITE("toymodel") {
  TEST_CASE("couplings follow the ring-center Green's function") {
    const ToyConfig c = ToyConfig::from_distance(9.0, 0.1, 1.0);
    const cplx g = ring_center_coupling(0.1 * 2.0 * kPi);
    CHECK(c.gamma_a == doctest::Approx(9.0));
    CHECK(c.gamma_c == doctest::Approx(1.0));
    CHECK(c.omega_R == doctest::Approx(3.0 * g.real()).epsilon(1e-14));
    CHECK(c.gamma_ac == doctest::Approx(-6.0 * g.imag()).epsilon(1e-14));
    const ToyConfig q = ToyConfig::from_distance(4.0, 0.1, 1.0, AntennaDecayScaling::quadratic);
    CHECK(q.gamma_a == doctest::Approx(16.0));
    CHECK(q.omega_R == doctest::Approx(4.0 * g.real()).epsilon(1e-14));
  }

  TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(ToyConfig::from_distance(0.5, 0.1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ToyConfig::from_distance(9.0, 0.0, 1.0), InvalidArgument);
    ToyConfig c = ToyConfig::from_distance(9.0, 0.1, 1.0);
    c.gamma_ac = 10.0;  // exceeds √(Γ_a Γ_c)
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
  }

  TEST_CASE("pump matrices per scenario") {
    const Eigen::Matrix2d a = pump_matrix(PumpScenario::antenna, 9.0, 0.01);
    CHECK(a(0, 0) == doctest::Approx(0.09));
    CHECK(a(1, 1) == 0.0);
    const Eigen::Matrix2d c = pump_matrix(PumpScenario::center, 9.0, 0.01);
    CHECK(c(0, 0) == 0.0);
    CHECK(c(1, 1) == doctest::Approx(0.01));
    const Eigen::Matrix2d both = pump_matrix(PumpScenario::collective, 9.0, 0.01, 0.005);
    CHECK(both(0, 1) == doctest::Approx(0.005));
  }

  TEST_CASE("bright and dark states: symmetric pair") {
    const BrightDark bd = bright_dark_states(1.0, 1.0, 0.4);
    CHECK(bd.dark_gamma == doctest::Approx(0.6));
    CHECK(bd.bright_gamma == doctest::Approx(1.4));
    CHECK(std::abs(std::abs(bd.dark_vector(0)) - std::sqrt(0.5)) < 1e-12);
    CHECK(bd.dark_vector(0) * bd.dark_vector(1) < 0.0);
    CHECK(bd.c_plus == doctest::Approx(-1.0));
    CHECK(bd.c_minus == doctest::Approx(1.0));
    CHECK(bd.formula_c_plus == doctest::Approx(bd.c_plus));
    CHECK(bd.formula_c_minus == doctest::Approx(bd.c_minus));
  }

  TEST_CASE("bright and dark states: perfectly correlated decay") {
    const BrightDark bd = bright_dark_states(9.0, 1.0, 3.0);
    CHECK(std::abs(bd.dark_gamma) < 1e-12);
    const Eigen::Vector2d expect = Eigen::Vector2d(1.0, -3.0) / std::sqrt(10.0);
    CHECK(std::abs(std::abs(bd.dark_vector.dot(expect)) - 1.0) < 1e-12);
    CHECK(bd.dark_gamma + bd.bright_gamma == doctest::Approx(10.0).epsilon(1e-14));
  }

  TEST_CASE("bright and dark states: decoupled limit") {
    const BrightDark bd = bright_dark_states(3.0, 1.0, 0.0);
    CHECK(bd.dark_gamma == doctest::Approx(1.0));
    CHECK(std::abs(bd.dark_vector(1)) == doctest::Approx(1.0));
    CHECK(bd.c_plus == 0.0);
    CHECK(std::isinf(bd.c_minus));
  }

  TEST_CASE("dark width decreases monotonically toward the singlet limit") {
    double previous = 1e300;
    for (int k = 0; k <= 20; ++k) {
      const double gac = 3.0 * k / 20.0;
      const BrightDark bd = bright_dark_states(9.0, 1.0, gac);
      CHECK(bd.dark_gamma < previous);
      CHECK(bd.dark_gamma + bd.bright_gamma == doctest::Approx(10.0).epsilon(1e-14));
      previous = bd.dark_gamma;
    }
    CHECK(previous < 1e-12);
  }

  TEST_CASE("vacuum is stationary without drive or pumping") {
    ToyConfig c = ToyConfig::from_distance(9.0, 0.1, 0.0);
    const Eigen::MatrixXcd rho = toy_evolve(c, 50.0);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(trace_of(rho) - 1.0) < 1e-12);
  }

  TEST_CASE("no pumping means no trapped population") {
    const ToyConfig c = ToyConfig::from_distance(9.0, 0.1, 1.0);
    for (const TimePoint& p : target_population_curve(c, 20.0, 10)) CHECK(p.target_population == 0.0);
  }

  TEST_CASE("evolution preserves trace and positivity") {
    ToyConfig c = coherent_toy(9.0, 0.1, PumpScenario::collective, 0.3);
    c.nu = pump_matrix(PumpScenario::antenna, 9.0, 0.01);
    c.drive.bandwidth = 0.5;
    for (double t : {0.5, 5.0, 40.0}) {
      const Eigen::MatrixXcd rho = toy_evolve(c, t);
      CHECK(std::abs(trace_of(rho) - 1.0) < 1e-10);
      CHECK((rho - rho.adjoint()).norm() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
  }

  TEST_CASE("trap-state loading rate equals the linear-response transfer rate") {
    const double rabi = 1e-3;
    ToyConfig c = coherent_toy(9.0, 0.1, PumpScenario::collective, rabi);
    for (double delta : {-3.0, 0.0, 1.5}) {
      c.drive.detuning = delta;
      const double p1 = toy_evolve(c, 200.0)(2, 2).real();
      const double p2 = toy_evolve(c, 300.0)(2, 2).real();
      const double slope = (p2 - p1) / 100.0;
      CHECK(std::abs(slope / (rabi * rabi * coherent_transfer_rate(c, delta)) - 1.0) < 1e-3);
    }
  }

  TEST_CASE("antenna pumping with a larger dipole loads the trap faster") {
    ToyConfig small = ToyConfig::from_distance(1.0, 0.1, 3.0);
    small.nu = pump_matrix(PumpScenario::antenna, 1.0, 0.01);
    ToyConfig large = ToyConfig::from_distance(9.0, 0.1, 3.0);
    large.nu = pump_matrix(PumpScenario::antenna, 9.0, 0.01);
    const auto a = target_population_curve(small, 50.0, 5);
    const auto b = target_population_curve(large, 50.0, 5);
    for (size_t i = 0; i < a.size(); ++i) CHECK(b[i].target_population > a[i].target_population);
  }

  TEST_CASE("two transfer maxima at the split eigenstates") {
    const ToyConfig c = coherent_toy(9.0, 0.1, PumpScenario::collective);
    const TransferRateSpectrum s = coherent_transfer_rate_spectrum(c, -15.0, 15.0, 3001);
    const std::vector<int> peaks = local_maxima(s.rate);
    REQUIRE(peaks.size() == 2);
    const double w = std::abs(c.omega_R);
    const double half_width_plus = 0.5 * ((c.gamma_a + c.gamma_c) / 2.0 + c.gamma_ac + c.gamma_l / 2.0);
    const double half_width_minus = 0.5 * ((c.gamma_a + c.gamma_c) / 2.0 - c.gamma_ac + c.gamma_l / 2.0);
    const double lo = s.detunings[peaks[0]], hi = s.detunings[peaks[1]];
    CHECK(std::abs(std::abs(lo) - w) < std::max(half_width_plus, half_width_minus));
    CHECK(std::abs(std::abs(hi) - w) < std::max(half_width_plus, half_width_minus));
    CHECK(lo * hi < 0.0);
  }

  TEST_CASE("uncoupled center gives a single Lorentzian at zero detuning") {
    ToyConfig c = coherent_toy(9.0, 0.1, PumpScenario::center);
    c.omega_R = 0.0;
    c.gamma_ac = 0.0;
    const TransferRateSpectrum s = coherent_transfer_rate_spectrum(c, -5.0, 5.0, 1001);
    const std::vector<int> peaks = local_maxima(s.rate);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(s.detunings[peaks[0]]) < 1e-12);
    // Γ_l / ((Γ_c + Γ_l)/2)^2 on resonance.
    CHECK(s.rate[peaks[0]] == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("transfer area saturates with the antenna size") {
    auto area = [](double n_eff) {
      return coherent_transfer_rate_spectrum(coherent_toy(n_eff, 0.1, PumpScenario::collective), -60.0, 60.0, 12001)
          .area;
    };
    const double a1 = area(1.0), a9 = area(9.0), a16 = area(16.0);
    CHECK(a9 > a1);
    CHECK(a16 / a9 - 1.0 < 0.1);
  }

  TEST_CASE("resonance grows as the dipoles approach under antenna pumping") {
    double previous = 0.0;
    for (double r : {0.2, 0.1, 0.05}) {
      ToyConfig c = ToyConfig::from_distance(9.0, r, 1.0);
      c.nu = pump_matrix(PumpScenario::antenna, 9.0, 0.01);
      const double p = target_population_curve(c, 20.0, 1).back().target_population;
      CHECK(p > previous);
      previous = p;
    }
  }

  TEST_CASE("finite-time spectra narrow bandwidth keeps more area at the peak") {
    const ToyConfig c = coherent_toy(9.0, 0.1, PumpScenario::collective);
    const auto spectra = coherent_spectrum_and_area(c, -15.0, 15.0, 121, 20.0, {0.0, 2.0});
    REQUIRE(spectra.size() == 2);
    double peak0 = 0.0, peak1 = 0.0;
    for (double v : spectra[0].target_population) peak0 = std::max(peak0, v);
    for (double v : spectra[1].target_population) peak1 = std::max(peak1, v);
    CHECK(peak1 < peak0);
    CHECK(spectra[0].area > 0.0);
  }

  TEST_CASE("transfer rate needs zero bandwidth") {
    ToyConfig c = coherent_toy(9.0, 0.1, PumpScenario::collective);
    c.drive.bandwidth = 0.1;
    CHECK_THROWS_AS(coherent_transfer_rate(c, 0.0), InvalidArgument);
  }

  TEST_CASE("local maxima are strict") {
    CHECK(local_maxima({0.0, 1.0, 0.0, 2.0, 2.0, 0.0, 3.0, 1.0}) == std::vector<int>{1, 6});
  }
}
