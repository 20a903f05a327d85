#include <doctest.h>

#include <cmath>

#include "ringsim/lindblad.hpp"

using namespace ringsim;

namespace {

SystemConfig with_trap(int n, double lod, double gamma_T) {
  ImpuritySpec imp;
  imp.gamma_T = gamma_T;
  return n == 0 ? SystemConfig::impurity_only(imp) : SystemConfig::ring(n, lod, imp);
}

double linear_sigma(const SystemConfig& cfg, const DriveSpec& drive) {
  return sigma_abs_coherent(cfg, drive).sigma_abs_over_sigma;
}

}  // namespace

TEST_SUITE("lindblad") {
  TEST_CASE("basis layout") {
    const HilbertLayout full(3);
    CHECK(full.dimension() == 24);
    const HilbertLayout one(3, 1);
    // g with at most one ring excitation (4), e with none (1), t with at most one (4).
    CHECK(one.dimension() == 9);
    const HilbertLayout two(3, 2);
    CHECK(two.dimension() == 7 + 4 + 7);
    const std::uint32_t code = HilbertLayout::make_code(3, ImpurityLevel::e, 0b010);
    const int idx = full.index_of(code);
    REQUIRE(idx >= 0);
    CHECK(full.level(idx) == ImpurityLevel::e);
    CHECK(full.ring_bits(idx) == 0b010u);
    CHECK(one.index_of(HilbertLayout::make_code(3, ImpurityLevel::e, 0b001)) == -1);
  }

  TEST_CASE("single driven emitter with trap") {
    for (double gt : {0.5, 1.0, 2.0}) {
      LiouvilleSpec spec{with_trap(0, 0.0, gt), DriveSpec::coherent(1e-3, 0.0)};
      const OracleResult r = evolve_to_steady(spec);
      CHECK(std::abs(r.sigma_abs_over_sigma / single_emitter_sigma_coherent(gt) - 1.0) < 5e-3);
      CHECK(r.trace_error < 1e-8);
      CHECK(r.min_eigenvalue > -1e-8);
    }
  }

  TEST_CASE("single emitter under incoherent pumping") {
    LiouvilleSpec spec{with_trap(0, 0.0, 0.5), DriveSpec::incoherent(1e-3)};
    const OracleResult r = evolve_to_steady(spec);
    CHECK(std::abs(r.sigma_abs_over_sigma / single_emitter_sigma_incoherent(0.5) - 1.0) < 5e-3);
  }

  TEST_CASE("N = 3 coherent drive matches the linear solve") {
    const SystemConfig cfg = with_trap(3, 10.0, 1.0);
    const DarkModeReport d = darkest_coupled_mode(diagonalize_effective(coupling_matrices(cfg), 1.0));
    const DriveSpec drive = DriveSpec::coherent(1e-3, d.frequency);
    const OracleResult r = evolve_to_steady({cfg, drive});
    CHECK(std::abs(r.sigma_abs_over_sigma / linear_sigma(cfg, drive) - 1.0) < 0.01);
    CHECK(r.dimension == 24);
  }

  TEST_CASE("N = 3 incoherent pump matches the mode sum") {
    const SystemConfig cfg = with_trap(3, 10.0, 1.0);
    const DriveSpec drive = DriveSpec::incoherent(1e-3);
    const ModeSet m = diagonalize_effective(coupling_matrices(cfg), 1.0);
    const double eq = sigma_abs_incoherent(m, cfg, drive).sigma_abs_over_sigma;
    const OracleResult r = evolve_to_steady({cfg, drive});
    CHECK(std::abs(r.sigma_abs_over_sigma / eq - 1.0) < 0.05);
  }

  TEST_CASE("two-excitation truncation agrees with the full basis at N = 4") {
    const SystemConfig cfg = with_trap(4, 8.0, 1.0);
    const LiouvilleSpec spec{cfg, DriveSpec::coherent(1e-3, 0.2)};
    const OracleResult full = evolve_to_steady(spec);
    const OracleResult two = truncated_basis_evolve(spec, 2);
    CHECK(std::abs(two.impurity_population / full.impurity_population - 1.0) < 1e-4);
  }

  TEST_CASE("one-excitation truncation is the linear response") {
    const SystemConfig cfg = with_trap(5, 12.0, 0.7);
    const DriveSpec drive = DriveSpec::coherent(1e-3, 0.5);
    const OracleResult one = truncated_basis_evolve({cfg, drive}, 1);
    CHECK(std::abs(one.sigma_abs_over_sigma / linear_sigma(cfg, drive) - 1.0) < 1e-3);
  }

  TEST_CASE("truncation convergence report") {
    const TruncationCheck tc = truncation_convergence({with_trap(3, 10.0, 1.0), DriveSpec::coherent(1e-3, 0.0)});
    CHECK(tc.converged);
    CHECK(tc.relative_difference < 0.1);
  }

  TEST_CASE("excitation probability scales as the drive squared") {
    const SystemConfig cfg = with_trap(2, 10.0, 1.0);
    std::vector<double> lx, ly;
    for (double rabi : {1e-4, 1e-3, 1e-2}) {
      const OracleResult r = evolve_to_steady({cfg, DriveSpec::coherent(rabi, 0.0)});
      lx.push_back(std::log(rabi));
      ly.push_back(std::log(r.excitation_probability));
    }
    const double slope_lo = (ly[1] - ly[0]) / (lx[1] - lx[0]);
    const double slope_hi = (ly[2] - ly[1]) / (lx[2] - lx[1]);
    CHECK(std::abs(slope_lo - 2.0) < 0.05);
    CHECK(std::abs(slope_hi - 2.0) < 0.05);
  }

  TEST_CASE("repump steady state agrees with the plateau definition") {
    const SystemConfig cfg = with_trap(2, 10.0, 1.0);
    const DriveSpec drive = DriveSpec::coherent(1e-3, 0.0);
    const OracleResult plateau = evolve_to_steady({cfg, drive});
    const OracleResult repump = evolve_to_steady({cfg, drive, 1e-2});
    CHECK(std::abs(repump.impurity_population / plateau.impurity_population - 1.0) < 0.01);
  }

  TEST_CASE("size limits and invalid input") {
    CHECK_THROWS_AS(evolve_to_steady({with_trap(6, 10.0, 1.0), DriveSpec::coherent(1e-3, 0.0)}),
                    InvalidArgument);
    CHECK_THROWS_AS(truncated_basis_evolve({with_trap(3, 10.0, 1.0), DriveSpec::coherent(1e-3, 0.0)}, 3),
                    InvalidArgument);
    CHECK_THROWS_AS(evolve_to_steady({with_trap(2, 10.0, 1.0), DriveSpec::coherent(0.0, 0.0)}),
                    InvalidArgument);
  }

  TEST_CASE("no plateau within t_max is a solver error") {
    OracleOptions opts;
    opts.t_max = 2.0;
    CHECK_THROWS_AS(evolve_to_steady({with_trap(2, 10.0, 1.0), DriveSpec::coherent(1e-3, 0.0)}, opts),
                    SolverError);
  }
}
