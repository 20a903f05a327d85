#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ringsim/spectral.hpp"

using namespace ringsim;

namespace {

ModeSet modes_of(const SystemConfig& cfg) {
  return diagonalize_effective(coupling_matrices(cfg), cfg.impurity.gamma_T);
}

SystemConfig ring_with(int n, double lod, double delta_I = 0.0, double gamma_I = 1.0,
                       double gamma_T = 0.0) {
  ImpuritySpec imp;
  imp.delta_I = delta_I;
  imp.gamma_I = gamma_I;
  imp.gamma_T = gamma_T;
  return SystemConfig::ring(n, lod, imp);
}

// Greedy nearest matching of two eigenvalue lists; returns the worst distance.
double spectrum_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](const cplx& p, const cplx& q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("impurity alone has the single mode -delta_I - i gamma_I/2") {
    ImpuritySpec imp;
    imp.delta_I = 0.4;
    imp.gamma_I = 0.6;
    const ModeSet m = modes_of(SystemConfig::impurity_only(imp));
    REQUIRE(m.size() == 1);
    CHECK(m.eigenvalues(0).real() == doctest::Approx(-0.4));
    CHECK(m.eigenvalues(0).imag() == doctest::Approx(-0.3));
  }

  TEST_CASE("Dicke pair at short distance") {
    const Polarization c = Polarization::circular_inplane();
    CouplingMatrices cm;
    const cplx g = greens_scalar(Vec3(1e-3, 0, 0), Vec3::Zero(), c, c);
    cm.g.resize(2, 2);
    cm.g << cplx(0, -0.5), g, g, cplx(0, -0.5);
    cm.n_ring = 1;
    const ModeSet m = diagonalize_effective(cm, 0.0);
    CHECK(m.decay_rate(0) < 1e-5);
    CHECK(m.decay_rate(1) == doctest::Approx(2.0).epsilon(1e-5));
  }

  TEST_CASE("residuals, biorthogonality and non-negative widths") {
    for (int n : {3, 5, 9, 12}) {
      for (double lod : {3.0, 10.0, 25.0}) {
        const SystemConfig cfg = ring_with(n, lod, 0.2, 0.8, 0.05);
        const ModeSet m = modes_of(cfg);
        const double mnorm = m.matrix.norm();
        const Eigen::MatrixXcd gram = m.right_vectors.transpose() * m.right_vectors;
        CHECK((gram - Eigen::MatrixXcd::Identity(m.size(), m.size())).cwiseAbs().maxCoeff() <
              1e-8);
        for (int k = 0; k < m.size(); ++k) {
          CHECK(m.residual(k) < 1e-10 * mnorm);
          CHECK(m.decay_rate(k) >= -1e-10);
          if (k > 0) CHECK(m.decay_rate(k) >= m.decay_rate(k - 1));
          // Left eigenvector is the transpose of the right one.
          const Eigen::RowVectorXcd left = m.right_vectors.col(k).transpose();
          CHECK((left * m.matrix - m.eigenvalues(k) * left).norm() < 1e-10 * mnorm);
        }
      }
    }
  }

  TEST_CASE("effective Hamiltonian is complex symmetric") {
    const Eigen::MatrixXcd h = effective_hamiltonian(coupling_matrices(ring_with(9, 20.0)), 0.3);
    CHECK(h == h.transpose());
    CHECK(h(9, 9).imag() == doctest::Approx(-0.65));
  }

  TEST_CASE("darkest coupled mode of the nonagon (frozen numpy oracle)") {
    for (auto [lod, re, im, weight] :
         {std::tuple{10.0, 1.0489169883805185, -0.002581035428344855, 0.8690165441676524},
          std::tuple{20.0, 5.263425035553874, -0.000338865772428138, 0.8900158951344236},
          std::tuple{40.0, 34.238565949196605, -0.00015468074237718734, 0.8952469071868943}}) {
      const ModeSet m = modes_of(ring_with(9, lod));
      const DarkModeReport d = darkest_coupled_mode(m);
      CHECK(d.eigenvalue.real() == doctest::Approx(re).epsilon(1e-9));
      CHECK(d.eigenvalue.imag() == doctest::Approx(im).epsilon(1e-7));
      CHECK(d.impurity_weight == doctest::Approx(weight).epsilon(1e-8));
    }
  }

  TEST_CASE("nonagon dark mode is subradiant and carries the largest impurity weight") {
    const ModeSet m = modes_of(ring_with(9, 20.0));
    const DarkModeReport d = darkest_coupled_mode(m);
    CHECK(d.decay_rate < 1e-3);
    for (int k = 0; k < m.size(); ++k) CHECK(m.impurity_weight(k) <= d.impurity_weight + 1e-12);
  }

  TEST_CASE("no dark resonance at lambda/d = 2") {
    const DarkModeReport d = darkest_coupled_mode(modes_of(ring_with(9, 2.0)));
    CHECK(d.decay_rate > 0.1);
  }

  TEST_CASE("dark width is minimal at N = 9 for lambda/d = 20") {
    int best = -1;
    double best_gamma = 1e300;
    for (int n = 4; n <= 16; ++n) {
      const double g = darkest_coupled_mode(modes_of(ring_with(n, 20.0))).decay_rate;
      if (g < best_gamma) {
        best_gamma = g;
        best = n;
      }
    }
    CHECK(best == 9);
    CHECK(best_gamma == doctest::Approx(0.000677732).epsilon(1e-5));
  }

  TEST_CASE("ring mode widths sum to N") {
    for (int n : {2, 5, 9, 16}) {
      const RingModes rm = ring_mode_spectrum(coupling_matrices(ring_with(n, 7.0)));
      double sum = 0.0;
      for (double g : rm.gamma_m) sum += g;
      CHECK(sum == doctest::Approx(n).epsilon(1e-12));
    }
  }

  TEST_CASE("symmetric ring mode becomes superradiant at small size") {
    const RingModes rm = ring_mode_spectrum(coupling_matrices(ring_with(9, 400.0)));
    CHECK(rm.gamma_m[0] == doctest::Approx(9.0).epsilon(1e-3));
  }

  TEST_CASE("m = 0 ring mode matches dense diagonalization of the ring block") {
    const CouplingMatrices cm = coupling_matrices(ring_with(9, 20.0));
    const RingModes rm = ring_mode_spectrum(cm);
    const Eigen::MatrixXcd block = cm.g.topLeftCorner(9, 9);
    Eigen::VectorXcd sym = Eigen::VectorXcd::Constant(9, 1.0 / 3.0);
    const cplx rayleigh = (sym.transpose() * block * sym)(0, 0);
    CHECK((block * sym - rayleigh * sym).norm() < 1e-12);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block);
    double nearest = 1e300;
    for (int k = 0; k < 9; ++k) nearest = std::min(nearest, std::abs(es.eigenvalues()(k) - rm.eigenvalue(0)));
    CHECK(nearest < 1e-10);
    CHECK(std::abs(rayleigh - rm.eigenvalue(0)) < 1e-12);
  }

  TEST_CASE("symmetric block roots solve the characteristic polynomial") {
    const SymmetricBlock b = symmetric_block(ring_with(7, 15.0, 0.3, 0.5));
    for (cplx lam : {b.lambda_plus, b.lambda_minus}) {
      const cplx p = (b.lambda_R - lam) * (b.lambda_I - lam) - b.off_diagonal * b.off_diagonal;
      CHECK(std::abs(p) < 1e-12);
    }
    CHECK(std::norm(b.alpha) + std::norm(b.beta) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("decoupled block returns its diagonal") {
    const SymmetricBlock b = symmetric_block_from(cplx(1.0, -0.5), cplx(-0.2, -0.1), 0.0);
    std::vector<cplx> got{b.lambda_plus, b.lambda_minus};
    CHECK(spectrum_distance(got, {cplx(1.0, -0.5), cplx(-0.2, -0.1)}) < 1e-15);
    CHECK(std::abs(b.dark_eigenvalue() - cplx(-0.2, -0.1)) < 1e-15);
  }

  TEST_CASE("symmetric-block dark root equals the full darkest coupled mode") {
    const SystemConfig cfg = ring_with(9, 20.0);
    const cplx block = symmetric_block(cfg).dark_eigenvalue();
    const cplx full = darkest_coupled_mode(modes_of(cfg)).eigenvalue;
    CHECK(std::abs(block.real() / full.real() - 1.0) < 1e-8);
    CHECK(std::abs(block.imag() / full.imag() - 1.0) < 1e-8);
  }

  TEST_CASE("dark eigenvector has opposite phase on ring and impurity") {
    const SymmetricBlock b = symmetric_block(ring_with(9, 40.0));
    const double phase = std::abs(std::arg(b.beta / b.alpha));
    CHECK(std::abs(phase - kPi) < 0.05);
  }

  TEST_CASE("sector decomposition on random configurations") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> nd(2, 14);
    std::uniform_real_distribution<double> lod(2.0, 40.0), dI(-2.0, 2.0), gI(0.1, 3.0),
        gT(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      const SystemConfig cfg = ring_with(nd(rng), lod(rng), dI(rng), gI(rng), gT(rng));
      const ModeSet m = modes_of(cfg);
      const SymmetricBlock b = symmetric_block(cfg);
      const RingModes rm = ring_mode_spectrum(coupling_matrices(cfg));
      std::vector<cplx> expect{b.lambda_plus, b.lambda_minus};
      for (int k = 1; k < rm.size(); ++k) expect.push_back(rm.eigenvalue(k));
      std::vector<cplx> got(m.eigenvalues.data(), m.eigenvalues.data() + m.size());
      CHECK(spectrum_distance(got, expect) < 1e-8);
    }
  }

  TEST_CASE("inverse cubic sum rule is minimal at N = 9") {
    int best = -1;
    double best_residual = 1e300;
    for (int n = 3; n <= 20; ++n) {
      const double r = inverse_cubic_sum_residual(n);
      if (r < best_residual) {
        best_residual = r;
        best = n;
      }
    }
    CHECK(best == 9);
  }

  TEST_CASE("dark condition for the nonagon is a small detuning") {
    const DarkCondition dc = dark_condition_delta(9, 20.0, 1.0);
    CHECK(std::abs(dc.predicted_delta_I) < 1.0);
    CHECK(std::isfinite(dc.predicted_delta_I_full));
    // At Γ_I = Γ0 the condition is J_R = (N-1)J, so δ_I* is minus the residual.
    CHECK(dc.predicted_delta_I == doctest::Approx(-dc.identical_residual).epsilon(1e-12));
    CHECK(dc.predicted_delta_I_full ==
          doctest::Approx(-dc.identical_residual_full).epsilon(1e-12));
  }
}
