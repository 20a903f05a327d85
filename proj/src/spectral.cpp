#include "ringsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ringsim {
namespace {

std::string dump_matrix(const Eigen::MatrixXcd& m) {
  std::ostringstream os;
  os.precision(17);
  os << "effective Hamiltonian (" << m.rows() << "x" << m.cols() << "):\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      os << (j ? " " : "") << m(i, j).real() << (m(i, j).imag() < 0 ? "" : "+") << m(i, j).imag()
         << "i";
    }
    os << '\n';
  }
  return os.str();
}

// Overall sign of a transpose-normalized vector is free; pin it so the entry of
// largest modulus has a positive real part.
void fix_sign(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx c = v(imax);
  if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0)) v = -v;
}

// Symmetric (Löwdin-type) orthonormalization under the bilinear product:
// returns V B^{-1/2} with B = VᵀV, so that the result satisfies WᵀW = I.
Eigen::MatrixXcd transpose_orthonormalize(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd b = v.transpose() * v;
  if (b.cols() == 1) {
    const double scale = v.col(0).squaredNorm();
    if (std::abs(b(0, 0)) < 1e-12 * scale) {
      throw SolverError("eigenvector is isotropic (v^T v = 0); matrix may be defective",
                        dump_matrix(m));
    }
    return v / std::sqrt(b(0, 0));
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b);
  if (es.info() != Eigen::Success) {
    throw SolverError("failed to orthonormalize a degenerate eigenspace", dump_matrix(m));
  }
  const Eigen::VectorXcd d = es.eigenvalues();
  const double scale = b.cwiseAbs().maxCoeff();
  Eigen::VectorXcd inv_sqrt(d.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (std::abs(d(k)) < 1e-12 * scale) {
      throw SolverError("degenerate eigenspace has a singular transpose Gram matrix",
                        dump_matrix(m));
    }
    inv_sqrt(k) = 1.0 / std::sqrt(d(k));
  }
  const Eigen::MatrixXcd u = es.eigenvectors();
  const Eigen::MatrixXcd b_inv_sqrt = u * inv_sqrt.asDiagonal() * u.inverse();
  return v * b_inv_sqrt;
}

}  // namespace

double ModeSet::impurity_weight(int k) const {
  const double norm2 = right_vectors.col(k).squaredNorm();
  return std::norm(right_vectors(impurity_index, k)) / norm2;
}

double ModeSet::residual(int k) const {
  const Eigen::VectorXcd v = right_vectors.col(k);
  return (matrix * v - eigenvalues(k) * v).norm() / v.norm();
}

Eigen::MatrixXcd effective_hamiltonian(const CouplingMatrices& couplings, double gamma_T) {
  if (!std::isfinite(gamma_T) || gamma_T < 0.0) {
    throw InvalidArgument("gamma_T must be finite and non-negative");
  }
  Eigen::MatrixXcd m = couplings.g;
  const int imp = couplings.n_ring;
  m(imp, imp) += cplx(-couplings.impurity_detuning, -0.5 * gamma_T);
  return m;
}

ModeSet diagonalize_effective(const CouplingMatrices& couplings, double gamma_T) {
  const Eigen::MatrixXcd m = effective_hamiltonian(couplings, gamma_T);
  if (!m.allFinite()) {
    throw InvalidArgument("effective Hamiltonian has non-finite entries");
  }
  const Eigen::Index dim = m.rows();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, true);
  if (es.info() != Eigen::Success) {
    throw SolverError("complex eigensolver did not converge", dump_matrix(m));
  }
  const Eigen::VectorXcd w = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();

  // Group numerically degenerate eigenvalues (e.g. ring modes m and N−m).
  const double tol = 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff());
  std::vector<int> cluster(dim, -1);
  int n_clusters = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = n_clusters;
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      if (cluster[j] < 0 && std::abs(w(i) - w(j)) < tol) cluster[j] = n_clusters;
    }
    ++n_clusters;
  }

  Eigen::MatrixXcd normalized(dim, dim);
  for (int c = 0; c < n_clusters; ++c) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (cluster[i] == c) members.push_back(i);
    }
    Eigen::MatrixXcd block(dim, static_cast<Eigen::Index>(members.size()));
    for (std::size_t k = 0; k < members.size(); ++k) block.col(k) = vecs.col(members[k]);
    const Eigen::MatrixXcd ortho = transpose_orthonormalize(block, m);
    for (std::size_t k = 0; k < members.size(); ++k) normalized.col(members[k]) = ortho.col(k);
  }

  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ga = -2.0 * w(a).imag();
    const double gb = -2.0 * w(b).imag();
    if (ga != gb) return ga < gb;
    return w(a).real() < w(b).real();
  });

  ModeSet out;
  out.matrix = m;
  out.impurity_index = couplings.n_ring;
  out.eigenvalues.resize(dim);
  out.right_vectors.resize(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    out.eigenvalues(k) = w(order[k]);
    out.right_vectors.col(k) = normalized.col(order[k]);
    fix_sign(out.right_vectors.col(k));
  }
  return out;
}

RingModes ring_mode_spectrum(const CouplingMatrices& couplings) {
  const int n = couplings.n_ring;
  if (n < 1) throw InvalidArgument("ring_mode_spectrum needs at least one ring emitter");
  const auto& g = couplings.g;
  const double scale = std::max(1.0, g.topLeftCorner(n, n).cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(g(i, j) - g(0, ((j - i) % n + n) % n)) > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "ring block is not circulant at (" << i << "," << j << ")";
        throw InvalidArgument(msg.str());
      }
    }
  }
  RingModes out;
  out.j_m.resize(n);
  out.gamma_m.resize(n);
  for (int m = 0; m < n; ++m) {
    cplx lam = 0.0;
    for (int j = 0; j < n; ++j) {
      lam += g(0, j) * std::polar(1.0, 2.0 * kPi * m * j / n);
    }
    out.j_m[m] = lam.real();
    out.gamma_m[m] = -2.0 * lam.imag();
  }
  return out;
}

SymmetricBlock symmetric_block_from(cplx lambda_R, cplx lambda_I, cplx off_diagonal) {
  SymmetricBlock b;
  b.lambda_R = lambda_R;
  b.lambda_I = lambda_I;
  b.off_diagonal = off_diagonal;
  const cplx mean = 0.5 * (lambda_R + lambda_I);
  const cplx disc = std::sqrt((lambda_R - lambda_I) * (lambda_R - lambda_I) +
                              4.0 * off_diagonal * off_diagonal);
  b.lambda_plus = mean + 0.5 * disc;
  b.lambda_minus = mean - 0.5 * disc;

  const cplx dark = b.dark_eigenvalue();
  // Two equivalent null vectors of [[λ_R − λ, c], [c, λ_I − λ]]; keep the
  // better conditioned one.
  Eigen::Vector2cd v1(off_diagonal, dark - lambda_R);
  Eigen::Vector2cd v2(dark - lambda_I, off_diagonal);
  Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
  if (v.norm() == 0.0) v = Eigen::Vector2cd(1.0, 0.0);
  v /= v.norm();
  if (std::abs(v(0)) > 0.0) v *= std::conj(v(0)) / std::abs(v(0));
  b.alpha = v(0);
  b.beta = v(1);
  return b;
}

SymmetricBlock symmetric_block(const SystemConfig& config) {
  if (!config.ring_polarization.is_circular_inplane() ||
      !config.impurity.polarization.is_circular_inplane()) {
    throw InvalidArgument("symmetric_block requires in-plane circular polarization");
  }
  const int n = config.n_ring();
  if (n < 1) throw InvalidArgument("symmetric_block needs a ring");
  const CouplingMatrices c = coupling_matrices(config);
  const RingModes rm = ring_mode_spectrum(c);
  const cplx coupling = ring_center_coupling(config.geometry.radius, config.units);
  const auto& imp = config.impurity;

  const cplx lambda_R = rm.eigenvalue(0);
  const cplx lambda_I(-imp.delta_I, -0.5 * (imp.gamma_I + imp.gamma_T));
  const cplx off = std::sqrt(n * imp.gamma_I / config.units.gamma0) * coupling;

  SymmetricBlock b = symmetric_block_from(lambda_R, lambda_I, off);
  b.j_R = rm.j_m[0];
  b.gamma_R = rm.gamma_m[0];
  b.j = coupling.real();
  b.gamma = -2.0 * coupling.imag();
  return b;
}

DarkModeReport darkest_coupled_mode(const ModeSet& modes, double weight_threshold) {
  if (!(weight_threshold > 0.0 && weight_threshold < 1.0)) {
    throw InvalidArgument("weight_threshold must lie in (0, 1)");
  }
  DarkModeReport best;
  for (int k = 0; k < modes.size(); ++k) {
    const double w = modes.impurity_weight(k);
    if (w <= weight_threshold) continue;
    const double gamma = modes.decay_rate(k);
    if (best.mode_index < 0 || gamma < best.decay_rate) {
      best.mode_index = k;
      best.decay_rate = gamma;
      best.frequency = modes.frequency(k);
      best.impurity_weight = w;
      best.eigenvalue = modes.eigenvalues(k);
    }
  }
  if (best.mode_index < 0) {
    throw SolverError("no eigenmode has impurity weight above the threshold");
  }
  return best;
}

DarkCondition dark_condition_delta(int n, double lambda_over_d, double gamma_I) {
  const RingGeometry geo = build_geometry(n, lambda_over_d);
  const Polarization p = Polarization::circular_inplane();
  const UnitConvention units;

  double j_R_nf = 0.0;
  double j_R_full = 0.0;
  for (int j = 1; j < n; ++j) {
    j_R_nf += near_field_coupling(geo.positions[0], geo.positions[j], p, p, units);
    j_R_full += greens_scalar(geo.positions[0], geo.positions[j], p, p, units).real();
  }
  const double j_nf = near_field_coupling(geo.positions[0], geo.impurity_position, p, p, units);
  const double j_full = ring_center_coupling(geo.radius, units).real();

  DarkCondition out;
  out.predicted_delta_I = j_nf * (n - gamma_I / units.gamma0) - j_R_nf;
  out.identical_residual = j_R_nf - (n - 1) * j_nf;
  out.predicted_delta_I_full = j_full * (n - gamma_I / units.gamma0) - j_R_full;
  out.identical_residual_full = j_R_full - (n - 1) * j_full;
  return out;
}

double inverse_cubic_sum_residual(int n, double radius) {
  if (n < 2) throw InvalidArgument("inverse_cubic_sum_residual needs n >= 2");
  double sum = 0.0;
  const Vec3 first(radius, 0.0, 0.0);
  for (int j = 1; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    const Vec3 pj(radius * std::cos(phi), radius * std::sin(phi), 0.0);
    const double r = (first - pj).norm();
    sum += 1.0 / (r * r * r);
  }
  return std::abs(sum - (n - 1) / (radius * radius * radius));
}

}  // namespace ringsim
