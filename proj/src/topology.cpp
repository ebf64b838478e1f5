#include "tpump/topology.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "tpump/errors.hpp"

namespace tpump {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Eigen::MatrixXcd hh_bloch_hamiltonian(double kx, double ky, double Jx, double Jy, Rational b) {
  const int q = b.q;
  if (q <= 0) throw ConfigError("flux denominator must be positive");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(q, q);
  for (int m = 0; m < q; ++m) h(m, m) = -2.0 * Jy * std::cos(ky + kTwoPi * b.value() * m);
  if (q == 1) {
    h(0, 0) += -2.0 * Jx * std::cos(kx);
    return h;
  }
  for (int m = 0; m + 1 < q; ++m) {
    h(m, m + 1) += -Jx;
    h(m + 1, m) += -Jx;
  }
  const cplx edge = -Jx * std::polar(1.0, kx);
  h(q - 1, 0) += edge;
  h(0, q - 1) += std::conj(edge);
  return h;
}

Eigen::MatrixXcd aa_bloch_hamiltonian(double k, double t, const AAParams& p) {
  return hh_bloch_hamiltonian(k, p.omega * t + p.phi0, p.Jx, p.Jy, p.b);
}

Eigen::MatrixXd aa_real_space(std::size_t n_sites, double t, const AAParams& p) {
  const int n = static_cast<int>(n_sites);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = -2.0 * p.Jy * std::cos(kTwoPi * p.b.value() * j + p.omega * t + p.phi0);
    const int k = (j + 1) % n;
    h(j, k) += -p.Jx;
    h(k, j) += -p.Jx;
  }
  return h;
}

AAParams aa_from_drive(const DriveParams& d, double J) {
  return {.Jx = -J, .Jy = d.g1, .omega = d.omega, .phi0 = d.phi0, .b = d.b};
}

BlochFamily BlochFamily::hofstadter(double Jx, double Jy, Rational b) {
  return {static_cast<std::size_t>(b.q), [=](double kx, double ky) { return hh_bloch_hamiltonian(kx, ky, Jx, Jy, b); }};
}

BlochFamily BlochFamily::aubry_andre(const AAParams& p) {
  return {static_cast<std::size_t>(p.b.q),
          [=](double k, double phase) { return hh_bloch_hamiltonian(k, phase + p.phi0, p.Jx, p.Jy, p.b); }};
}

namespace {

struct GridEigen {
  int n = 0;
  std::size_t dim = 0;
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixXcd> vectors;
};

GridEigen diagonalize_grid(const BlochFamily& fam, const ChernOptions& opt) {
  const int n = opt.grid;
  if (n < 3) throw ConfigError("Chern grid must have at least 3 points per side");
  GridEigen g;
  g.n = n;
  g.dim = fam.dim;
  g.values.resize(static_cast<std::size_t>(n) * n);
  g.vectors.resize(static_cast<std::size_t>(n) * n);
  const bool par = opt.exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int idx = 0; idx < n * n; ++idx) {
    const int a = idx / n, b = idx % n;
    const Eigen::MatrixXcd h = fam.h(kTwoPi * a / n, kTwoPi * b / n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    g.values[static_cast<std::size_t>(idx)] = es.eigenvalues();
    g.vectors[static_cast<std::size_t>(idx)] = es.eigenvectors();
  }
  if (opt.gauge_seed) {
    std::mt19937_64 gen(*opt.gauge_seed);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (auto& v : g.vectors) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) v.col(c) *= std::polar(1.0, ph(gen));
    }
  }
  return g;
}

cplx link(const GridEigen& g, int band, int a0, int b0, int a1, int b1) {
  const int n = g.n;
  const auto& u0 = g.vectors[static_cast<std::size_t>(((a0 % n) * n) + (b0 % n))].col(band);
  const auto& u1 = g.vectors[static_cast<std::size_t>(((a1 % n) * n) + (b1 % n))].col(band);
  const cplx z = u0.dot(u1);
  const double m = std::abs(z);
  if (m < 1e-14) throw DegeneracyError("vanishing link variable between grid points");
  return z / m;
}

ChernResult chern_from_grid(const GridEigen& g, int band) {
  const int n = g.n;
  const int q = static_cast<int>(g.dim);
  if (band < 0 || band >= q) throw ConfigError("band index " + std::to_string(band) + " out of range");
  ChernResult res;
  res.band = band;
  res.grid = n;
  res.min_gap = std::numeric_limits<double>::infinity();
  for (int idx = 0; idx < n * n; ++idx) {
    const auto& e = g.values[static_cast<std::size_t>(idx)];
    double gap = std::numeric_limits<double>::infinity();
    if (band > 0) gap = std::min(gap, e(band) - e(band - 1));
    if (band + 1 < q) gap = std::min(gap, e(band + 1) - e(band));
    if (gap < 1e-8) {
      throw DegeneracyError("band " + std::to_string(band) + " is degenerate at grid point (" +
                            std::to_string(idx / n) + ", " + std::to_string(idx % n) + ")");
    }
    res.min_gap = std::min(res.min_gap, gap);
  }
  res.curvature.assign(static_cast<std::size_t>(n) * n, 0.0);
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const cplx w = link(g, band, a, b, a + 1, b) * link(g, band, a + 1, b, a + 1, b + 1) *
                     std::conj(link(g, band, a, b + 1, a + 1, b + 1)) * std::conj(link(g, band, a, b, a, b + 1));
      const double f = std::arg(w);
      res.curvature[static_cast<std::size_t>(a * n + b)] = f;
      total += f;
    }
  }
  // first argument (k) then second (drive phase): displacement in cells per cycle
  res.raw = total / kTwoPi;
  res.chern = static_cast<int>(std::lround(res.raw));
  res.residual = std::abs(res.raw - res.chern);
  return res;
}

}  // namespace

ChernResult chern_number(const BlochFamily& family, int band, const ChernOptions& opt) {
  return chern_from_grid(diagonalize_grid(family, opt), band);
}

std::vector<ChernResult> chern_numbers(const BlochFamily& family, const ChernOptions& opt) {
  const GridEigen g = diagonalize_grid(family, opt);
  std::vector<ChernResult> out;
  for (int band = 0; band < static_cast<int>(family.dim); ++band) out.push_back(chern_from_grid(g, band));
  return out;
}

Eigen::MatrixXcd symmetry_sector_basis(const PauliString& parity, int eigenvalue) {
  if (eigenvalue != 1 && eigenvalue != -1) throw ConfigError("sector eigenvalue must be +1 or -1");
  const std::uint64_t xm = parity.x_mask();
  const std::uint64_t zm = parity.z_mask();
  if (xm == 0) throw ConfigError("symmetry " + parity.dense_str() + " has no X part");
  const cplx c = (parity.phase() * Phase(parity.y_count())).value();
  const std::size_t n = parity.size();
  if (n > kDefaultSiteCap) throw ResourceError("sector basis too large");
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim / 2));
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Index col = 0;
  for (std::uint64_t s = 0; s < dim; ++s) {
    const std::uint64_t t = s ^ xm;
    if (t < s) continue;
    // P|s> = c_s |s^x>, c_s = c (-1)^{|s & z|}
    const cplx cs = c * ((std::popcount(s & zm) & 1) ? -1.0 : 1.0);
    v(static_cast<Eigen::Index>(s), col) = h;
    v(static_cast<Eigen::Index>(t), col) = h * cs / static_cast<double>(eigenvalue);
    ++col;
  }
  return v;
}

namespace {

SymmetrySector excitation_sector(ModelKind kind, std::size_t n, int r, int n_exc) {
  const int flip_ev = ((static_cast<int>(n) - n_exc) % 2 == 0) ? 1 : -1;
  if (kind == ModelKind::spin_flip) return {PauliString(std::vector<Pauli>(n, Pauli::X)), flip_ev};
  if (flip_ev != 1) {
    throw ConfigError("excitation count " + std::to_string(n_exc) + " lies in the twisted sector of the " +
                      to_string(kind) + " model");
  }
  return duality_sector(kind, n, r);
}

}  // namespace

SectorEigen sector_eigensystem(const TimeDependentHamiltonian& H, ModelKind kind, int r, int n_excitations,
                               double t) {
  const std::size_t n = H.n_sites();
  const SymmetrySector sec = excitation_sector(kind, n, r, n_excitations);
  const Eigen::MatrixXcd V = symmetry_sector_basis(sec.parity, sec.eigenvalue);
  const Eigen::MatrixXcd Hs = V.adjoint() * H.matrix(t) * V;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hs);
  const Eigen::MatrixXcd Ns = V.adjoint() * to_matrix(excitation_number_op(kind, n, r)) * V;
  const Eigen::MatrixXcd& W = es.eigenvectors();
  std::vector<Eigen::Index> keep;
  std::vector<double> counts;
  for (Eigen::Index c = 0; c < W.cols(); ++c) {
    const double nbar = W.col(c).dot(Ns * W.col(c)).real();
    if (std::lround(nbar) == n_excitations) {
      keep.push_back(c);
      counts.push_back(nbar);
    }
  }
  SectorEigen out;
  out.energies.resize(static_cast<Eigen::Index>(keep.size()));
  out.excitation.resize(static_cast<Eigen::Index>(keep.size()));
  out.states.resize(V.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out.energies(ii) = es.eigenvalues()(keep[i]);
    out.excitation(ii) = counts[i];
    out.states.col(ii) = V * W.col(keep[i]);
  }
  return out;
}

SectorSpectrum instantaneous_band_spectrum(const TimeDependentHamiltonian& H, ModelKind kind, int r,
                                           int n_excitations, const std::vector<double>& times) {
  SectorSpectrum out;
  out.times = times;
  out.min_gap = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd prev;
  for (double t : times) {
    const SectorEigen se = sector_eigensystem(H, kind, r, n_excitations, t);
    if (se.energies.size() < 2) throw NumericalError("sector holds fewer than two states");
    std::vector<double> e(se.energies.data(), se.energies.data() + se.energies.size());
    out.energies.push_back(e);
    const double gap = e[1] - e[0];
    out.gap.push_back(gap);
    out.min_gap = std::min(out.min_gap, gap);
    Eigen::Index pick = 0;
    if (prev.size() > 0) {
      (se.states.adjoint() * prev).cwiseAbs().maxCoeff(&pick);
    }
    prev = se.states.col(pick);
    out.tracked.push_back(e[static_cast<std::size_t>(pick)]);
  }
  for (std::size_t i = 1; i + 1 < out.gap.size(); ++i) {
    if (out.gap[i] < out.gap[i - 1] && out.gap[i] <= out.gap[i + 1]) out.gap_minima.push_back(times[i]);
  }
  return out;
}

}  // namespace tpump
