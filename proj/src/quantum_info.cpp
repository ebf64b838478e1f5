#include "tpump/quantum_info.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "tpump/errors.hpp"

namespace tpump {

Partition Partition::first_trimer(std::size_t n_sites) {
  if (n_sites < 4) throw ConfigError("first-trimer partition needs more than 3 sites");
  return {{0, 1, 2}};
}

Partition Partition::trimer_heads(std::size_t n_sites) {
  if (n_sites % 3 != 0 || n_sites < 6) throw ConfigError("trimer-head partition needs 3L sites with L >= 2");
  Partition p;
  for (int j = 0; j < static_cast<int>(n_sites); j += 3) p.sites.push_back(j);
  return p;
}

void Partition::validate(std::size_t n_sites) const {
  if (sites.empty() || sites.size() >= n_sites) throw ConfigError("partition must be a non-empty proper subset");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 0 || static_cast<std::size_t>(sites[i]) >= n_sites) {
      throw ConfigError("partition site " + std::to_string(sites[i]) + " out of range");
    }
    if (i > 0 && sites[i] <= sites[i - 1]) throw ConfigError("partition sites must be sorted and unique");
  }
}

std::vector<int> Partition::complement(std::size_t n_sites) const {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(n_sites); ++j) {
    if (!std::ranges::binary_search(sites, j)) out.push_back(j);
  }
  return out;
}

std::size_t site_count(const StateVector& psi) {
  const auto d = static_cast<std::uint64_t>(psi.size());
  if (d == 0 || !std::has_single_bit(d)) throw DimensionError("state dimension is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(d));
}

namespace {

std::uint64_t gather(std::uint64_t s, const std::vector<int>& sites, std::size_t n) {
  std::uint64_t out = 0;
  for (int j : sites) out = (out << 1) | ((s >> (n - 1 - static_cast<std::size_t>(j))) & 1u);
  return out;
}

// Amplitudes regrouped as M(a, b).
Eigen::MatrixXcd regroup(const StateVector& psi, const Partition& part) {
  const std::size_t n = site_count(psi);
  part.validate(n);
  const std::vector<int> rest = part.complement(n);
  Eigen::MatrixXcd m(Eigen::Index{1} << part.sites.size(), Eigen::Index{1} << rest.size());
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(psi.size()); ++s) {
    m(static_cast<Eigen::Index>(gather(s, part.sites, n)), static_cast<Eigen::Index>(gather(s, rest, n))) =
        psi(static_cast<Eigen::Index>(s));
  }
  return m;
}

}  // namespace

DensityMatrix partial_trace(const StateVector& psi, const Partition& traced) {
  const Eigen::MatrixXcd m = regroup(psi, traced);
  return m.transpose() * m.conjugate();
}

double von_neumann_entropy(const DensityMatrix& rho, double max_bits) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix is not square");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) throw NumericalError("density matrix trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lam : es.eigenvalues()) {
    if (lam < -1e-10) throw NumericalError("density matrix has eigenvalue " + std::to_string(lam));
    if (lam > 1e-12) s -= lam * std::log2(lam);
  }
  return max_bits > 0.0 ? s / max_bits : s;
}

double entanglement_entropy(const StateVector& psi, const Partition& part, bool normalized) {
  const Eigen::MatrixXcd m = regroup(psi, part);
  const std::size_t na = part.sites.size();
  const std::size_t nb = site_count(psi) - na;
  const DensityMatrix rho = na <= nb ? DensityMatrix(m * m.adjoint()) : DensityMatrix(m.transpose() * m.conjugate());
  return von_neumann_entropy(rho, normalized ? static_cast<double>(std::min(na, nb)) : 0.0);
}

namespace {

using Vec = Eigen::VectorXcd;

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Vec basis2(double a0, double a1) {
  Vec v(2);
  v << a0, a1;
  return v;
}

Vec x_letter(int bit) {
  const double h = 1.0 / std::sqrt(2.0);
  return bit ? basis2(h, h) : basis2(h, -h);
}

Vec z_letter(int bit) { return bit ? basis2(0, 1) : basis2(1, 0); }

Vec chain(const std::vector<Vec>& factors) {
  Vec out = Vec::Ones(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Vec repeat(const Vec& trimer, std::size_t copies) { return chain(std::vector<Vec>(copies, trimer)); }

void apply_z(Vec& psi, std::size_t n, int site) {
  const std::uint64_t bit = std::uint64_t{1} << (n - 1 - static_cast<std::size_t>(site));
  for (Eigen::Index s = 0; s < psi.size(); ++s) {
    if (static_cast<std::uint64_t>(s) & bit) psi(s) = -psi(s);
  }
}

Vec cluster_ground(std::size_t n) {
  Vec psi = repeat(x_letter(0), n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t a = std::uint64_t{1} << (n - 1 - i);
    const std::uint64_t b = std::uint64_t{1} << (n - 1 - (i + 1) % n);
    for (Eigen::Index s = 0; s < psi.size(); ++s) {
      const auto u = static_cast<std::uint64_t>(s);
      if ((u & a) && (u & b)) psi(s) = -psi(s);
    }
  }
  return psi;
}

}  // namespace

StateVector analytic_state(ModelKind kind, Regime regime, std::size_t n_sites) {
  if (n_sites % 3 != 0 || n_sites < 3) throw ConfigError("the analytic band states need a multiple of 3 sites");
  if (n_sites > kDefaultSiteCap) throw ResourceError("too many sites for a dense analytic state");
  const std::size_t L = n_sites / 3;
  Vec psi;
  switch (kind) {
    case ModelKind::spin_flip:
      if (regime == Regime::away) {
        psi = repeat(chain({x_letter(0), x_letter(1), x_letter(0)}), L);
      } else {
        const Vec pair = chain({x_letter(0), x_letter(1)}) - chain({x_letter(1), x_letter(0)});
        psi = repeat(kron(pair, x_letter(0)), L);
      }
      break;
    case ModelKind::kink:
      if (regime == Regime::away) {
        psi = repeat(chain({z_letter(1), z_letter(0), z_letter(0)}), L) +
              repeat(chain({z_letter(0), z_letter(1), z_letter(1)}), L);
      } else {
        const Vec mid = z_letter(0) - z_letter(1);
        psi = repeat(chain({z_letter(1), mid, z_letter(0)}), L) + repeat(chain({z_letter(0), mid, z_letter(1)}), L);
      }
      break;
    case ModelKind::cluster: {
      psi = cluster_ground(n_sites);
      for (std::size_t k = 0; k < L; ++k) {
        const int second = static_cast<int>(3 * k + 1);
        if (regime == Regime::away) {
          apply_z(psi, n_sites, second);
        } else {
          Vec a = psi, b = psi;
          apply_z(a, n_sites, second);
          apply_z(b, n_sites, second - 1);
          psi = a - b;
        }
      }
      break;
    }
    case ModelKind::higher_r: throw ConfigError("no analytic band state for the higher_r family");
  }
  return psi / psi.norm();
}

StateVector translate(const StateVector& psi, int shift) {
  const std::size_t n = site_count(psi);
  const int ni = static_cast<int>(n);
  const int k = ((shift % ni) + ni) % ni;
  if (k == 0) return psi;
  // site j -> j + k moves bit (n-1-j) to (n-1-j-k): a right rotation by k
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  StateVector out(psi.size());
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(psi.size()); ++s) {
    const std::uint64_t t = ((s >> k) | (s << (n - static_cast<std::size_t>(k)))) & mask;
    out(static_cast<Eigen::Index>(t)) = psi(static_cast<Eigen::Index>(s));
  }
  return out;
}

double overlap(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw DimensionError("overlap of states with different dimensions");
  return std::norm(a.dot(b));
}

}  // namespace tpump
