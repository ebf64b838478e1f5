#include "tpump/models.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "tpump/errors.hpp"

namespace tpump {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::spin_flip: return "spin_flip";
    case ModelKind::kink: return "kink";
    case ModelKind::cluster: return "cluster";
    case ModelKind::higher_r: return "higher_r";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "spin_flip" || s == "flip") return ModelKind::spin_flip;
  if (s == "kink") return ModelKind::kink;
  if (s == "cluster") return ModelKind::cluster;
  if (s == "higher_r") return ModelKind::higher_r;
  throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

std::string to_string(DisorderTarget t) {
  switch (t) {
    case DisorderTarget::none: return "none";
    case DisorderTarget::G: return "G";
    case DisorderTarget::J: return "J";
  }
  return "?";
}

DisorderTarget parse_disorder_target(std::string_view s) {
  if (s == "none") return DisorderTarget::none;
  if (s == "G" || s == "g") return DisorderTarget::G;
  if (s == "J" || s == "j") return DisorderTarget::J;
  throw ConfigError("unknown disorder target '" + std::string(s) + "'");
}

Rational Rational::parse(std::string_view s) {
  const auto slash = s.find('/');
  try {
    Rational r;
    if (slash == std::string_view::npos) {
      r.p = std::stoi(std::string(s));
      r.q = 1;
    } else {
      r.p = std::stoi(std::string(s.substr(0, slash)));
      r.q = std::stoi(std::string(s.substr(slash + 1)));
    }
    if (r.q <= 0) throw ConfigError("denominator must be positive");
    return r;
  } catch (const std::logic_error&) {
    throw ConfigError("malformed rational '" + std::string(s) + "'");
  }
}

double DriveParams::period() const { return 2.0 * std::numbers::pi / omega; }

void DriveParams::validate() const {
  if (n_sites < 3) throw ConfigError("need at least 3 sites");
  if (b.q <= 0 || n_sites % static_cast<std::size_t>(b.q) != 0) {
    throw ConfigError("site count " + std::to_string(n_sites) + " is not commensurate with b = " + b.str());
  }
  if (!(g1 >= 0.0)) throw ConfigError("g1 must be non-negative");
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
}

double drive(int site, double t, const DriveParams& p) {
  const double T = p.period();
  const double tau = t - T * std::floor(t / T);
  // exact integer reduction of the sublattice phase
  const long m = ((static_cast<long>(site) * p.b.p) % p.b.q + p.b.q) % p.b.q;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / p.b.q + p.omega * tau + p.phi0;
  return p.g0 + p.g1 * std::cos(angle);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<double> sample_offsets(std::size_t n, double delta, std::uint64_t seed) {
  if (delta < 0.0) throw ConfigError("disorder strength must be non-negative");
  std::vector<double> out(n, 0.0);
  if (delta == 0.0) return out;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-delta, delta);
  for (auto& v : out) v = dist(gen);
  return out;
}

ModelSpec apply_disorder(ModelSpec spec, DisorderTarget target, double delta, std::uint64_t seed,
                         std::size_t n_sites) {
  spec.disorder.target = target;
  spec.disorder.delta = delta;
  spec.disorder.seed = seed;
  spec.disorder.offsets = target == DisorderTarget::none ? std::vector<double>(n_sites, 0.0)
                                                         : sample_offsets(n_sites, delta, seed);
  return spec;
}

TransformChain chain_from_flip(ModelKind kind, int r) {
  using K = Transform::Kind;
  const Transform A{K::kw_duality, false}, B{K::kw_duality, true};
  const Transform rot{K::x_rotation, false}, zpar{K::z_parity, false};
  TransformChain c;
  switch (kind) {
    case ModelKind::spin_flip: return c;
    case ModelKind::kink: return c.then(A);
    case ModelKind::cluster: return c.then(A).then(rot).then(B).then(zpar);
    case ModelKind::higher_r:
      if (r < 0) throw ConfigError("r must be non-negative");
      c.then(A).then(rot).then(B).then(zpar);
      for (int i = 0; i < r; ++i) c.then(rot).then(A);
      return c;
  }
  return c;
}

TimeDependentHamiltonian::TimeDependentHamiltonian(DriveParams p, OperatorSum static_part,
                                                   std::vector<DrivenTerm> driven,
                                                   std::vector<double> g_offsets)
    : params_(p), static_(static_part.canonical()), driven_(std::move(driven)), offsets_(std::move(g_offsets)) {
  const std::size_t n = p.n_sites;
  if (static_.n_sites() != n) throw DimensionError("static part defined on a different site count");
  if (offsets_.empty()) offsets_.assign(n, 0.0);
  if (offsets_.size() != n) throw DimensionError("one G offset per site expected");
  std::vector<PauliString> strings;
  for (const auto& t : static_.terms()) {
    strings.push_back(t.string);
    static_coeffs_.push_back(t.coeff);
  }
  for (const auto& d : driven_) {
    if (d.op.size() != n) throw DimensionError("driven term defined on a different site count");
    if (d.site < 0 || static_cast<std::size_t>(d.site) >= n) throw DimensionError("driven site out of range");
    if (!d.op.phase().is_real()) throw ContractError("driven operator " + d.op.dense_str() + " is not Hermitian");
    strings.push_back(d.op);
  }
  compiled_ = CompiledSum(n, strings);
}

double TimeDependentHamiltonian::G(int site, double t) const {
  return drive(site, t, params_) + offsets_[static_cast<std::size_t>(site)];
}

std::vector<cplx> TimeDependentHamiltonian::coefficients(double t) const {
  std::vector<cplx> c(static_coeffs_);
  c.reserve(static_coeffs_.size() + driven_.size());
  for (const auto& d : driven_) c.emplace_back(d.sign * G(d.site, t));
  return c;
}

OperatorSum TimeDependentHamiltonian::at(double t) const {
  OperatorSum h = static_;
  for (const auto& d : driven_) h.add(d.sign * G(d.site, t), d.op);
  return h.canonical();
}

Eigen::MatrixXcd TimeDependentHamiltonian::matrix(double t, std::size_t cap) const {
  return to_matrix(at(t), cap);
}

void TimeDependentHamiltonian::apply(double t, std::span<const cplx> in, std::span<cplx> out,
                                     Exec exec) const {
  compiled_.apply(coefficients(t), in, out, exec);
}

TimeDependentHamiltonian TimeDependentHamiltonian::transformed(const TransformChain& chain) const {
  std::vector<DrivenTerm> driven;
  for (const auto& d : driven_) {
    PauliString img = chain.apply(d.op);
    double sign = d.sign;
    if (!img.phase().is_real()) throw DualityError("image of a driven term is not Hermitian");
    if (img.phase() == Phase::minus_one()) sign = -sign;
    driven.push_back({d.site, sign, img.with_phase(Phase::one())});
  }
  return TimeDependentHamiltonian(params_, chain.apply(static_), std::move(driven), offsets_);
}

namespace {

void check_spec(const ModelSpec& spec, const DriveParams& p) {
  p.validate();
  if (spec.kind == ModelKind::higher_r) {
    if (spec.r < 0) throw ConfigError("r must be non-negative");
    if (static_cast<std::size_t>(spec.r) + 3 > p.n_sites) {
      throw ConfigError("r = " + std::to_string(spec.r) + " is too large for " + std::to_string(p.n_sites) +
                        " sites");
    }
  }
  const auto& d = spec.disorder;
  if (d.target != DisorderTarget::none && d.offsets.size() != p.n_sites) {
    throw ConfigError("disorder realization has the wrong length");
  }
}

}  // namespace

TimeDependentHamiltonian build_model(const ModelSpec& spec, const DriveParams& p) {
  check_spec(spec, p);
  const std::size_t n = p.n_sites;
  const int ni = static_cast<int>(n);
  const auto& dis = spec.disorder;
  std::vector<double> g_off(n, 0.0);
  if (dis.target == DisorderTarget::G) g_off = dis.offsets;

  OperatorSum stat(n);
  std::vector<DrivenTerm> driven;
  for (int j = 0; j < ni; ++j) {
    double Jj = spec.J;
    if (dis.target == DisorderTarget::J) Jj += dis.offsets[static_cast<std::size_t>(j)];
    stat.add(Jj, PauliString::from_sites(n, {{j, Pauli::Z}, {j + 1, Pauli::Z}}));
    if (spec.K != 0.0) stat.add(spec.K, PauliString::from_sites(n, {{j, Pauli::X}, {j + 1, Pauli::X}}));
    driven.push_back({j, -1.0, PauliString::single(n, j, Pauli::X)});
  }
  TimeDependentHamiltonian flip(p, stat, std::move(driven), g_off);
  if (spec.kind == ModelKind::spin_flip) return flip;
  TimeDependentHamiltonian out = flip.transformed(chain_from_flip(spec.kind, spec.r));
  if (spec.kind == ModelKind::higher_r) {
    // strings wrap around the ring once they outgrow it
    for (const auto& d : out.driven_terms()) {
      if (d.op.weight() != static_cast<std::size_t>(spec.r) + 3) {
        throw ConfigError("r = " + std::to_string(spec.r) + " is too large for " + std::to_string(n) + " sites");
      }
    }
  }
  return out;
}

TimeDependentHamiltonian effective_rwa_model(const DriveParams& p, double J) {
  p.validate();
  const std::size_t n = p.n_sites;
  const int ni = static_cast<int>(n);
  OperatorSum stat(n);
  std::vector<DrivenTerm> driven;
  for (int j = 0; j < ni; ++j) {
    stat.add(0.5 * J, PauliString::from_sites(n, {{j, Pauli::Z}, {j + 1, Pauli::Z}}));
    stat.add(0.5 * J, PauliString::from_sites(n, {{j, Pauli::Y}, {j + 1, Pauli::Y}}));
    driven.push_back({j, -1.0, PauliString::single(n, j, Pauli::X)});
  }
  return TimeDependentHamiltonian(p, stat, std::move(driven), {});
}

PauliString drive_observable(ModelKind kind, std::size_t n_sites, int site, int r) {
  return chain_from_flip(kind, r).apply(PauliString::single(n_sites, site, Pauli::X));
}

PauliString bond_observable(ModelKind kind, std::size_t n_sites, int site, int r) {
  return chain_from_flip(kind, r).apply(PauliString::from_sites(n_sites, {{site, Pauli::Z}, {site + 1, Pauli::Z}}));
}

OperatorSum excitation_number_op(ModelKind kind, std::size_t n_sites, int r) {
  OperatorSum op(n_sites);
  for (int j = 0; j < static_cast<int>(n_sites); ++j) {
    op.add(0.5, PauliString(n_sites));
    op.add(0.5, drive_observable(kind, n_sites, j, r));
  }
  return op.canonical();
}

OperatorSum position_op(ModelKind kind, std::size_t n_sites, int r) {
  OperatorSum op(n_sites);
  for (int j = 0; j < static_cast<int>(n_sites); ++j) {
    const double pos = j + 1;
    op.add(0.5 * pos, PauliString(n_sites));
    op.add(0.5 * pos, drive_observable(kind, n_sites, j, r));
  }
  return op.canonical();
}

SymmetrySector duality_sector(ModelKind kind, std::size_t n_sites, int r) {
  PauliString all_x(std::vector<Pauli>(n_sites, Pauli::X));
  switch (kind) {
    case ModelKind::spin_flip:
    case ModelKind::kink: return {all_x, +1};
    case ModelKind::cluster: return {all_x, n_sites % 2 == 0 ? +1 : -1};
    case ModelKind::higher_r: {
      // r even behaves like the cluster model; r odd like the kink model,
      // whose flip-equivalent sector is twisted on odd rings
      if (r % 2 == 0) return {all_x, n_sites % 2 == 0 ? +1 : -1};
      if (n_sites % 2 == 1) {
        throw DualityError("order r = " + std::to_string(r) + " has no untwisted flip-equivalent sector on " +
                           std::to_string(n_sites) + " sites");
      }
      return {all_x, +1};
    }
  }
  return {all_x, +1};
}

}  // namespace tpump
