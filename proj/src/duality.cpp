#include "tpump/duality.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "tpump/errors.hpp"

namespace tpump {

namespace {

enum class Direction { forward, inverse };

PauliString zz(std::size_t n, int a, int b) {
  return PauliString::from_sites(n, {{a, Pauli::Z}, {b, Pauli::Z}});
}

// Bond set whose boundary is the Z-type support of `s`, choosing the smaller
// of the two complementary solutions (bond b joins sites b and b+1).
std::vector<bool> bond_cover(const PauliString& s) {
  const std::size_t n = s.size();
  std::vector<bool> bonds(n, false);
  bool prev = false;  // bond n-1 fixed to 0
  for (std::size_t j = 0; j + 1 < n; ++j) {
    bonds[j] = has_z(s[j]) != prev;
    prev = bonds[j];
  }
  std::size_t count = 0;
  for (bool b : bonds) count += b;
  if (2 * count > n) bonds.flip();
  return bonds;
}

PauliString dualize(const PauliString& s, Direction dir) {
  const std::size_t n = s.size();
  if (n < 2) throw DualityError("duality needs at least two sites");
  std::size_t z_count = 0;
  for (Pauli p : s.letters()) z_count += has_z(p);
  if (z_count % 2 != 0) {
    throw DualityError("term " + s.dense_str() +
                       " has an odd number of Z-type letters and is not in the bond algebra");
  }
  const int ni = static_cast<int>(n);
  // s = phase * i^{#Y} * (prod X^x)(prod Z^z)
  PauliString image = PauliString(n).with_phase(s.phase() * Phase(s.y_count()));
  for (int j = 0; j < ni; ++j) {
    if (!has_x(s[static_cast<std::size_t>(j)])) continue;
    image = mul(image, dir == Direction::forward ? zz(n, j, j + 1) : zz(n, j - 1, j));
  }
  const std::vector<bool> bonds = bond_cover(s);
  for (int b = 0; b < ni; ++b) {
    if (!bonds[static_cast<std::size_t>(b)]) continue;
    image = mul(image, PauliString::single(n, dir == Direction::forward ? b + 1 : b, Pauli::X));
  }
  return image;
}

template <class F>
OperatorSum map_terms(const OperatorSum& op, F&& f) {
  OperatorSum out(op.n_sites());
  for (const auto& t : op.terms()) out.add(t.coeff, f(t.string));
  return out;
}

// Single-site letter map with sign bookkeeping.
template <class F>
PauliString map_letters(const PauliString& s, F&& f) {
  std::vector<Pauli> letters(s.size());
  Phase ph = s.phase();
  for (std::size_t j = 0; j < s.size(); ++j) {
    auto [p, negate] = f(s[j]);
    letters[j] = p;
    if (negate) ph *= Phase::minus_one();
  }
  return PauliString(std::move(letters), ph);
}

}  // namespace

PauliString kw_dualize(const PauliString& s) { return dualize(s, Direction::forward); }
PauliString kw_dualize_inverse(const PauliString& s) { return dualize(s, Direction::inverse); }
OperatorSum kw_dualize(const OperatorSum& op) {
  return map_terms(op, [](const PauliString& s) { return kw_dualize(s); });
}
OperatorSum kw_dualize_inverse(const OperatorSum& op) {
  return map_terms(op, [](const PauliString& s) { return kw_dualize_inverse(s); });
}

PauliString rotate_x(const PauliString& s) {
  return map_letters(s, [](Pauli p) -> std::pair<Pauli, bool> {
    switch (p) {
      case Pauli::Z: return {Pauli::Y, false};
      case Pauli::Y: return {Pauli::Z, true};
      default: return {p, false};
    }
  });
}

PauliString rotate_x_inverse(const PauliString& s) {
  return map_letters(s, [](Pauli p) -> std::pair<Pauli, bool> {
    switch (p) {
      case Pauli::Y: return {Pauli::Z, false};
      case Pauli::Z: return {Pauli::Y, true};
      default: return {p, false};
    }
  });
}

OperatorSum rotate_x(const OperatorSum& op) {
  return map_terms(op, [](const PauliString& s) { return rotate_x(s); });
}
OperatorSum rotate_x_inverse(const OperatorSum& op) {
  return map_terms(op, [](const PauliString& s) { return rotate_x_inverse(s); });
}

PauliString z_parity(const PauliString& s) {
  return map_letters(s, [](Pauli p) -> std::pair<Pauli, bool> { return {p, has_x(p)}; });
}
OperatorSum z_parity(const OperatorSum& op) {
  return map_terms(op, [](const PauliString& s) { return z_parity(s); });
}

Transform Transform::inverted() const {
  return {kind, kind == Kind::z_parity ? false : !inverse};
}

PauliString Transform::apply(const PauliString& s) const {
  switch (kind) {
    case Kind::kw_duality: return inverse ? kw_dualize_inverse(s) : kw_dualize(s);
    case Kind::x_rotation: return inverse ? rotate_x_inverse(s) : rotate_x(s);
    case Kind::z_parity: return z_parity(s);
  }
  return s;
}

OperatorSum Transform::apply(const OperatorSum& op) const {
  return map_terms(op, [this](const PauliString& s) { return apply(s); });
}

std::string Transform::name() const {
  std::string base;
  switch (kind) {
    case Kind::kw_duality: base = "kw_duality"; break;
    case Kind::x_rotation: base = "x_rotation"; break;
    case Kind::z_parity: base = "z_parity"; break;
  }
  return inverse ? base + "^-1" : base;
}

TransformChain& TransformChain::then(Transform t) {
  steps_.push_back(t);
  return *this;
}

TransformChain& TransformChain::then(const TransformChain& c) {
  steps_.insert(steps_.end(), c.steps_.begin(), c.steps_.end());
  return *this;
}

TransformChain TransformChain::inverse() const {
  std::vector<Transform> inv;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) inv.push_back(it->inverted());
  return TransformChain(std::move(inv));
}

PauliString TransformChain::apply(const PauliString& s) const {
  PauliString out = s;
  for (const auto& t : steps_) out = t.apply(out);
  return out;
}

OperatorSum TransformChain::apply(const OperatorSum& op) const {
  OperatorSum out = op;
  for (const auto& t : steps_) out = t.apply(out);
  return out;
}

std::string TransformChain::str() const {
  if (steps_.empty()) return "identity";
  std::string s;
  for (const auto& t : steps_) {
    if (!s.empty()) s += " -> ";
    s += t.name();
  }
  return s;
}

namespace {

// Folds the (real) string phase into the sign so equal operators compare equal.
std::optional<DrivenTerm> normalized(DrivenTerm t) {
  const Phase ph = t.op.phase();
  if (!ph.is_real()) return std::nullopt;
  if (ph == Phase::minus_one()) t.sign = -t.sign;
  t.op = t.op.with_phase(Phase::one());
  return t;
}

std::string key_of(const std::vector<DrivenTerm>& family) {
  std::string key;
  for (const auto& t : family) {
    key += std::to_string(t.site);
    key += t.sign < 0 ? '-' : '+';
    key += t.op.dense_str();
    key += ';';
  }
  return key;
}

bool is_single_flip(const DrivenTerm& t) {
  return t.sign < 0 && t.op.weight() == 1 && t.op[static_cast<std::size_t>(t.op.support().front())] == Pauli::X;
}

}  // namespace

Reduction reduce_to_single(const std::vector<DrivenTerm>& family, std::size_t max_depth) {
  if (family.empty()) throw ReductionError("empty operator family");
  std::vector<DrivenTerm> start;
  std::size_t max_weight = 0;
  for (const auto& t : family) {
    auto nt = normalized(t);
    if (!nt) throw ReductionError("driven term " + t.op.dense_str() + " is not Hermitian");
    max_weight = std::max(max_weight, nt->op.weight());
    start.push_back(*nt);
  }
  if (max_depth == 0) max_depth = 2 * max_weight + 4;
  const std::size_t weight_cap = max_weight + 2;

  using T = Transform;
  using K = Transform::Kind;
  const std::vector<Transform> moves = {T{K::kw_duality, false}, T{K::kw_duality, true},
                                        T{K::x_rotation, false}, T{K::x_rotation, true},
                                        T{K::z_parity, false}};

  struct Node {
    std::vector<DrivenTerm> family;
    TransformChain chain;
  };
  std::deque<Node> queue;
  std::set<std::string> seen;
  queue.push_back({start, {}});
  seen.insert(key_of(start));

  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (std::ranges::all_of(node.family, is_single_flip)) return {node.family, node.chain};
    if (node.chain.steps().size() >= max_depth) continue;

    for (const auto& mv : moves) {
      if (!node.chain.empty() && node.chain.steps().back().inverted() == mv) continue;
      std::vector<DrivenTerm> next;
      bool ok = true;
      for (const auto& t : node.family) {
        try {
          auto nt = normalized({t.site, t.sign, mv.apply(t.op)});
          if (!nt || nt->op.weight() > weight_cap) {
            ok = false;
            break;
          }
          next.push_back(*nt);
        } catch (const DualityError&) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (!seen.insert(key_of(next)).second) continue;
      TransformChain chain = node.chain;
      chain.then(mv);
      queue.push_back({std::move(next), std::move(chain)});
    }
  }
  throw ReductionError("no chain of dualities and rotations of depth <= " + std::to_string(max_depth) +
                       " reduces the family to single spin flips");
}

}  // namespace tpump
