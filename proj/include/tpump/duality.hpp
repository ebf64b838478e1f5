#pragma once

// Kramers-Wannier duality, global spin rotations and the search that chains
// them to turn a correlated driving operator into single-site spin flips.
//
// Duality on the periodic ring (forward direction):
//     X_j        -> Z_j Z_{j+1}
//     Z_j Z_{j+1} -> X_{j+1}
// and its inverse:
//     X_j        -> Z_{j-1} Z_j
//     Z_j Z_{j+1} -> X_j
// A term is dualized by factoring it into these generators; only terms with
// an even number of Z-type letters (Z or Y) lie in the bond algebra.

#include <string>
#include <vector>

#include "tpump/pauli.hpp"

namespace tpump {

/// X_j -> Z_j Z_j+1, Z_j Z_j+1 -> X_j+1. On the ring s and s * prod_j X_j
/// share an image, so products and inverses hold up to that factor (exactly
/// in the parity-even sector).
PauliString kw_dualize(const PauliString& s);
PauliString kw_dualize_inverse(const PauliString& s);
OperatorSum kw_dualize(const OperatorSum& op);
OperatorSum kw_dualize_inverse(const OperatorSum& op);

/// s -> U s U^dagger with U = exp(i pi/4 sum_j X_j): X -> X, Z -> Y, Y -> -Z.
PauliString rotate_x(const PauliString& s);
/// Inverse rotation: X -> X, Y -> Z, Z -> -Y.
PauliString rotate_x_inverse(const PauliString& s);
OperatorSum rotate_x(const OperatorSum& op);
OperatorSum rotate_x_inverse(const OperatorSum& op);

/// Conjugation by prod_j Z_j: X -> -X, Y -> -Y, Z -> Z. Self-inverse.
PauliString z_parity(const PauliString& s);
OperatorSum z_parity(const OperatorSum& op);

struct Transform {
  enum class Kind { kw_duality, x_rotation, z_parity };
  Kind kind;
  bool inverse = false;

  Transform inverted() const;
  PauliString apply(const PauliString& s) const;
  OperatorSum apply(const OperatorSum& op) const;
  std::string name() const;
  bool operator==(const Transform&) const = default;
};

/// Ordered list of transforms, applied front to back.
class TransformChain {
 public:
  TransformChain() = default;
  explicit TransformChain(std::vector<Transform> steps) : steps_(std::move(steps)) {}

  const std::vector<Transform>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  TransformChain& then(Transform t);
  TransformChain& then(const TransformChain& c);

  /// Reversed order, every step inverted.
  TransformChain inverse() const;
  PauliString apply(const PauliString& s) const;
  OperatorSum apply(const OperatorSum& op) const;
  std::string str() const;
  bool operator==(const TransformChain&) const = default;

 private:
  std::vector<Transform> steps_;
};

/// One driven term sign * G_site(t) * op. The driving law G is supplied
/// separately; only the operator and its sign are rewritten by transforms.
struct DrivenTerm {
  int site;
  double sign;
  PauliString op;
};

struct Reduction {
  std::vector<DrivenTerm> single;  // every op is a single X with sign -1
  TransformChain chain;            // maps the input family onto `single`
};

/// Breadth-first search over duality, rotation and parity steps for the
/// shortest chain that maps every driven term onto -G sigma^x at one site.
/// Throws ReductionError if none exists within the search bounds.
Reduction reduce_to_single(const std::vector<DrivenTerm>& family, std::size_t max_depth = 0);

}  // namespace tpump
