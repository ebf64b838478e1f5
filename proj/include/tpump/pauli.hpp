#pragma once

// Phase-tracked Pauli strings on a ring of N sites and real/complex linear
// combinations of them.
//
// Basis convention for every matrix or state vector produced here: the
// computational z-basis, |0> = (+1 eigenstate of Z), with site 0 stored in the
// most significant bit of the basis index.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tpump {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr bool has_x(Pauli p) { return (static_cast<std::uint8_t>(p) & 1u) != 0; }
constexpr bool has_z(Pauli p) { return (static_cast<std::uint8_t>(p) & 2u) != 0; }
constexpr Pauli pauli_from_bits(bool x, bool z) {
  return static_cast<Pauli>((x ? 1u : 0u) | (z ? 2u : 0u));
}

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Element of Z_4 = {+1, +i, -1, -i}, stored as the exponent of i.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int exponent) : k_(static_cast<std::uint8_t>(((exponent % 4) + 4) % 4)) {}

  static constexpr Phase one() { return Phase(0); }
  static constexpr Phase i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }

  constexpr int exponent() const { return k_; }
  constexpr bool is_real() const { return (k_ & 1u) == 0; }
  constexpr Phase conj() const { return Phase(-static_cast<int>(k_)); }
  cplx value() const;

  constexpr Phase operator*(Phase o) const { return Phase(k_ + o.k_); }
  constexpr Phase& operator*=(Phase o) { return *this = *this * o; }
  constexpr bool operator==(const Phase&) const = default;

 private:
  std::uint8_t k_ = 0;
};

class PauliString {
 public:
  PauliString() = default;
  /// Identity string on n_sites.
  explicit PauliString(std::size_t n_sites);
  PauliString(std::vector<Pauli> letters, Phase phase = Phase::one());

  static PauliString single(std::size_t n_sites, int site, Pauli p);
  /// Sites are taken modulo n_sites (ring). Repeated sites multiply in order.
  static PauliString from_sites(std::size_t n_sites,
                                std::initializer_list<std::pair<int, Pauli>> factors);
  /// Dense letter form, e.g. "+IXZY", "-XX", "iZ" (sign prefix optional).
  static PauliString parse_dense(std::string_view text);

  std::size_t size() const { return letters_.size(); }
  Pauli operator[](std::size_t site) const { return letters_[site]; }
  const std::vector<Pauli>& letters() const { return letters_; }
  Phase phase() const { return phase_; }
  PauliString with_phase(Phase p) const;

  std::size_t weight() const;
  bool is_identity() const { return weight() == 0; }
  /// Sites carrying a non-identity letter, ascending.
  std::vector<int> support() const;
  int y_count() const;

  /// Masks in basis-index convention (site j <-> bit n-1-j).
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  /// "+XIZ" style dense string.
  std::string dense_str() const;
  /// "X0 Z2" style sparse string (no phase); "I" for the identity.
  std::string sparse_str() const;

  bool operator==(const PauliString&) const = default;
  /// Orders by letters only.
  bool letters_less(const PauliString& o) const { return letters_ < o.letters_; }

 private:
  std::vector<Pauli> letters_;
  Phase phase_;
};

/// Site-wise product with the exact accumulated phase.
PauliString mul(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) { return mul(a, b); }
bool commutes(const PauliString& a, const PauliString& b);

struct Term {
  cplx coeff;
  PauliString string;
};

/// Weighted sum of Pauli strings. Terms are kept as added; canonical() folds
/// string phases into coefficients, merges equal letter sequences, drops
/// zero coefficients and sorts by letters.
class OperatorSum {
 public:
  OperatorSum() = default;
  explicit OperatorSum(std::size_t n_sites) : n_sites_(n_sites) {}
  OperatorSum(std::size_t n_sites, std::vector<Term> terms);

  static OperatorSum identity(std::size_t n_sites, double coeff = 1.0);
  static OperatorSum from_string(const PauliString& s, cplx coeff = 1.0);

  std::size_t n_sites() const { return n_sites_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  OperatorSum& add(cplx coeff, const PauliString& s);
  OperatorSum& operator+=(const OperatorSum& o);
  OperatorSum& operator*=(cplx scale);

  OperatorSum canonical() const;
  bool is_hermitian(double tol = 1e-12) const;
  /// Largest number of non-identity letters over the terms.
  std::size_t max_weight() const;

  /// Canonical-form equality with an absolute coefficient tolerance.
  bool approx_equal(const OperatorSum& o, double tol = 1e-12) const;

 private:
  std::size_t n_sites_ = 0;
  std::vector<Term> terms_;
};

OperatorSum operator+(OperatorSum a, const OperatorSum& b);
OperatorSum operator*(cplx scale, OperatorSum a);
/// Operator product, canonicalized.
OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);
inline OperatorSum canonicalize(const OperatorSum& op) { return op.canonical(); }

/// Sites above this count are refused by dense realizations.
inline constexpr std::size_t kDefaultSiteCap = 14;

Eigen::MatrixXcd to_matrix(const PauliString& s, std::size_t cap = kDefaultSiteCap);
Eigen::MatrixXcd to_matrix(const OperatorSum& op, std::size_t cap = kDefaultSiteCap);

/// Textual form: `-1 * Z0 X1 Z2 + 0.5 * X3 + 2` (see README for the grammar).
std::string to_string(const OperatorSum& op);
OperatorSum parse_operator_sum(std::string_view text, std::size_t n_sites);

}  // namespace tpump
