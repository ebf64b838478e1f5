#include "tpump/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "tpump/errors.hpp"

namespace tpump {

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Z: return 'Z';
    case Pauli::Y: return 'Y';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I':
    case '_': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw ConfigError(std::string("not a Pauli letter: '") + c + "'");
  }
}

cplx Phase::value() const {
  switch (k_) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

namespace {

// P(x,z) = i^{xz} X^x Z^z, so P1 P2 = i^{x1 z1 + x2 z2 + 2 z1 x2 - x z} P(x1^x2, z1^z2).
constexpr int product_exponent(Pauli a, Pauli b) {
  const int x1 = has_x(a), z1 = has_z(a), x2 = has_x(b), z2 = has_z(b);
  const int x = x1 ^ x2, z = z1 ^ z2;
  return x1 * z1 + x2 * z2 + 2 * z1 * x2 - x * z;
}

constexpr Pauli product_letter(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": site counts differ (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

void require_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceError("dense realization of " + std::to_string(n) + " sites exceeds the cap of " +
                        std::to_string(cap));
  }
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

PauliString::PauliString(std::size_t n_sites) : letters_(n_sites, Pauli::I) {}

PauliString::PauliString(std::vector<Pauli> letters, Phase phase)
    : letters_(std::move(letters)), phase_(phase) {}

PauliString PauliString::single(std::size_t n_sites, int site, Pauli p) {
  return from_sites(n_sites, {{site, p}});
}

PauliString PauliString::from_sites(std::size_t n_sites,
                                    std::initializer_list<std::pair<int, Pauli>> factors) {
  PauliString out(n_sites);
  const int n = static_cast<int>(n_sites);
  for (const auto& [site, p] : factors) {
    PauliString f(n_sites);
    f.letters_[static_cast<std::size_t>(((site % n) + n) % n)] = p;
    out = mul(out, f);
  }
  return out;
}

PauliString PauliString::parse_dense(std::string_view text) {
  Phase ph;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') ph = Phase::minus_one();
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    ph *= Phase::i();
    ++pos;
  }
  std::vector<Pauli> letters;
  for (; pos < text.size(); ++pos) letters.push_back(pauli_from_char(text[pos]));
  return PauliString(std::move(letters), ph);
}

PauliString PauliString::with_phase(Phase p) const {
  PauliString out = *this;
  out.phase_ = p;
  return out;
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(
      std::count_if(letters_.begin(), letters_.end(), [](Pauli p) { return p != Pauli::I; }));
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < letters_.size(); ++j)
    if (letters_[j] != Pauli::I) out.push_back(static_cast<int>(j));
  return out;
}

int PauliString::y_count() const {
  return static_cast<int>(std::count(letters_.begin(), letters_.end(), Pauli::Y));
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  const std::size_t n = letters_.size();
  for (std::size_t j = 0; j < n; ++j)
    if (has_x(letters_[j])) m |= std::uint64_t{1} << (n - 1 - j);
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  const std::size_t n = letters_.size();
  for (std::size_t j = 0; j < n; ++j)
    if (has_z(letters_[j])) m |= std::uint64_t{1} << (n - 1 - j);
  return m;
}

std::string PauliString::dense_str() const {
  static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
  std::string s = kPrefix[phase_.exponent()];
  for (Pauli p : letters_) s += to_char(p);
  return s;
}

std::string PauliString::sparse_str() const {
  std::string s;
  for (std::size_t j = 0; j < letters_.size(); ++j) {
    if (letters_[j] == Pauli::I) continue;
    if (!s.empty()) s += ' ';
    s += to_char(letters_[j]);
    s += std::to_string(j);
  }
  return s.empty() ? "I" : s;
}

PauliString mul(const PauliString& a, const PauliString& b) {
  require_same_size(a.size(), b.size(), "Pauli product");
  std::vector<Pauli> letters(a.size());
  int exponent = a.phase().exponent() + b.phase().exponent();
  for (std::size_t j = 0; j < a.size(); ++j) {
    exponent += product_exponent(a[j], b[j]);
    letters[j] = product_letter(a[j], b[j]);
  }
  return PauliString(std::move(letters), Phase(exponent));
}

bool commutes(const PauliString& a, const PauliString& b) {
  require_same_size(a.size(), b.size(), "commutator");
  const std::uint64_t anti = (a.x_mask() & b.z_mask()) ^ (a.z_mask() & b.x_mask());
  return std::popcount(anti) % 2 == 0;
}

OperatorSum::OperatorSum(std::size_t n_sites, std::vector<Term> terms) : n_sites_(n_sites) {
  for (auto& t : terms) add(t.coeff, t.string);
}

OperatorSum OperatorSum::identity(std::size_t n_sites, double coeff) {
  OperatorSum op(n_sites);
  op.add(coeff, PauliString(n_sites));
  return op;
}

OperatorSum OperatorSum::from_string(const PauliString& s, cplx coeff) {
  OperatorSum op(s.size());
  op.add(coeff, s);
  return op;
}

OperatorSum& OperatorSum::add(cplx coeff, const PauliString& s) {
  require_same_size(n_sites_, s.size(), "OperatorSum::add");
  terms_.push_back({coeff, s});
  return *this;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& o) {
  require_same_size(n_sites_, o.n_sites_, "OperatorSum sum");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

OperatorSum& OperatorSum::operator*=(cplx scale) {
  for (auto& t : terms_) t.coeff *= scale;
  return *this;
}

OperatorSum OperatorSum::canonical() const {
  std::map<std::vector<Pauli>, cplx> merged;
  for (const auto& t : terms_) merged[t.string.letters()] += t.coeff * t.string.phase().value();
  OperatorSum out(n_sites_);
  for (auto& [letters, c] : merged) {
    if (c == cplx{0.0, 0.0}) continue;
    out.terms_.push_back({c, PauliString(letters)});
  }
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  return std::ranges::all_of(canonical().terms_,
                             [tol](const Term& t) { return std::abs(t.coeff.imag()) <= tol; });
}

std::size_t OperatorSum::max_weight() const {
  std::size_t w = 0;
  for (const auto& t : terms_) w = std::max(w, t.string.weight());
  return w;
}

bool OperatorSum::approx_equal(const OperatorSum& o, double tol) const {
  if (n_sites_ != o.n_sites_) return false;
  OperatorSum diff = *this;
  diff += (-1.0) * o;
  return std::ranges::all_of(diff.canonical().terms_,
                             [tol](const Term& t) { return std::abs(t.coeff) <= tol; });
}

OperatorSum operator+(OperatorSum a, const OperatorSum& b) {
  a += b;
  return a;
}

OperatorSum operator*(cplx scale, OperatorSum a) {
  a *= scale;
  return a;
}

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  require_same_size(a.n_sites(), b.n_sites(), "OperatorSum product");
  OperatorSum out(a.n_sites());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out.add(ta.coeff * tb.coeff, mul(ta.string, tb.string));
  return out.canonical();
}

Eigen::MatrixXcd to_matrix(const PauliString& s, std::size_t cap) {
  return to_matrix(OperatorSum::from_string(s), cap);
}

Eigen::MatrixXcd to_matrix(const OperatorSum& op, std::size_t cap) {
  const std::size_t n = op.n_sites();
  require_cap(n, cap);
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : op.terms()) {
    const std::uint64_t xm = t.string.x_mask(), zm = t.string.z_mask();
    const cplx c = t.coeff * (t.string.phase() * Phase(t.string.y_count())).value();
    for (std::uint64_t s = 0; s < dim; ++s) {
      const double sign = (std::popcount(s & zm) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(s ^ xm), static_cast<Eigen::Index>(s)) += sign * c;
    }
  }
  return m;
}

std::string to_string(const OperatorSum& op) {
  const OperatorSum c = op.canonical();
  if (c.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : c.terms()) {
    std::string coeff;
    double magnitude_sign = 1.0;
    if (t.coeff.imag() == 0.0) {
      magnitude_sign = t.coeff.real() < 0 ? -1.0 : 1.0;
      coeff = format_real(std::abs(t.coeff.real()));
    } else if (t.coeff.real() == 0.0) {
      magnitude_sign = t.coeff.imag() < 0 ? -1.0 : 1.0;
      coeff = format_real(std::abs(t.coeff.imag())) + "i";
    } else {
      coeff = "(" + format_real(t.coeff.real()) + (t.coeff.imag() < 0 ? " - " : " + ") +
              format_real(std::abs(t.coeff.imag())) + "i)";
    }
    if (first) {
      out += magnitude_sign < 0 ? "-" : "";
    } else {
      out += magnitude_sign < 0 ? " - " : " + ";
    }
    first = false;
    out += coeff;
    if (!t.string.is_identity()) out += " * " + t.string.sparse_str();
  }
  return out;
}

namespace {

class SumParser {
 public:
  SumParser(std::string_view text, std::size_t n) : text_(text), n_(n), out_(n) {}

  OperatorSum parse() {
    skip_ws();
    if (at_end()) throw ConfigError("empty operator expression");
    double sign = 1.0;
    if (peek() == '-' || peek() == '+') {
      sign = take() == '-' ? -1.0 : 1.0;
    }
    term(sign);
    while (true) {
      skip_ws();
      if (at_end()) break;
      const char c = take();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      term(c == '-' ? -1.0 : 1.0);
    }
    return out_;
  }

 private:
  void term(double sign) {
    skip_ws();
    cplx coeff = 1.0;
    bool have_coeff = false;
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '(')) {
      coeff = coefficient();
      have_coeff = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        take();
      } else {
        out_.add(sign * coeff, PauliString(n_));
        return;
      }
    }
    PauliString s(n_);
    bool any = false;
    while (true) {
      skip_ws();
      if (at_end() || !std::isalpha(static_cast<unsigned char>(peek()))) break;
      const Pauli p = pauli_from_char(take());
      any = true;
      if (p == Pauli::I) {
        // bare identity factor, optional site index
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) take();
        continue;
      }
      const std::size_t site = integer();
      if (site >= n_) fail("site index " + std::to_string(site) + " out of range");
      PauliString f(n_);
      std::vector<Pauli> letters(n_, Pauli::I);
      letters[site] = p;
      s = mul(s, PauliString(std::move(letters)));
    }
    if (!any && !have_coeff) fail("expected a term");
    if (!any) fail("expected Pauli factors after '*'");
    out_.add(sign * coeff, s);
  }

  cplx coefficient() {
    if (peek() == '(') {
      take();
      skip_ws();
      const double re = real();
      skip_ws();
      const char c = take();
      if (c != '+' && c != '-') fail("expected '+' or '-' in complex coefficient");
      skip_ws();
      const double im = real();
      if (at_end() || take() != 'i') fail("expected 'i'");
      skip_ws();
      if (at_end() || take() != ')') fail("expected ')'");
      return {re, c == '-' ? -im : im};
    }
    const double v = real();
    if (!at_end() && peek() == 'i') {
      take();
      return {0.0, v};
    }
    return {v, 0.0};
  }

  double real() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::size_t integer() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected a site index");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("operator parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t n_;
  OperatorSum out_;
};

}  // namespace

OperatorSum parse_operator_sum(std::string_view text, std::size_t n_sites) {
  return SumParser(text, n_sites).parse();
}

}  // namespace tpump
