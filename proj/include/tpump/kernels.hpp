#pragma once

// Matrix-free application of Pauli sums to state vectors.
//
// Every kernel exists twice: a serial reference used by the tests as the
// oracle, and an OpenMP version that splits the output index range across
// threads. Reductions go through fixed-size chunks summed in chunk order, so
// results do not depend on the thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "tpump/pauli.hpp"

namespace tpump {

enum class Exec { serial, parallel };

/// A Pauli sum with fixed coefficients, terms grouped by their X part:
///     out[t] = sum_g d_g[t] in[t ^ x_g].
/// Binding costs about one product; later products skip the sign
/// bookkeeping of every term.
class BoundSum {
 public:
  std::uint64_t dim() const { return dim_; }
  std::size_t groups() const { return x_.size(); }
  void apply(std::span<const cplx> in, std::span<cplx> out, Exec exec = Exec::parallel) const;

 private:
  friend class CompiledSum;
  std::uint64_t dim_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<cplx> d_;  // d_[t * groups + g]
};

/// A fixed list of Pauli strings with per-string coefficients that can be
/// replaced between applications (time-dependent Hamiltonians).
class CompiledSum {
 public:
  CompiledSum() = default;
  explicit CompiledSum(const OperatorSum& op);
  CompiledSum(std::size_t n_sites, const std::vector<PauliString>& strings);

  std::size_t n_sites() const { return n_sites_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_sites_; }
  std::size_t size() const { return x_.size(); }
  std::span<const cplx> coefficients() const { return coeff_; }
  void set_coefficients(std::span<const cplx> c);

  /// out = sum_k c_k P_k in, with the stored coefficients.
  void apply(std::span<const cplx> in, std::span<cplx> out, Exec exec = Exec::parallel) const;
  void apply(std::span<const cplx> coeffs, std::span<const cplx> in, std::span<cplx> out,
             Exec exec = Exec::parallel) const;

  /// Groups terms by X mask and folds signs and coefficients per basis state.
  BoundSum bind(std::span<const cplx> coeffs, Exec exec = Exec::parallel) const;
  /// Number of distinct X masks.
  std::size_t x_groups() const { return group_x_.size(); }

  /// <psi| P_k |psi> for every string (coefficients ignored).
  std::vector<cplx> string_expectations(std::span<const cplx> psi, Exec exec = Exec::parallel) const;

 private:
  std::size_t n_sites_ = 0;
  std::vector<std::uint64_t> x_, z_;
  std::vector<cplx> phase_;  // phase * i^{#Y} of each string
  std::vector<cplx> coeff_;
  std::vector<std::uint32_t> group_;  // X-mask group of each term
  std::vector<std::uint64_t> group_x_;

  void index_groups();
};

/// <a|b> with chunked deterministic summation.
cplx inner(std::span<const cplx> a, std::span<const cplx> b, Exec exec = Exec::parallel);
double norm(std::span<const cplx> a, Exec exec = Exec::parallel);

}  // namespace tpump
