#pragma once

#include <random>

#include "tpump/pauli.hpp"
#include "tpump/quantum_info.hpp"

namespace tpump::testing {

inline PauliString random_string(std::mt19937_64& gen, std::size_t n) {
  std::uniform_int_distribution<int> letter(0, 3), ph(0, 3);
  std::vector<Pauli> l(n);
  for (auto& p : l) p = static_cast<Pauli>(letter(gen));
  return PauliString(l, Phase(ph(gen)));
}

inline StateVector random_state(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g;
  StateVector v(Eigen::Index{1} << n);
  for (auto& a : v) a = {g(gen), g(gen)};
  return v.normalized();
}

inline std::span<const cplx> cspan(const StateVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
inline std::span<cplx> mspan(StateVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// Kronecker-product oracle for a Pauli string, site 0 leftmost.
inline Eigen::MatrixXcd kron_oracle(const PauliString& s) {
  const cplx i(0, 1);
  Eigen::Matrix2cd I, X, Y, Z;
  I << 1, 0, 0, 1;
  X << 0, 1, 1, 0;
  Y << 0, -i, i, 0;
  Z << 1, 0, 0, -1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Eigen::Matrix2cd& f = s[j] == Pauli::I ? I : s[j] == Pauli::X ? X : s[j] == Pauli::Y ? Y : Z;
    Eigen::MatrixXcd k(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      for (Eigen::Index b = 0; b < m.cols(); ++b) k.block(2 * a, 2 * b, 2, 2) = m(a, b) * f;
    m = k;
  }
  return s.phase().value() * m;
}

}  // namespace tpump::testing
