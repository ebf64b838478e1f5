#pragma once

// Bipartite entanglement and the analytic one-excitation-per-trimer states.
//
// State vectors use the basis convention of pauli.hpp: z-basis, site 0 in the
// most significant bit.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tpump/models.hpp"

namespace tpump {

using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// Subsystem A (0-based sites); B is the complement.
struct Partition {
  std::vector<int> sites;

  /// A = the first trimer.
  static Partition first_trimer(std::size_t n_sites);
  /// A = the first site of every trimer.
  static Partition trimer_heads(std::size_t n_sites);
  /// Sorted, unique, non-empty proper subset; throws ConfigError otherwise.
  void validate(std::size_t n_sites) const;
  std::vector<int> complement(std::size_t n_sites) const;
};

std::size_t site_count(const StateVector& psi);

/// rho_B = Tr_A |psi><psi|, B sites in ascending order.
DensityMatrix partial_trace(const StateVector& psi, const Partition& traced);

/// Entropy in bits; eigenvalues below 1e-12 are dropped. A normalized entropy
/// divides by max_bits (pass min(|A|, |B|)). Throws NumericalError when rho
/// has an eigenvalue below -1e-10 or a trace off by more than 1e-10.
double von_neumann_entropy(const DensityMatrix& rho, double max_bits = 0.0);

/// S(rho_B) for the cut, optionally normalized by min(|A|, |B|). Uses the
/// smaller reduced matrix.
double entanglement_entropy(const StateVector& psi, const Partition& part, bool normalized = false);

enum class Regime { away, at };

/// Normalized analytic state. Away states put the excitation of every trimer on
/// its second site; at states share it between the first and second sites.
/// x-basis letters: |1>_x = |+> (excitation), |0>_x = |->.
StateVector analytic_state(ModelKind kind, Regime regime, std::size_t n_sites);

/// Cyclic relabeling: site j of psi becomes site j + shift.
StateVector translate(const StateVector& psi, int shift);

/// |<a|b>|^2.
double overlap(const StateVector& a, const StateVector& b);

}  // namespace tpump
