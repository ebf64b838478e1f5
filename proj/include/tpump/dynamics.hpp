#pragma once

// Time evolution under a TimeDependentHamiltonian and state preparation.
//
// The default integrator is the fourth-order commutator-free Magnus scheme
// with two exponentials per step,
//     psi <- exp(-i h (a1 H1 + a2 H2)) exp(-i h (a2 H1 + a1 H2)) psi,
//     a1,2 = (3 -/+ 2 sqrt 3) / 12,  H1,2 = H(t + (1/2 -/+ sqrt 3 / 6) h),
// each exponential applied by an adaptive Lanczos (Krylov) step on the
// matrix-free Pauli-sum product. A dense midpoint rule (exact exponential of
// H(t + h/2) by eigendecomposition) is kept for small-system cross-checks.

#include <functional>
#include <string>
#include <vector>

#include "tpump/kernels.hpp"
#include "tpump/models.hpp"
#include "tpump/quantum_info.hpp"

namespace tpump {

enum class IntegratorMethod { cfm4_krylov, dense_midpoint };

std::string to_string(IntegratorMethod m);
IntegratorMethod parse_integrator_method(std::string_view s);

struct IntegratorPolicy {
  IntegratorMethod method = IntegratorMethod::cfm4_krylov;
  double max_dt = 0.5;       // outer step bound; steps divide the sample interval evenly
  double krylov_tol = 1e-11; // bound on each Lanczos substep error
  int krylov_dim = 40;
  int renormalize_every = 0; // steps between renormalizations, 0 = never
  int samples_per_period = 200;
  Exec exec = Exec::parallel;
};

struct IntegratorDiagnostics {
  long steps = 0;
  long matvecs = 0;
  long krylov_substeps = 0;
  double max_krylov_error = 0.0;
};

using CoefficientFn = std::function<std::vector<cplx>(double)>;

/// Advances psi from t0 to t1 in n_steps equal steps of
/// H(t) = sum_k coeffs(t)_k ops_k.
StateVector propagate(const CompiledSum& ops, const CoefficientFn& coeffs, StateVector psi, double t0, double t1,
                      int n_steps, const IntegratorPolicy& policy, IntegratorDiagnostics* diag = nullptr);

StateVector propagate(const TimeDependentHamiltonian& H, StateVector psi, double t0, double t1, int n_steps,
                      const IntegratorPolicy& policy, IntegratorDiagnostics* diag = nullptr);

/// psi <- exp(-i tau A) psi for Hermitian A = sum_k c_k ops_k.
void krylov_expm(const CompiledSum& ops, std::span<const cplx> c, StateVector& psi, double tau,
                 const IntegratorPolicy& policy, IntegratorDiagnostics* diag = nullptr);

using SampleFn = std::function<void(std::size_t index, double t, const StateVector& psi)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<StateVector> snapshots;  // at t = 0, T, 2T, ...
  StateVector final_state;
  IntegratorDiagnostics diag;
};

/// Evolves from t = 0 to t_final, sampling samples_per_period times per
/// period (plus t = 0) and calling on_sample at every sample.
Trajectory evolve(const TimeDependentHamiltonian& H, const StateVector& psi0, double t_final,
                  const IntegratorPolicy& policy, const SampleFn& on_sample = {});

struct Prepared {
  StateVector state;
  double overlap2 = 0.0;
  double energy = 0.0;
  int degeneracy = 1;
};

/// Eigenstate of H0 (projection of the reference onto the best eigenspace)
/// with the largest |overlap|^2 with the reference.
Prepared prepare_initial_state(const Eigen::MatrixXcd& H0, const StateVector& reference, double threshold = 0.8);

/// <psi|op|psi> for Hermitian op; throws ContractError otherwise.
double expectation(const OperatorSum& op, const StateVector& psi);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// exp(2 pi i x / N) for the position operator of `kind`; its phase winds
/// once per N units of total displacement.
OperatorSum winding_op(ModelKind kind, std::size_t n_sites, int r = 0);

}  // namespace tpump
