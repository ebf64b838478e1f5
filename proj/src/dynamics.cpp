#include "tpump/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>

#include "tpump/errors.hpp"

namespace tpump {

std::string to_string(IntegratorMethod m) {
  return m == IntegratorMethod::cfm4_krylov ? "cfm4_krylov" : "dense_midpoint";
}

IntegratorMethod parse_integrator_method(std::string_view s) {
  if (s == "cfm4_krylov") return IntegratorMethod::cfm4_krylov;
  if (s == "dense_midpoint") return IntegratorMethod::dense_midpoint;
  throw ConfigError("unknown integrator '" + std::string(s) + "'");
}

namespace {

// Largest grouped coefficient table (entries) built for a Krylov step.
constexpr std::uint64_t kBindLimit = std::uint64_t{1} << 24;

template <class V>
std::span<const cplx> as_span(const V& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

struct TridiagExp {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd q;

  void build(const std::vector<double>& alpha, const std::vector<double>& beta, int m) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    lambda = es.eigenvalues();
    q = es.eigenvectors();
  }

  // exp(-i h T) e_1
  Eigen::VectorXcd apply(double h) const {
    Eigen::VectorXcd y(q.rows());
    Eigen::VectorXcd d(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) d(k) = std::polar(q(0, k), -h * lambda(k));
    y = q.cast<cplx>() * d;
    return y;
  }
};

}  // namespace

void krylov_expm(const CompiledSum& ops, std::span<const cplx> c, StateVector& psi, double tau,
                 const IntegratorPolicy& policy, IntegratorDiagnostics* diag) {
  const Eigen::Index dim = psi.size();
  if (static_cast<std::uint64_t>(dim) != ops.dim()) throw DimensionError("state and operator dimensions differ");
  if (tau == 0.0) return;
  const int mmax = static_cast<int>(std::min<Eigen::Index>(policy.krylov_dim, dim));
  if (mmax < 2) throw ConfigError("Krylov dimension must be at least 2");
  Eigen::MatrixXcd V(dim, mmax + 1);
  Eigen::VectorXcd w(dim);
  std::optional<BoundSum> bound;
  if (ops.dim() * ops.x_groups() <= kBindLimit) bound = ops.bind(c, policy.exec);
  const std::span<cplx> wspan{w.data(), static_cast<std::size_t>(dim)};
  std::vector<double> alpha, beta;
  TridiagExp tex;
  double remaining = tau;
  const double min_step = std::abs(tau) * 1e-9;

  while (remaining != 0.0) {
    const double beta0 = psi.norm();
    if (!(beta0 > 0.0)) throw IntegratorError("state vector vanished during Krylov step");
    V.col(0) = psi / beta0;
    alpha.clear();
    beta.clear();
    int m = 0;
    bool exact = false;
    double h = remaining;
    Eigen::VectorXcd y;
    auto error_for = [&](double step) {
      y = tex.apply(step);
      return exact ? 0.0 : beta0 * beta.back() * std::abs(y(m - 1));
    };
    for (int j = 0; j < mmax; ++j) {
      if (bound) {
        bound->apply(as_span(V.col(j)), wspan, policy.exec);
      } else {
        ops.apply(c, as_span(V.col(j)), wspan, policy.exec);
      }
      if (diag) ++diag->matvecs;
      if (j > 0) w -= beta.back() * V.col(j - 1);
      alpha.push_back(V.col(j).dot(w).real());
      w -= alpha.back() * V.col(j);
      // one pass against the previous vector and the current one
      const cplx fix = V.col(j).dot(w);
      w -= fix * V.col(j);
      const double b = w.norm();
      m = j + 1;
      beta.push_back(b);
      if (b <= 1e-13 * std::max(1.0, std::abs(alpha.back()))) {
        exact = true;
        break;
      }
      V.col(j + 1) = w / b;
      if (m >= 6 && (m % 4 == 0 || m == mmax)) {
        tex.build(alpha, beta, m);
        if (error_for(remaining) <= policy.krylov_tol) break;
      }
    }
    tex.build(alpha, beta, m);
    double err = error_for(h);
    while (err > policy.krylov_tol) {
      h *= 0.5;
      if (std::abs(h) < min_step) {
        throw IntegratorError("Krylov step did not converge (error " + std::to_string(err) + " at step " +
                              std::to_string(h) + ", dimension " + std::to_string(m) + ")");
      }
      err = error_for(h);
    }
    psi = beta0 * (V.leftCols(m) * y);
    if (diag) {
      ++diag->krylov_substeps;
      diag->max_krylov_error = std::max(diag->max_krylov_error, err);
    }
    remaining = (h == remaining) ? 0.0 : remaining - h;
  }
}

namespace {

Eigen::MatrixXcd dense_from(const CompiledSum& ops, std::span<const cplx> c) {
  const auto dim = static_cast<Eigen::Index>(ops.dim());
  if (ops.n_sites() > kDefaultSiteCap) throw ResourceError("dense integrator refuses this system size");
  Eigen::MatrixXcd m(dim, dim);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd col(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    e(k) = 1.0;
    ops.apply(c, as_span(e), {col.data(), static_cast<std::size_t>(dim)}, Exec::serial);
    m.col(k) = col;
    e(k) = 0.0;
  }
  return m;
}

}  // namespace

StateVector propagate(const CompiledSum& ops, const CoefficientFn& coeffs, StateVector psi, double t0, double t1,
                      int n_steps, const IntegratorPolicy& policy, IntegratorDiagnostics* diag) {
  if (n_steps < 1) throw ConfigError("need at least one integration step");
  const double h = (t1 - t0) / n_steps;
  const double s3 = std::sqrt(3.0);
  const double c1 = 0.5 - s3 / 6.0, c2 = 0.5 + s3 / 6.0;
  const double a1 = (3.0 - 2.0 * s3) / 12.0, a2 = (3.0 + 2.0 * s3) / 12.0;
  std::vector<cplx> mix(ops.size());
  for (int step = 0; step < n_steps; ++step) {
    const double t = t0 + step * h;
    if (policy.method == IntegratorMethod::cfm4_krylov) {
      const std::vector<cplx> k1 = coeffs(t + c1 * h);
      const std::vector<cplx> k2 = coeffs(t + c2 * h);
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a2 * k1[i] + a1 * k2[i];
      krylov_expm(ops, mix, psi, h, policy, diag);
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a1 * k1[i] + a2 * k2[i];
      krylov_expm(ops, mix, psi, h, policy, diag);
    } else {
      const std::vector<cplx> k = coeffs(t + 0.5 * h);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_from(ops, k));
      Eigen::VectorXcd phase(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < phase.size(); ++i) phase(i) = std::polar(1.0, -h * es.eigenvalues()(i));
      psi = es.eigenvectors() * phase.asDiagonal() * (es.eigenvectors().adjoint() * psi);
    }
    if (diag) ++diag->steps;
    if (policy.renormalize_every > 0 && (step + 1) % policy.renormalize_every == 0) psi.normalize();
  }
  return psi;
}

StateVector propagate(const TimeDependentHamiltonian& H, StateVector psi, double t0, double t1, int n_steps,
                      const IntegratorPolicy& policy, IntegratorDiagnostics* diag) {
  return propagate(
      H.compiled(), [&H](double t) { return H.coefficients(t); }, std::move(psi), t0, t1, n_steps, policy, diag);
}

Trajectory evolve(const TimeDependentHamiltonian& H, const StateVector& psi0, double t_final,
                  const IntegratorPolicy& policy, const SampleFn& on_sample) {
  if (static_cast<std::uint64_t>(psi0.size()) != H.compiled().dim()) throw DimensionError("initial state dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ContractError("initial state is not normalized");
  if (policy.samples_per_period < 1) throw ConfigError("samples_per_period must be positive");
  if (!(policy.max_dt > 0.0)) throw ConfigError("max_dt must be positive");
  if (t_final < 0.0) throw ConfigError("final time must be non-negative");
  const double T = H.params().period();
  const double dt_sample = T / policy.samples_per_period;
  const auto n_samples = static_cast<std::size_t>(std::ceil(t_final / dt_sample - 1e-9));
  const int steps = std::max(1, static_cast<int>(std::ceil(dt_sample / policy.max_dt - 1e-12)));

  Trajectory tr;
  StateVector psi = psi0;
  auto record = [&](std::size_t k, double t) {
    tr.times.push_back(t);
    tr.norms.push_back(psi.norm());
    if (k % static_cast<std::size_t>(policy.samples_per_period) == 0) tr.snapshots.push_back(psi);
    if (on_sample) on_sample(k, t, psi);
  };
  record(0, 0.0);
  for (std::size_t k = 1; k <= n_samples; ++k) {
    const double ta = static_cast<double>(k - 1) * dt_sample;
    const double tb = std::min(static_cast<double>(k) * dt_sample, t_final);
    const int n = tb - ta < dt_sample ? std::max(1, static_cast<int>(std::ceil((tb - ta) / policy.max_dt))) : steps;
    psi = propagate(H, std::move(psi), ta, tb, n, policy, &tr.diag);
    record(k, tb);
  }
  tr.final_state = psi;
  return tr;
}

Prepared prepare_initial_state(const Eigen::MatrixXcd& H0, const StateVector& reference, double threshold) {
  if (H0.rows() != H0.cols() || H0.rows() != reference.size()) throw DimensionError("H0 and reference dimensions");
  const double rn = reference.norm();
  if (!(rn > 0.0)) throw ContractError("reference state is zero");
  const StateVector ref = reference / rn;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H0);
  const auto& ev = es.eigenvalues();
  const Eigen::VectorXcd amp = es.eigenvectors().adjoint() * ref;

  struct Group {
    Eigen::Index begin, end;
    double weight;
  };
  std::vector<Group> groups;
  for (Eigen::Index i = 0; i < ev.size();) {
    Eigen::Index j = i + 1;
    while (j < ev.size() && ev(j) - ev(j - 1) < 1e-9) ++j;
    groups.push_back({i, j, amp.segment(i, j - i).squaredNorm()});
    i = j;
  }
  std::ranges::sort(groups, [](const Group& a, const Group& b) { return a.weight > b.weight; });
  const Group& best = groups.front();
  if (groups.size() > 1 && best.weight - groups[1].weight < 1e-9) {
    throw AmbiguityError("two eigenspaces overlap equally (" + std::to_string(best.weight) + ") with the reference");
  }
  if (best.weight < threshold) {
    throw PreparationError("best eigenstate overlap^2 " + std::to_string(best.weight) + " is below threshold " +
                           std::to_string(threshold));
  }
  const Eigen::Index len = best.end - best.begin;
  StateVector psi = es.eigenvectors().middleCols(best.begin, len) * amp.segment(best.begin, len);
  psi /= psi.norm();
  return {psi, best.weight, ev(best.begin), static_cast<int>(len)};
}

double expectation(const OperatorSum& op, const StateVector& psi) {
  if (!op.is_hermitian()) throw ContractError("expectation of a non-Hermitian operator");
  const CompiledSum cs(op.canonical());
  if (cs.dim() != static_cast<std::uint64_t>(psi.size())) throw DimensionError("operator and state dimensions");
  Eigen::VectorXcd out(psi.size());
  cs.apply(as_span(psi), {out.data(), static_cast<std::size_t>(out.size())});
  const cplx v = psi.dot(out);
  double scale = 1.0;
  for (const auto& t : op.terms()) scale += std::abs(t.coeff);
  if (std::abs(v.imag()) > 1e-10 * scale) {
    throw NumericalError("expectation value has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw DimensionError("fidelity of states with different dimensions");
  return std::norm(a.dot(b));
}

OperatorSum winding_op(ModelKind kind, std::size_t n_sites, int r) {
  OperatorSum w = OperatorSum::identity(n_sites);
  for (int j = 0; j < static_cast<int>(n_sites); ++j) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * (j + 1) / static_cast<double>(n_sites));
    OperatorSum f(n_sites);
    f.add(0.5 * (1.0 + e), PauliString(n_sites));
    f.add(0.5 * (e - 1.0), drive_observable(kind, n_sites, j, r));
    w = w * f;
  }
  return w;
}

}  // namespace tpump
