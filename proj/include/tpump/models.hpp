#pragma once

// Driven spin-chain Hamiltonians: spin flips, kinks, cluster-Ising and the
// r-family of higher-order duals, all built from the spin-flip model by
// pushing it through a fixed TransformChain.
//
// Sites are 0-based here. The drive law in 0-based form is
//     G_j(t) = g0 + g1 cos(2 pi j b + omega t + phi0).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tpump/duality.hpp"
#include "tpump/kernels.hpp"
#include "tpump/pauli.hpp"

namespace tpump {

enum class ModelKind { spin_flip, kink, cluster, higher_r };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view s);

struct Rational {
  int p = 1;
  int q = 3;
  double value() const { return static_cast<double>(p) / q; }
  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
  static Rational parse(std::string_view s);
};

struct DriveParams {
  std::size_t n_sites = 9;
  double g0 = 10.0;
  double g1 = 3.0;
  double omega = 0.02;
  double phi0 = 0.0;
  Rational b{};

  double period() const;
  /// Throws ConfigError on N not divisible by q, g1 < 0 or omega <= 0.
  void validate() const;
};

/// G_site(t); periodic in t with period T and in site with period q.
double drive(int site, double t, const DriveParams& p);

enum class DisorderTarget { none, G, J };

std::string to_string(DisorderTarget t);
DisorderTarget parse_disorder_target(std::string_view s);

struct Disorder {
  DisorderTarget target = DisorderTarget::none;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> offsets;  // Delta_j, one per site (G) or bond (J)
};

struct ModelSpec {
  ModelKind kind = ModelKind::spin_flip;
  int r = 0;  // order of the higher_r family; r = 0 is the cluster model
  double J = 1.0;
  double K = 0.0;
  Disorder disorder;
};

/// Counter-based stream seed: splitmix64 of master + golden * (stream + 1).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

/// n draws uniform in [-delta, delta] from a generator seeded with `seed`.
std::vector<double> sample_offsets(std::size_t n, double delta, std::uint64_t seed);

ModelSpec apply_disorder(ModelSpec spec, DisorderTarget target, double delta, std::uint64_t seed,
                         std::size_t n_sites);

/// Chain mapping spin-flip operators into the variables of `kind`.
TransformChain chain_from_flip(ModelKind kind, int r = 0);

class TimeDependentHamiltonian {
 public:
  TimeDependentHamiltonian() = default;
  /// H(t) = static_part + sum_d sign_d * (G_{site_d}(t) + g_offsets[site_d]) * op_d
  TimeDependentHamiltonian(DriveParams p, OperatorSum static_part, std::vector<DrivenTerm> driven,
                           std::vector<double> g_offsets);

  std::size_t n_sites() const { return params_.n_sites; }
  const DriveParams& params() const { return params_; }
  const OperatorSum& static_part() const { return static_; }
  const std::vector<DrivenTerm>& driven_terms() const { return driven_; }
  const std::vector<double>& g_offsets() const { return offsets_; }

  double G(int site, double t) const;
  OperatorSum at(double t) const;
  Eigen::MatrixXcd matrix(double t, std::size_t cap = kDefaultSiteCap) const;

  /// Static strings first, then one string per driven term.
  const CompiledSum& compiled() const { return compiled_; }
  std::vector<cplx> coefficients(double t) const;
  void apply(double t, std::span<const cplx> in, std::span<cplx> out, Exec exec = Exec::parallel) const;

  /// Image under a chain; driven signs absorb the real phases.
  TimeDependentHamiltonian transformed(const TransformChain& chain) const;

 private:
  DriveParams params_;
  OperatorSum static_;
  std::vector<DrivenTerm> driven_;
  std::vector<double> offsets_;
  CompiledSum compiled_;
  std::vector<cplx> static_coeffs_;
};

TimeDependentHamiltonian build_model(const ModelSpec& spec, const DriveParams& p);

/// Number-conserving part of the spin-flip model:
///     sum_j -G_j X_j + (J/2)(Z_j Z_j+1 + Y_j Y_j+1).
TimeDependentHamiltonian effective_rwa_model(const DriveParams& p, double J);

// Observables in the variables of each kind. All are images of spin-flip
// operators under chain_from_flip, so expectations agree across dual frames.

/// N = 1/2 sum_j (1 + X_j), X_j the drive observable.
OperatorSum excitation_number_op(ModelKind kind, std::size_t n_sites, int r = 0);
/// x = 1/2 sum_j (j+1)(1 + X_j), positions 1-based.
OperatorSum position_op(ModelKind kind, std::size_t n_sites, int r = 0);
/// Image of sigma^x_site.
PauliString drive_observable(ModelKind kind, std::size_t n_sites, int site, int r = 0);
/// Image of sigma^z_site sigma^z_site+1.
PauliString bond_observable(ModelKind kind, std::size_t n_sites, int site, int r = 0);

/// Global Z2 symmetry prod_j X_j of each model with the eigenvalue of the
/// sector whose spectrum coincides across the dual models.
struct SymmetrySector {
  PauliString parity;
  int eigenvalue;
};
SymmetrySector duality_sector(ModelKind kind, std::size_t n_sites, int r = 0);

}  // namespace tpump
