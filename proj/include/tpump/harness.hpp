#pragma once

// Experiment drivers: single pump runs, disorder and frequency sweeps, the
// interaction band check, the analytic-state overlap check, and their CSV / JSON
// writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpump/config.hpp"
#include "tpump/dynamics.hpp"
#include "tpump/models.hpp"
#include "tpump/quantum_info.hpp"
#include "tpump/topology.hpp"

namespace tpump {

struct PumpConfig {
  ModelSpec model;
  DriveParams drive;
  IntegratorPolicy policy;
  int n_periods = 3;
  int filling = 1;             // excitations per trimer of the prepared band
  bool observe = true;         // record per-sample observables
  bool entropy = true;         // and both entanglement entropies
  bool track_position = true;  // unwrap x(t) and report displacements
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Resolves a PumpConfig from a Config. Disorder (if any) is drawn from
/// stream 0 of the master seed.
PumpConfig pump_config(const Config& cfg);
ModelSpec model_spec(const Config& cfg);
DriveParams drive_params(const Config& cfg);
IntegratorPolicy integrator_policy(const Config& cfg);

struct PumpSample {
  double t = 0.0;
  std::vector<double> X;  // drive observable per site
  std::vector<double> Y;  // bond observable per site
  double x = 0.0;         // unwrapped excitation position
  double s1 = 0.0;        // normalized entropy, first trimer | rest
  double s2 = 0.0;        // normalized entropy, trimer heads | rest
  double norm = 1.0;
};

struct ResultRecord {
  std::string config_hash;
  double overlap2 = 0.0;  // prepared state vs reference
  double energy = 0.0;
  int degeneracy = 1;
  std::vector<PumpSample> samples;
  /// (x(nT) - x(0)) per trimer, n = 1..n_periods.
  std::vector<double> displacement;
  double fidelity = 0.0;  // |<psi(0)|psi(n_periods T)>|^2
  double max_norm_drift = 0.0;
  IntegratorDiagnostics diag;
  std::vector<double> g_offsets;
  std::vector<double> j_offsets;
  double wall_seconds = 0.0;
};

/// Reference state of the prepared band at t = 0: the analytic "away" state
/// shifted onto the largest-G site for filling 1, otherwise the lowest state
/// of the matching excitation-count sector.
StateVector band_reference(const TimeDependentHamiltonian& H, const ModelSpec& spec, int filling);

ResultRecord pump_run(const PumpConfig& cfg);

struct RealizationRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  double overlap2 = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepPoint {
  double axis = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::size_t failures = 0;
  std::vector<RealizationRecord> runs;
};

struct SweepResult {
  std::string axis_name;
  DisorderTarget target = DisorderTarget::none;
  double K = 0.0;
  int n_periods = 0;
  std::vector<SweepPoint> points;
};

/// n_realizations disorder draws per delta. Realization r uses stream r of
/// the master seed at every delta (common random numbers), so the offsets
/// scale linearly with delta; at delta = 0 they coincide and one run is
/// shared by all realizations.
SweepResult run_disorder_sweep(const PumpConfig& base, const std::vector<double>& deltas, DisorderTarget target,
                               double K, int n_realizations, int n_periods = 3);

SweepResult run_frequency_sweep(const PumpConfig& base, const std::vector<double>& omegas, double K,
                                int n_periods = 9);

/// 25 log-spaced frequencies in [0.01, 0.6].
std::vector<double> default_omegas();

struct BandCheck {
  int filling = 1;
  double K = 0.0;
  std::vector<double> displacement;
  double fidelity = 0.0;
  double overlap2 = 0.0;
  /// max_n |d_n - 3 round(d_n / 3)|
  double quantization_error = 0.0;
};

/// Runs filling 1 and 2 at K = 0 and at the given K.
std::vector<BandCheck> run_interaction_band_check(const PumpConfig& base, double K, int n_periods = 3);

struct Table1Entry {
  ModelKind kind;
  Regime regime;
  double time = 0.0;
  double overlap2 = 0.0;
};

/// The six analytic states against numeric eigenstates of H(t) at the drive
/// phase where the state applies: omega t = 4 pi / 3 (second site of each
/// trimer carries the largest G) and 5 pi / 3 (first and second sites tie).
std::vector<Table1Entry> table1_check(const DriveParams& p, double J);

// Output

void write_trajectory_csv(const std::filesystem::path& file, const ResultRecord& rec);
nlohmann::json manifest_json(const Config& cfg, const PumpConfig& pc, const ResultRecord& rec);
void write_sweep_csv(const std::filesystem::path& file, const SweepResult& res, const std::string& config_hash);
nlohmann::json sweep_json(const Config& cfg, const SweepResult& res);
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

}  // namespace tpump
