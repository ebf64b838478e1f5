#include "tpump/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "tpump/errors.hpp"

namespace tpump {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::span<const cplx> as_span(const StateVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

template <class Job>
void run_jobs(std::size_t n_jobs, int workers, Job&& job) {
  const auto n = static_cast<std::int64_t>(n_jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::int64_t i = 0; i < n; ++i) job(static_cast<std::size_t>(i));
}

void summarize(SweepPoint& pt) {
  std::vector<double> f;
  for (const auto& r : pt.runs) {
    if (r.ok) f.push_back(r.fidelity);
  }
  pt.count = f.size();
  pt.failures = pt.runs.size() - f.size();
  if (f.empty()) {
    pt.mean = pt.stddev = pt.stderr_mean = pt.min = pt.max = std::nan("");
    return;
  }
  double sum = 0.0;
  for (double v : f) sum += v;
  pt.mean = sum / static_cast<double>(f.size());
  double ss = 0.0;
  for (double v : f) ss += (v - pt.mean) * (v - pt.mean);
  pt.stddev = f.size() > 1 ? std::sqrt(ss / static_cast<double>(f.size() - 1)) : 0.0;
  pt.stderr_mean = pt.stddev / std::sqrt(static_cast<double>(f.size()));
  const auto [lo, hi] = std::ranges::minmax(f);
  pt.min = lo;
  pt.max = hi;
}

RealizationRecord run_one(const PumpConfig& c, std::size_t index, std::uint64_t seed) {
  RealizationRecord r;
  r.index = index;
  r.seed = seed;
  try {
    const ResultRecord rec = pump_run(c);
    r.fidelity = rec.fidelity;
    r.overlap2 = rec.overlap2;
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

PumpConfig sweep_member(const PumpConfig& base, double K, int n_periods, int workers) {
  PumpConfig c = base;
  c.model.K = K;
  c.n_periods = n_periods;
  c.observe = false;
  c.entropy = false;
  c.track_position = false;
  if (workers > 1) c.policy.exec = Exec::serial;
  return c;
}

}  // namespace

ModelSpec model_spec(const Config& cfg) {
  ModelSpec s;
  s.kind = parse_model_kind(cfg.get("model"));
  s.r = static_cast<int>(cfg.integer("r"));
  s.J = cfg.number("J");
  s.K = cfg.number("K");
  const DisorderTarget target = parse_disorder_target(cfg.get("disorder_target"));
  const double delta = cfg.number("disorder_delta");
  if (delta < 0.0) throw ConfigError("disorder_delta must be non-negative");
  if (target != DisorderTarget::none) {
    s = apply_disorder(s, target, delta, split_seed(cfg.unsigned_integer("seed"), 0),
                       static_cast<std::size_t>(cfg.integer("n_sites")));
  }
  return s;
}

DriveParams drive_params(const Config& cfg) {
  DriveParams p;
  const long n = cfg.integer("n_sites");
  if (n < 2) throw ConfigError("n_sites must be at least 2");
  p.n_sites = static_cast<std::size_t>(n);
  p.g0 = cfg.number("g0");
  p.g1 = cfg.number("g1");
  p.omega = cfg.number("omega");
  p.phi0 = cfg.number("phi0");
  p.b = Rational::parse(cfg.get("b"));
  p.validate();
  return p;
}

IntegratorPolicy integrator_policy(const Config& cfg) {
  IntegratorPolicy pol;
  pol.method = parse_integrator_method(cfg.get("integrator"));
  pol.max_dt = cfg.number("max_dt");
  pol.krylov_tol = cfg.number("krylov_tol");
  pol.krylov_dim = static_cast<int>(cfg.integer("krylov_dim"));
  pol.renormalize_every = static_cast<int>(cfg.integer("renormalize_every"));
  pol.samples_per_period = static_cast<int>(cfg.integer("samples_per_period"));
  if (!(pol.max_dt > 0.0)) throw ConfigError("max_dt must be positive");
  if (!(pol.krylov_tol > 0.0)) throw ConfigError("krylov_tol must be positive");
  if (pol.samples_per_period < 1) throw ConfigError("samples_per_period must be positive");
  return pol;
}

PumpConfig pump_config(const Config& cfg) {
  PumpConfig pc;
  pc.model = model_spec(cfg);
  pc.drive = drive_params(cfg);
  pc.policy = integrator_policy(cfg);
  pc.n_periods = static_cast<int>(cfg.integer("n_periods"));
  pc.filling = static_cast<int>(cfg.integer("filling"));
  pc.entropy = cfg.flag("entropy");
  pc.seed = cfg.unsigned_integer("seed");
  pc.config_hash = cfg.hash();
  return pc;
}

StateVector band_reference(const TimeDependentHamiltonian& H, const ModelSpec& spec, int filling) {
  const DriveParams& p = H.params();
  const std::size_t n = p.n_sites;
  if (filling < 1 || filling >= p.b.q) {
    throw ConfigError("filling must lie between 1 and " + std::to_string(p.b.q - 1));
  }
  const bool table = filling == 1 && spec.kind != ModelKind::higher_r && p.b.p == 1 && p.b.q == 3;
  if (table) return translate(analytic_state(spec.kind, Regime::away, n), -1);
  const int n_exc = filling * static_cast<int>(n) / p.b.q;
  const SectorEigen se = sector_eigensystem(H, spec.kind, spec.r, n_exc, 0.0);
  if (se.energies.size() == 0) throw PreparationError("empty excitation sector");
  return se.states.col(0);
}

ResultRecord pump_run(const PumpConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.n_periods < 1) throw ConfigError("n_periods must be positive");
  const TimeDependentHamiltonian H = build_model(cfg.model, cfg.drive);
  const std::size_t n = cfg.drive.n_sites;
  const int r = cfg.model.r;
  const ModelKind kind = cfg.model.kind;
  const double cells = static_cast<double>(n) / cfg.drive.b.q;

  ResultRecord rec;
  rec.config_hash = cfg.config_hash;
  rec.g_offsets = H.g_offsets();
  if (cfg.model.disorder.target == DisorderTarget::J) rec.j_offsets = cfg.model.disorder.offsets;

  const Prepared prep = prepare_initial_state(H.matrix(0.0), band_reference(H, cfg.model, cfg.filling));
  rec.overlap2 = prep.overlap2;
  rec.energy = prep.energy;
  rec.degeneracy = prep.degeneracy;

  std::vector<PauliString> strings;
  for (int j = 0; j < static_cast<int>(n); ++j) strings.push_back(drive_observable(kind, n, j, r));
  for (int j = 0; j < static_cast<int>(n); ++j) strings.push_back(bond_observable(kind, n, j, r));
  const CompiledSum obs(n, strings);
  const CompiledSum wind(winding_op(kind, n, r));
  const std::vector<cplx> wc(wind.coefficients().begin(), wind.coefficients().end());
  const Exec exec = cfg.policy.exec;
  auto winding = [&](const StateVector& psi) {
    const std::vector<cplx> e = wind.string_expectations(as_span(psi), exec);
    cplx z{};
    for (std::size_t k = 0; k < e.size(); ++k) z += wc[k] * e[k];
    return z;
  };
  const Partition p1 = Partition::first_trimer(n);
  const Partition p2 = Partition::trimer_heads(n);
  const double x0 = expectation(position_op(kind, n, r), prep.state);
  const auto spp = static_cast<std::size_t>(cfg.policy.samples_per_period);
  cplx prev = cfg.track_position ? winding(prep.state) : cplx{1.0};
  double theta = 0.0;

  auto on_sample = [&](std::size_t k, double t, const StateVector& psi) {
    const double nrm = psi.norm();
    rec.max_norm_drift = std::max(rec.max_norm_drift, std::abs(nrm - 1.0));
    if (k > 0 && cfg.track_position) {
      const cplx z = winding(psi);
      if (std::abs(z) < 1e-8) throw NumericalError("winding expectation vanished at t = " + std::to_string(t));
      theta += std::arg(z / prev);
      prev = z;
    }
    const double x = x0 + static_cast<double>(n) * theta / kTwoPi;
    if (cfg.track_position && k > 0 && k % spp == 0) rec.displacement.push_back((x - x0) / cells);
    if (!cfg.observe) return;
    PumpSample s;
    s.t = t;
    s.x = x;
    s.norm = nrm;
    const std::vector<cplx> e = obs.string_expectations(as_span(psi), exec);
    s.X.resize(n);
    s.Y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      s.X[j] = e[j].real();
      s.Y[j] = e[n + j].real();
    }
    if (cfg.entropy) {
      s.s1 = entanglement_entropy(psi, p1, true);
      s.s2 = entanglement_entropy(psi, p2, true);
    }
    rec.samples.push_back(std::move(s));
  };

  const Trajectory tr = evolve(H, prep.state, cfg.n_periods * cfg.drive.period(), cfg.policy, on_sample);
  rec.fidelity = fidelity(prep.state, tr.final_state);
  rec.diag = tr.diag;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

SweepResult run_disorder_sweep(const PumpConfig& base, const std::vector<double>& deltas, DisorderTarget target,
                               double K, int n_realizations, int n_periods) {
  if (n_realizations < 1) throw ConfigError("n_realizations must be at least 1");
  if (target == DisorderTarget::none) throw ConfigError("disorder sweep needs target G or J");
  for (double d : deltas) {
    if (d < 0.0) throw ConfigError("disorder half-widths must be non-negative");
  }
  const int workers = worker_count();
  const PumpConfig member = sweep_member(base, K, n_periods, workers);
  const auto nr = static_cast<std::size_t>(n_realizations);
  SweepResult res;
  res.axis_name = "delta";
  res.target = target;
  res.K = K;
  res.n_periods = n_periods;
  res.points.resize(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    res.points[i].axis = deltas[i];
    res.points[i].runs.resize(nr);
  }
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t r = 0; r < (deltas[i] == 0.0 ? 1 : nr); ++r) jobs.emplace_back(i, r);
  }
  run_jobs(jobs.size(), workers, [&](std::size_t job) {
    const auto [i, r] = jobs[job];
    PumpConfig c = member;
    const std::uint64_t seed = split_seed(base.seed, r);
    c.model = apply_disorder(c.model, target, deltas[i], seed, c.drive.n_sites);
    res.points[i].runs[r] = run_one(c, r, seed);
  });
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] != 0.0) continue;
    for (std::size_t r = 1; r < nr; ++r) {
      RealizationRecord& rec = res.points[i].runs[r];
      rec = res.points[i].runs[0];
      rec.index = r;
      rec.seed = split_seed(base.seed, r);
    }
  }
  for (auto& pt : res.points) summarize(pt);
  return res;
}

std::vector<double> default_omegas() {
  std::vector<double> w;
  const double lo = std::log(0.01), hi = std::log(0.6);
  for (int i = 0; i < 25; ++i) w.push_back(std::exp(lo + (hi - lo) * i / 24.0));
  return w;
}

SweepResult run_frequency_sweep(const PumpConfig& base, const std::vector<double>& omegas, double K,
                                int n_periods) {
  for (double w : omegas) {
    if (!(w > 0.0)) throw ConfigError("frequencies must be positive");
  }
  const int workers = worker_count();
  const PumpConfig member = sweep_member(base, K, n_periods, workers);
  SweepResult res;
  res.axis_name = "omega";
  res.target = base.model.disorder.target;
  res.K = K;
  res.n_periods = n_periods;
  res.points.resize(omegas.size());
  run_jobs(omegas.size(), workers, [&](std::size_t i) {
    PumpConfig c = member;
    c.drive.omega = omegas[i];
    res.points[i].axis = omegas[i];
    res.points[i].runs = {run_one(c, 0, base.seed)};
  });
  for (auto& pt : res.points) summarize(pt);
  return res;
}

std::vector<BandCheck> run_interaction_band_check(const PumpConfig& base, double K, int n_periods) {
  if (base.model.kind != ModelKind::spin_flip) {
    throw ConfigError("the interaction band check runs on the spin_flip model");
  }
  struct Job {
    double K;
    int filling;
  };
  const std::vector<Job> jobs = {{0.0, 1}, {0.0, 2}, {K, 1}, {K, 2}};
  const int workers = worker_count();
  std::vector<BandCheck> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  run_jobs(jobs.size(), workers, [&](std::size_t i) {
    PumpConfig c = base;
    c.model.K = jobs[i].K;
    c.filling = jobs[i].filling;
    c.n_periods = n_periods;
    c.observe = false;
    c.entropy = false;
    c.track_position = true;
    if (workers > 1) c.policy.exec = Exec::serial;
    try {
      const ResultRecord rec = pump_run(c);
      BandCheck& b = out[i];
      b.filling = c.filling;
      b.K = c.model.K;
      b.displacement = rec.displacement;
      b.fidelity = rec.fidelity;
      b.overlap2 = rec.overlap2;
      const double q = c.drive.b.q;
      for (double d : rec.displacement) {
        b.quantization_error = std::max(b.quantization_error, std::abs(d - q * std::round(d / q)));
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericalError("interaction band check failed: " + e);
  }
  return out;
}

std::vector<Table1Entry> table1_check(const DriveParams& p, double J) {
  if (p.b.p != 1 || p.b.q != 3) throw ConfigError("the analytic band states need b = 1/3");
  std::vector<Table1Entry> out;
  for (ModelKind kind : {ModelKind::spin_flip, ModelKind::kink, ModelKind::cluster}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.J = J;
    const TimeDependentHamiltonian H = build_model(spec, p);
    for (Regime regime : {Regime::away, Regime::at}) {
      const double phase = regime == Regime::away ? 4.0 * std::numbers::pi / 3.0 : 5.0 * std::numbers::pi / 3.0;
      double t = std::fmod(phase - p.phi0, kTwoPi);
      if (t < 0.0) t += kTwoPi;
      t /= p.omega;
      const Prepared prep = prepare_initial_state(H.matrix(t), analytic_state(kind, regime, p.n_sites), 0.0);
      out.push_back({kind, regime, t, prep.overlap2});
    }
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& file, const ResultRecord& rec) {
  std::ofstream f(file);
  if (!f) throw ResourceError("cannot write " + file.string());
  f << "# config_hash=" << rec.config_hash << "\n";
  f << "t,j,X_j,Y_j,x,S_partition1,S_partition2,norm\n";
  for (const auto& s : rec.samples) {
    for (std::size_t j = 0; j < s.X.size(); ++j) {
      f << fmt::format("{:.12g},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.15g}\n", s.t, j + 1, s.X[j], s.Y[j],
                       s.x, s.s1, s.s2, s.norm);
    }
  }
  if (!f) throw ResourceError("write failed for " + file.string());
}

namespace {

nlohmann::json config_json(const Config& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : cfg.values()) j[k] = v;
  return j;
}

const char* kG0Note = "g0 defaults to 10 J for every run, sweeps included";

}  // namespace

nlohmann::json manifest_json(const Config& cfg, const PumpConfig& pc, const ResultRecord& rec) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = cfg.hash();
  j["config"] = config_json(cfg);
  j["master_seed"] = pc.seed;
  j["disorder"] = {{"target", to_string(pc.model.disorder.target)},
                   {"delta", pc.model.disorder.delta},
                   {"stream_seed", pc.model.disorder.seed},
                   {"g_offsets", rec.g_offsets},
                   {"j_offsets", rec.j_offsets}};
  j["preparation"] = {{"overlap2", rec.overlap2}, {"energy", rec.energy}, {"degeneracy", rec.degeneracy}};
  j["displacement_per_trimer"] = rec.displacement;
  j["fidelity"] = rec.fidelity;
  j["max_norm_drift"] = rec.max_norm_drift;
  j["integrator"] = {{"method", to_string(pc.policy.method)},
                     {"max_dt", pc.policy.max_dt},
                     {"steps", rec.diag.steps},
                     {"matvecs", rec.diag.matvecs},
                     {"krylov_substeps", rec.diag.krylov_substeps},
                     {"max_krylov_error", rec.diag.max_krylov_error}};
  j["wall_seconds"] = rec.wall_seconds;
  j["notes"] = {kG0Note};
  return j;
}

void write_sweep_csv(const std::filesystem::path& file, const SweepResult& res, const std::string& config_hash) {
  std::ofstream f(file);
  if (!f) throw ResourceError("cannot write " + file.string());
  f << "# config_hash=" << config_hash << "\n";
  f << res.axis_name << ",realization,seed,fidelity,overlap2,status\n";
  for (const auto& pt : res.points) {
    for (const auto& r : pt.runs) {
      f << fmt::format("{:.12g},{},{},{:.12g},{:.12g},{}\n", pt.axis, r.index, r.seed, r.fidelity, r.overlap2,
                       r.ok ? "ok" : "failed");
    }
  }
  if (!f) throw ResourceError("write failed for " + file.string());
}

nlohmann::json sweep_json(const Config& cfg, const SweepResult& res) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = cfg.hash();
  j["config"] = config_json(cfg);
  j["axis"] = res.axis_name;
  j["target"] = to_string(res.target);
  j["K"] = res.K;
  j["n_periods"] = res.n_periods;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& pt : res.points) {
    nlohmann::json p;
    p[res.axis_name] = pt.axis;
    p["mean"] = pt.mean;
    p["stddev"] = pt.stddev;
    p["stderr"] = pt.stderr_mean;
    p["min"] = pt.min;
    p["max"] = pt.max;
    p["count"] = pt.count;
    p["failures"] = pt.failures;
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& r : pt.runs) {
      if (!r.ok) errs.push_back({{"realization", r.index}, {"error", r.error}});
    }
    p["errors"] = errs;
    pts.push_back(p);
  }
  j["points"] = pts;
  j["notes"] = {kG0Note};
  return j;
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j) {
  std::ofstream f(file);
  if (!f) throw ResourceError("cannot write " + file.string());
  f << j.dump(2) << "\n";
  if (!f) throw ResourceError("write failed for " + file.string());
}

}  // namespace tpump
