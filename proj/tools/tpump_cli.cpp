// tpump: command-line front end.
//
//   tpump <subcommand> [--config FILE] [--<key> VALUE ...]
//
// Exit status: 0 success, 1 check failed, 2 configuration or usage error,
// 3 numerical error, 4 resource error, 5 any other failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "tpump/config.hpp"
#include "tpump/errors.hpp"
#include "tpump/harness.hpp"
#include "tpump/topology.hpp"

namespace fs = std::filesystem;
using namespace tpump;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfig = 2, kNumerical = 3, kResource = 4, kOther = 5 };

struct Command {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
};

Config resolve(const Command& cmd) {
  Config cfg = cmd.config_file.empty() ? Config() : Config::load(cmd.config_file);
  for (const auto& [key, opt] : cmd.options) {
    if (opt->count() > 0) cfg.set(key, cmd.flags.at(key));
  }
  return cfg;
}

fs::path output_dir(const Config& cfg) {
  const fs::path dir = cfg.get("output_dir");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ResourceError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string fmt_list(const std::vector<double>& v) { return fmt::format("[{:.4f}]", fmt::join(v, ", ")); }

int cmd_pump(const Config& cfg) {
  const PumpConfig pc = pump_config(cfg);
  const ResultRecord rec = pump_run(pc);
  const fs::path dir = output_dir(cfg);
  write_trajectory_csv(dir / "trajectory.csv", rec);
  write_json(dir / "manifest.json", manifest_json(cfg, pc, rec));
  std::cout << fmt::format("pump {} N={} periods={} overlap2={:.6f} displacement/trimer={} fidelity={:.8f} -> {}\n",
                           to_string(pc.model.kind), pc.drive.n_sites, pc.n_periods, rec.overlap2,
                           fmt_list(rec.displacement), rec.fidelity, dir.string());
  return kOk;
}

int cmd_disorder(const Config& cfg) {
  const PumpConfig pc = pump_config(cfg);
  DisorderTarget target = parse_disorder_target(cfg.get("disorder_target"));
  if (target == DisorderTarget::none) target = DisorderTarget::G;
  const SweepResult res = run_disorder_sweep(pc, cfg.numbers("deltas"), target, cfg.number("K"),
                                             static_cast<int>(cfg.integer("n_realizations")),
                                             static_cast<int>(cfg.integer("disorder_periods")));
  const fs::path dir = output_dir(cfg);
  const std::string stem = fmt::format("disorder_{}_K{}", to_string(target), cfg.get("K"));
  write_sweep_csv(dir / (stem + ".csv"), res, cfg.hash());
  write_json(dir / (stem + ".json"), sweep_json(cfg, res));
  std::string means;
  for (const auto& p : res.points) means += fmt::format(" {:g}:{:.3f}", p.axis, p.mean);
  std::cout << fmt::format("disorder target={} K={} mean F by delta:{} -> {}\n", to_string(target), res.K, means,
                           dir.string());
  return kOk;
}

int cmd_frequency(const Config& cfg) {
  const PumpConfig pc = pump_config(cfg);
  std::vector<double> omegas = cfg.numbers("omegas");
  if (omegas.empty()) omegas = default_omegas();
  const SweepResult res =
      run_frequency_sweep(pc, omegas, cfg.number("K"), static_cast<int>(cfg.integer("frequency_periods")));
  const fs::path dir = output_dir(cfg);
  write_sweep_csv(dir / "frequency.csv", res, cfg.hash());
  write_json(dir / "frequency.json", sweep_json(cfg, res));
  std::string fs_;
  for (const auto& p : res.points) fs_ += fmt::format(" {:.3g}:{:.3f}", p.axis, p.mean);
  std::cout << fmt::format("frequency K={} F by omega:{} -> {}\n", res.K, fs_, dir.string());
  return kOk;
}

int cmd_chern(const Config& cfg) {
  const std::string fam_name = cfg.get("chern_family");
  BlochFamily fam;
  const Rational b = Rational::parse(cfg.get("b"));
  if (fam_name == "hofstadter") {
    fam = BlochFamily::hofstadter(cfg.number("Jx"), cfg.number("Jy"), b);
  } else if (fam_name == "aubry_andre") {
    DriveParams d = drive_params(cfg);
    fam = BlochFamily::aubry_andre(aa_from_drive(d, cfg.number("J")));
  } else {
    throw ConfigError("unknown chern_family '" + fam_name + "'");
  }
  ChernOptions opt;
  opt.grid = static_cast<int>(cfg.integer("grid"));
  const long band = cfg.integer("band");
  std::vector<ChernResult> res;
  if (band < 0) {
    res = chern_numbers(fam, opt);
  } else {
    res = {chern_number(fam, static_cast<int>(band), opt)};
  }
  const fs::path dir = output_dir(cfg);
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = cfg.hash();
  j["family"] = fam_name;
  j["b"] = b.str();
  j["grid"] = opt.grid;
  nlohmann::json bands = nlohmann::json::array();
  int total = 0;
  for (const auto& r : res) {
    bands.push_back({{"band", r.band}, {"chern", r.chern}, {"raw", r.raw}, {"residual", r.residual},
                     {"min_gap", r.min_gap}});
    total += r.chern;
    std::ofstream f(dir / fmt::format("curvature_band{}.csv", r.band));
    if (!f) throw ResourceError("cannot write curvature grid");
    f << "# config_hash=" << cfg.hash() << "\n" << "i,k,j,phase,field\n";
    for (int a = 0; a < r.grid; ++a) {
      for (int c = 0; c < r.grid; ++c) {
        f << fmt::format("{},{:.12g},{},{:.12g},{:.12g}\n", a, 2.0 * std::numbers::pi * a / r.grid, c,
                         2.0 * std::numbers::pi * c / r.grid,
                         r.curvature[static_cast<std::size_t>(a * r.grid + c)]);
      }
    }
  }
  j["bands"] = bands;
  if (res.size() == 1) {
    j["chern"] = res[0].chern;
    j["residual"] = res[0].residual;
  } else {
    j["sum"] = total;
  }
  write_json(dir / "chern.json", j);
  for (const auto& r : res) {
    std::cout << fmt::format("chern {} b={} band {}: C = {} (raw {:.6f}, residual {:.2e}, min gap {:.4f})\n",
                             fam_name, b.str(), r.band, r.chern, r.raw, r.residual, r.min_gap);
  }
  return kOk;
}

int cmd_spectrum(const Config& cfg) {
  const ModelSpec spec = model_spec(cfg);
  const DriveParams p = drive_params(cfg);
  const TimeDependentHamiltonian H = build_model(spec, p);
  const long ns = cfg.integer("spectrum_samples");
  if (ns < 3) throw ConfigError("spectrum_samples must be at least 3");
  std::vector<double> times;
  for (long i = 0; i <= ns; ++i) times.push_back(p.period() * static_cast<double>(i) / static_cast<double>(ns));
  const int n_exc = static_cast<int>(cfg.integer("excitations"));
  const SectorSpectrum s = instantaneous_band_spectrum(H, spec.kind, spec.r, n_exc, times);
  const fs::path dir = output_dir(cfg);
  std::ofstream f(dir / "spectrum.csv");
  if (!f) throw ResourceError("cannot write spectrum.csv");
  f << "# config_hash=" << cfg.hash() << "\n" << "t,level,energy,gap,tracked\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    for (std::size_t l = 0; l < s.energies[i].size(); ++l) {
      f << fmt::format("{:.12g},{},{:.12g},{:.12g},{:.12g}\n", s.times[i], l, s.energies[i][l], s.gap[i],
                       s.tracked[i]);
    }
  }
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = cfg.hash();
  j["model"] = to_string(spec.kind);
  j["excitations"] = n_exc;
  j["min_gap"] = s.min_gap;
  j["gap_minima"] = s.gap_minima;
  write_json(dir / "spectrum.json", j);
  std::cout << fmt::format("spectrum {} sector N={} min gap {:.6f} at {} anti-crossings -> {}\n",
                           to_string(spec.kind), n_exc, s.min_gap, s.gap_minima.size(), dir.string());
  return kOk;
}

int cmd_dualize(const Config& cfg) {
  const ModelSpec spec = model_spec(cfg);
  const DriveParams p = drive_params(cfg);
  const TimeDependentHamiltonian H = build_model(spec, p);
  const TransformChain chain = chain_from_flip(spec.kind, spec.r);
  const TransformChain back = chain.inverse();
  const std::size_t n = p.n_sites;
  OperatorSum drive_model(n), drive_flip(n);
  for (const auto& d : H.driven_terms()) {
    drive_model.add(d.sign, d.op);
    drive_flip.add(d.sign, back.apply(d.op));
  }
  const OperatorSum static_flip = back.apply(H.static_part());
  std::cout << "model:      " << to_string(spec.kind) << (spec.kind == ModelKind::higher_r ? fmt::format(" r={}", spec.r) : "")
            << "\n";
  std::cout << "chain:      " << (chain.empty() ? std::string("identity") : chain.str()) << "\n";
  std::cout << "static:     " << to_string(H.static_part()) << "\n";
  std::cout << "driven/G:   " << to_string(drive_model.canonical()) << "\n";
  std::cout << "flip image: static " << to_string(static_flip.canonical()) << "\n";
  std::cout << "            driven/G " << to_string(drive_flip.canonical()) << "\n";
  const fs::path dir = output_dir(cfg);
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = cfg.hash();
  j["model"] = to_string(spec.kind);
  j["chain"] = chain.str();
  j["static"] = to_string(H.static_part());
  j["driven"] = to_string(drive_model.canonical());
  j["flip_static"] = to_string(static_flip.canonical());
  j["flip_driven"] = to_string(drive_flip.canonical());
  write_json(dir / "dualize.json", j);
  return kOk;
}

int cmd_table1(const Config& cfg) {
  const DriveParams p = drive_params(cfg);
  const std::vector<Table1Entry> rows = table1_check(p, cfg.number("J"));
  nlohmann::json arr = nlohmann::json::array();
  bool pass = true;
  for (const auto& r : rows) {
    const bool ok = r.overlap2 > 0.95;
    pass = pass && ok;
    const char* regime = r.regime == Regime::away ? "away" : "at";
    std::cout << fmt::format("table1 {:<9} {:<4} t={:9.4f} overlap2={:.6f} {}\n", to_string(r.kind), regime, r.time,
                             r.overlap2, ok ? "ok" : "LOW");
    arr.push_back({{"model", to_string(r.kind)}, {"regime", regime}, {"t", r.time}, {"overlap2", r.overlap2},
                   {"pass", ok}});
  }
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = cfg.hash();
  j["threshold"] = 0.95;
  j["entries"] = arr;
  j["pass"] = pass;
  write_json(output_dir(cfg) / "table1.json", j);
  return pass ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological pumping of spin-flip, kink and cluster excitations"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"pump", "evolve one band state and write its trajectory"},
      {"disorder", "fidelity after a few periods versus disorder strength"},
      {"frequency", "fidelity after several periods versus drive frequency"},
      {"chern", "lattice Chern numbers of the Hofstadter or Aubry-Andre bands"},
      {"spectrum", "instantaneous spectrum of an excitation-count sector over one period"},
      {"dualize", "show a model, its transform chain and its spin-flip image"},
      {"table1-check", "overlaps of the six analytic eigenstates with numerics"},
  };
  std::vector<Command> cmds(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    Command& c = cmds[i];
    c.app = app.add_subcommand(subs[i].first, subs[i].second);
    c.app->add_option("--config", c.config_file, "key = value config file")->check(CLI::ExistingFile);
    for (const auto& key : config_keys()) {
      c.options[key.name] = c.app->add_option("--" + key.name, c.flags[key.name], key.help);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!cmds[i].app->parsed()) continue;
      const Config cfg = resolve(cmds[i]);
      const std::string& name = subs[i].first;
      if (name == "pump") return cmd_pump(cfg);
      if (name == "disorder") return cmd_disorder(cfg);
      if (name == "frequency") return cmd_frequency(cfg);
      if (name == "chern") return cmd_chern(cfg);
      if (name == "spectrum") return cmd_spectrum(cfg);
      if (name == "dualize") return cmd_dualize(cfg);
      if (name == "table1-check") return cmd_table1(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
