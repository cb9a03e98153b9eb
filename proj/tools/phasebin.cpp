#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasebin/analytic_states.hpp"
#include "phasebin/binning.hpp"
#include "phasebin/bose_hubbard.hpp"
#include "phasebin/diagnostics.hpp"
#include "phasebin/fock_oracle.hpp"
#include "phasebin/parallel.hpp"
#include "phasebin/phase_space.hpp"
#include "phasebin/quadrature.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phasebin;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::size_t ntraj = 10000000;
  int threads = 0;
  std::string out = "out";
  std::string format = "csv";
};

struct StateSpec {
  std::string kind = "coherent";
  double nbar = 10.0;
  double beta2 = 50.0;
  double phi = 0.0;
  double s = 0.0;
  double theta = 0.0;

  json to_json() const {
    return {{"state", kind}, {"nbar", nbar}, {"beta2", beta2}, {"phi", phi}, {"s", s}, {"theta", theta}};
  }
};

void add_state_options(CLI::App* cmd, StateSpec& spec) {
  cmd->add_option("--state", spec.kind, "vacuum | coherent | thermal | squeezed")
      ->check(CLI::IsMember({"vacuum", "coherent", "thermal", "squeezed"}));
  cmd->add_option("--nbar", spec.nbar, "thermal mean occupation");
  cmd->add_option("--beta2", spec.beta2, "|beta|^2 of the displacement");
  cmd->add_option("--phi", spec.phi, "displacement phase");
  cmd->add_option("--s", spec.s, "squeezing magnitude");
  cmd->add_option("--theta", spec.theta, "squeezing angle");
}

SqueezedCoherentParams squeezed_params(const StateSpec& spec) {
  return {std::sqrt(spec.beta2), spec.phi, spec.kind == "squeezed" ? spec.s : 0.0, spec.theta};
}

GaussianWignerState make_state(const StateSpec& spec) {
  if (spec.kind == "vacuum") return GaussianWignerState::vacuum();
  if (spec.kind == "thermal") return GaussianWignerState::thermal(spec.nbar);
  if (spec.kind == "coherent") return GaussianWignerState::coherent(PhaseAmplitude::polar(std::sqrt(spec.beta2), spec.phi));
  return to_state(squeezed_params(spec));
}

NumberDistribution analytic_pn(const StateSpec& spec, int n_max) {
  if (spec.kind == "vacuum") return pn_poisson(0.0, n_max);
  if (spec.kind == "thermal") return pn_thermal(spec.nbar, n_max);
  if (spec.kind == "coherent") return pn_poisson(spec.beta2, n_max);
  return pn_squeezed_coherent(squeezed_params(spec), n_max);
}

int default_n_max(const StateSpec& spec) {
  if (spec.kind == "squeezed") return squeezed_auto_n_max(squeezed_params(spec));
  return auto_n_max(make_state(spec));
}

/// Collects output paths and warnings; writes the manifest at the end.
class Run {
 public:
  Run(std::string command, const Globals& g, std::vector<std::string> argv)
      : command_(std::move(command)), globals_(g), argv_(std::move(argv)) {
    fs::create_directories(globals_.out);
  }

  fs::path path(const std::string& name) const { return fs::path(globals_.out) / name; }
  std::string ext() const { return globals_.format == "json" ? ".json" : ".csv"; }

  std::ofstream open(const std::string& name) {
    outputs_.push_back(name);
    std::ofstream f(path(name));
    if (!f) throw std::runtime_error("cannot write " + path(name).string());
    return f;
  }

  void warn(const std::string& w) {
    if (!w.empty()) warnings_.push_back(w);
  }

  json& config() { return config_; }

  void finish(const std::string& status) {
    json manifest = {{"command", command_},
                     {"argv", argv_},
                     {"version", PHASEBIN_VERSION},
                     {"seed", globals_.seed},
                     {"ntraj", globals_.ntraj},
                     {"threads", globals_.threads},
                     {"format", globals_.format},
                     {"config", config_},
                     {"outputs", outputs_},
                     {"warnings", warnings_},
                     {"status", status}};
    std::ofstream f(path("manifest.json"));
    f << manifest.dump(2) << '\n';
  }

 private:
  std::string command_;
  Globals globals_;
  std::vector<std::string> argv_;
  json config_ = json::object();
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
};

json dist_json(const NumberDistribution& d) {
  json j = {{"method", to_string(d.method)}, {"n_max", d.n_max()}, {"samples", d.samples},
            {"overflow", d.overflow},        {"p", d.probs},       {"metadata", d.metadata}};
  if (d.std_error) j["stderr"] = *d.std_error;
  return j;
}

void write_dist(Run& run, const std::string& stem, const NumberDistribution& d) {
  auto f = run.open(stem + run.ext());
  if (run.ext() == ".json") {
    f << dist_json(d).dump(2) << '\n';
  } else {
    write_distribution_csv(f, d);
  }
}

void write_profile(Run& run, const std::string& stem, const RadialProfile& p) {
  auto f = run.open(stem + run.ext());
  if (run.ext() == ".json") {
    json l = json::array();
    for (double v : p.l_inh) l.push_back(std::isinf(v) ? json("inf") : json(v));
    f << json({{"source", to_string(p.source)}, {"r", p.r}, {"w", p.w}, {"l_inh", l}}).dump(2) << '\n';
  } else {
    write_profile_csv(f, p);
  }
}

// ---------------------------------------------------------------------------

struct PnOptions {
  StateSpec state;
  std::vector<std::string> methods = {"binned", "quadrature", "wigner-average", "analytic"};
  int n_max = -1;
};

void cmd_pn(Run& run, const Globals& g, const PnOptions& o) {
  for (const auto& m : o.methods) method_from_string(m);
  const auto state = make_state(o.state);
  const int n_max = o.n_max >= 0 ? o.n_max : default_n_max(o.state);
  run.config() = o.state.to_json();
  run.config()["methods"] = o.methods;
  run.config()["n_max"] = n_max;

  std::map<std::string, NumberDistribution> dists;
  TrajectoryEnsemble ensemble;
  auto samples = [&]() -> const TrajectoryEnsemble& {
    if (ensemble.count() == 0) ensemble = sample(state, g.ntraj, g.seed);
    return ensemble;
  };
  for (const auto& m : o.methods) {
    switch (method_from_string(m)) {
      case Method::Binned: dists[m] = bin_ensemble(samples(), 0, {n_max}); break;
      case Method::WignerAverage: dists[m] = pn_wigner_average(samples(), n_max).dist; break;
      case Method::Analytic: dists[m] = analytic_pn(o.state, n_max); break;
      case Method::Quadrature: {
        auto q = pn_quadrature(state, n_max);
        if (!q.failed_entries.empty()) {
          run.warn("quadrature did not converge for " + std::to_string(q.failed_entries.size()) + " entries");
        }
        dists[m] = std::move(q.dist);
        break;
      }
    }
    write_dist(run, "pn_" + m, dists[m]);
  }

  // Deterministic binned law for reference: closed form where it exists, quadrature otherwise.
  const NumberDistribution binned_exact =
      (state.isotropic() && state.beta().norm2() == 0.0) ? pn_binned_analytic(state, n_max)
                                                         : pn_binned_quadrature(state, n_max);
  json summary = json::array();
  auto add_pair = [&](const std::string& a, const std::string& b, const NumberDistribution& p,
                      const NumberDistribution& q) {
    const auto r = bhattacharyya(p, q);
    run.warn(r.warning.empty() ? "" : a + " vs " + b + ": " + r.warning);
    summary.push_back({{"p", a}, {"q", b}, {"coefficient", r.coefficient}, {"distance", r.distance}});
  };
  for (auto i = dists.begin(); i != dists.end(); ++i) {
    for (auto j = std::next(i); j != dists.end(); ++j) add_pair(i->first, j->first, i->second, j->second);
  }
  const auto& reference = dists.count("analytic") ? dists.at("analytic") : analytic_pn(o.state, n_max);
  add_pair("analytic", "binned-exact", reference, binned_exact);
  if (o.state.kind == "thermal") {
    summary.push_back({{"p", "analytic"}, {"q", "binned-closed-form"}, {"distance", db_thermal(o.state.nbar)}});
  }
  auto f = run.open("db_summary.json");
  f << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct ScalingOptions {
  std::string sweep = "thermal-nbar";
  std::vector<double> points;
  double beta2 = 50.0;
};

void cmd_scaling(Run& run, const Globals& g, const ScalingOptions& o) {
  std::vector<double> xs = o.points;
  if (xs.empty()) {
    if (o.sweep == "thermal-nbar") xs = {10, 20, 50, 100, 200};
    if (o.sweep == "coherent-beta") xs = {25, 50, 100, 200};
    if (o.sweep == "sigma-eff") xs = {0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1};
  }
  run.config() = {{"sweep", o.sweep}, {"points", xs}, {"beta2", o.beta2}};
  struct Row {
    double x, db, se, raw;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (o.sweep == "thermal-nbar") {
      rows.push_back({x, db_thermal(x), 0.0, db_thermal(x)});
      continue;
    }
    SqueezedCoherentParams p = o.sweep == "coherent-beta" ? SqueezedCoherentParams{std::sqrt(x), 0.0, 0.0, 0.0}
                                                         : sigma_eff_sweep_point(o.beta2, x);
    const auto exact = pn_squeezed_coherent(p);
    const auto ens = sample(to_state(p), g.ntraj, g.seed + i);
    const auto binned = bin_ensemble(ens, 0, {exact.n_max()});
    const auto est = bhattacharyya_stochastic(exact, binned);
    rows.push_back({x, est.distance, est.distance_std_error, est.raw_distance});
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(r.x, r.db);
  const auto fit = fit_scaling_exponent(pts);
  {
    auto f = run.open("scaling.csv");
    f.precision(17);
    f << "# sweep=" << o.sweep << "\nx,db,stderr,db_raw\n";
    for (const auto& r : rows) f << r.x << ',' << r.db << ',' << r.se << ',' << r.raw << '\n';
  }
  auto f = run.open("scaling_fit.json");
  f << json({{"exponent", fit.exponent}, {"stderr", fit.std_error}, {"intercept", fit.intercept}, {"points", pts}})
           .dump(2)
    << '\n';
}

// ---------------------------------------------------------------------------

struct DiagnoseOptions {
  StateSpec state;
  std::string ensemble;
  std::vector<int> ns = {1, 5, 10, 25, 50, 100};
  double r_max = 0.0;
  int points = 800;
  double threshold = 10.0;
  double epsilon = 1e-3;
  bool histogram = false;
};

void cmd_diagnose(Run& run, const Globals& g, const DiagnoseOptions& o) {
  int n_top = 0;
  for (int n : o.ns) n_top = std::max(n_top, n);
  double r_max = o.r_max;
  RadialProfile profile;
  run.config() = {{"n", o.ns}, {"threshold", o.threshold}, {"epsilon", o.epsilon}, {"points", o.points}};
  if (!o.ensemble.empty()) {
    std::ifstream in(o.ensemble);
    if (!in) throw UsageError("cannot read ensemble file " + o.ensemble);
    const auto ens = read_ensemble_csv(in);
    if (r_max <= 0.0) {
      for (const auto& a : ens.mode(0)) r_max = std::max(r_max, a.abs());
      r_max = std::max(r_max, std::sqrt(n_top + 1.0) + 0.5);
    }
    run.config()["ensemble"] = o.ensemble;
    profile = radial_profile(ens, 0, {r_max, o.points});
  } else {
    const auto state = make_state(o.state);
    if (r_max <= 0.0) r_max = std::max(radial_support(state).second, std::sqrt(n_top + 1.0) + 0.5);
    run.config().update(o.state.to_json());
    if (o.histogram) {
      run.config()["source"] = "histogram";
      profile = radial_profile(sample(state, g.ntraj, g.seed), 0, {r_max, o.points});
    } else {
      profile = radial_profile(state, {r_max, o.points});
    }
  }
  run.config()["r_max"] = r_max;
  write_profile(run, "profile", profile);
  auto f = run.open("smoothness.csv");
  f.precision(17);
  f << "n,pass,min_sqrt_n_l_inh,r_at_min,tail_only\n";
  for (int n : o.ns) {
    const auto s = smoothness_check(profile, n, o.threshold, o.epsilon);
    f << n << ',' << (s.pass ? "pass" : "fail") << ',' << s.min_value << ',' << s.r_at_min << ','
      << (s.tail_only ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct BoseHubbardOptions {
  std::string config;
  std::vector<double> output_times;
  double U = -1.0;
};

void cmd_bose_hubbard(Run& run, const Globals& g, const BoseHubbardOptions& o) {
  json config = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw UsageError("cannot read config " + o.config);
    in >> config;
  }
  if (!config.contains("seed")) config["seed"] = g.seed;
  if (!config.contains("n_traj")) config["n_traj"] = std::min<std::size_t>(g.ntraj, 100000);
  if (o.U >= 0.0) config["U"] = o.U;
  if (!o.output_times.empty()) config["output_times"] = o.output_times;
  const BHParams params = bh_params_from_json(config);
  const int cut = config.value("sector_cut", -1);
  run.config() = to_json(params);
  run.config()["sector_cut"] = cut;

  const auto twa = twa_evolve(params);
  const auto exact = exact_evolve(params, cut);
  {
    auto f = run.open("populations.csv");
    f.precision(17);
    f << "t,n1,n2,method\n";
    for (const auto& p : twa.populations) f << p.t << ',' << p.n1 << ',' << p.n2 << ",twa\n";
    for (const auto& p : exact.populations) f << p.t << ',' << p.n1 << ',' << p.n2 << ",exact\n";
  }
  json reports = json::array();
  for (std::size_t i = 0; i < twa.times.size(); ++i) {
    for (std::size_t mode = 0; mode < 2; ++mode) {
      const auto r = compare_distributions(twa, exact, i, mode);
      const std::string tag = "t" + std::to_string(i) + "_mode" + std::to_string(mode + 1);
      write_dist(run, "pn_" + tag + "_binned", r.binned);
      write_dist(run, "pn_" + tag + "_wigner-average", r.wigner_average);
      write_dist(run, "pn_" + tag + "_exact", r.exact);
      write_profile(run, "profile_" + tag, r.profile);
      {
        auto f = run.open("wigner2d_" + tag + ".csv");
        write_histogram_csv(f, r.histogram);
      }
      reports.push_back(to_json(r));
    }
  }
  json summary = {{"params", to_json(params)},
                  {"sector_cut", exact.sector_cut},
                  {"discarded_weight", exact.discarded_weight},
                  {"flagged_trajectories", twa.flagged},
                  {"max_number_drift", twa.max_number_drift},
                  {"max_energy_drift", twa.max_energy_drift},
                  {"comparisons", reports}};
  auto f = run.open("report.json");
  f << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

void cmd_sample(Run& run, const Globals& g, const StateSpec& spec) {
  run.config() = spec.to_json();
  const auto ens = sample(make_state(spec), g.ntraj, g.seed);
  auto f = run.open("ensemble.csv");
  write_ensemble_csv(f, ens);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Number distributions from phase-space samples"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", PHASEBIN_VERSION);
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--ntraj", g.ntraj, "number of samples or trajectories");
  app.add_option("--threads", g.threads, "worker thread cap (0 = runtime default)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  PnOptions pn;
  auto* pn_cmd = app.add_subcommand("pn", "number distributions by several methods");
  add_state_options(pn_cmd, pn.state);
  pn_cmd->add_option("--methods", pn.methods, "binned quadrature wigner-average analytic");
  pn_cmd->add_option("--n-max", pn.n_max, "largest n (default: automatic)");

  ScalingOptions scaling;
  auto* scaling_cmd = app.add_subcommand("scaling", "Bhattacharyya-distance scaling sweeps");
  scaling_cmd->add_option("--sweep", scaling.sweep, "thermal-nbar | coherent-beta | sigma-eff")
      ->check(CLI::IsMember({"thermal-nbar", "coherent-beta", "sigma-eff"}));
  scaling_cmd->add_option("--points", scaling.points, "sweep values (nbar, |beta|^2 or sigma_eff)");
  scaling_cmd->add_option("--beta2", scaling.beta2, "|beta|^2 for the sigma-eff sweep");

  DiagnoseOptions diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "radial profile and smoothness verdicts");
  add_state_options(diag_cmd, diag.state);
  diag_cmd->add_option("--ensemble", diag.ensemble, "ensemble CSV written by 'sample'");
  diag_cmd->add_option("--n", diag.ns, "Fock numbers to check");
  diag_cmd->add_option("--r-max", diag.r_max, "profile extent");
  diag_cmd->add_option("--points", diag.points, "profile grid points (>= 200)");
  diag_cmd->add_option("--threshold", diag.threshold, "pass threshold on sqrt(n) l_inh");
  diag_cmd->add_option("--epsilon", diag.epsilon, "overlap cutoff relative to max w");
  diag_cmd->add_flag("--histogram", diag.histogram, "sample the state and use the histogram path");

  BoseHubbardOptions bh;
  auto* bh_cmd = app.add_subcommand("bose-hubbard", "two-site Bose-Hubbard comparison");
  bh_cmd->add_option("--config", bh.config, "JSON run configuration");
  bh_cmd->add_option("--times", bh.output_times, "output times (overrides the config)");
  bh_cmd->add_option("--U", bh.U, "interaction strength (overrides the config)");

  StateSpec sample_spec;
  auto* sample_cmd = app.add_subcommand("sample", "write samples of a Gaussian state");
  add_state_options(sample_cmd, sample_spec);

  CLI11_PARSE(app, argc, argv);
  set_worker_threads(g.threads);

  const std::vector<std::string> args(argv, argv + argc);
  const std::string name = app.get_subcommands().front()->get_name();
  Run run(name, g, args);
  try {
    if (*pn_cmd) cmd_pn(run, g, pn);
    if (*scaling_cmd) cmd_scaling(run, g, scaling);
    if (*diag_cmd) cmd_diagnose(run, g, diag);
    if (*bh_cmd) cmd_bose_hubbard(run, g, bh);
    if (*sample_cmd) cmd_sample(run, g, sample_spec);
  } catch (const UsageError& e) {
    run.finish(std::string("usage error: ") + e.what());
    std::cerr << "phasebin: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    run.finish(std::string("usage error: ") + e.what());
    std::cerr << "phasebin: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    run.finish(std::string("error: ") + e.what());
    std::cerr << "phasebin: " << e.what() << '\n';
    return 1;
  }
  run.finish("ok");
  return 0;
}
