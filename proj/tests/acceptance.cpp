// Acceptance run: one PASS/FAIL line per criterion, detail lines above it.
// Stochastic runs are fingerprinted into acceptance_manifest.json and replayed
// from it at other worker counts by the final criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <json.hpp>

#include "oracles.hpp"
#include "phasebin/analytic_states.hpp"
#include "phasebin/binning.hpp"
#include "phasebin/bose_hubbard.hpp"
#include "phasebin/diagnostics.hpp"
#include "phasebin/fock_oracle.hpp"
#include "phasebin/parallel.hpp"

using namespace phasebin;

namespace {

std::string format(const char* fmt, ...) {
  char buf[1024];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

struct Outcome {
  bool pass = false;
  std::string summary;
};

// ---------------------------------------------------------------------------
// Fingerprints and the replay registry

struct Fingerprint {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  }
  void add(double x) { bytes(&x, sizeof x); }
  void add(const std::vector<double>& v) { bytes(v.data(), v.size() * sizeof(double)); }
};

void fingerprint(Fingerprint& f, const NumberDistribution& d) {
  f.add(d.probs);
  f.add(d.overflow);
  if (d.std_error) f.add(*d.std_error);
}

void fingerprint(Fingerprint& f, const WignerAverageResult& r) {
  fingerprint(f, r.dist);
  f.add(r.total);
  f.add(r.total_std_error);
}

void fingerprint(Fingerprint& f, const TwaResult& r) {
  for (const auto& e : r.snapshots) {
    for (std::size_t m = 0; m < e.modes(); ++m) f.bytes(e.mode(m).data(), e.mode(m).size_bytes());
  }
  for (const auto& p : r.populations) {
    f.add(p.n1);
    f.add(p.n2);
  }
}

struct RunEntry {
  std::string name;
  std::uint64_t seed;
  std::size_t samples;
  int threads;
  std::uint64_t fingerprint;
};

std::vector<RunEntry> g_runs;
std::map<std::string, std::function<std::uint64_t(std::uint64_t, std::size_t)>> g_replay;

/// Runs fn(seed, samples), records its fingerprint and keeps fn for replay.
template <class F>
auto record(const std::string& name, std::uint64_t seed, std::size_t samples, F fn) {
  auto out = fn(seed, samples);
  Fingerprint f;
  fingerprint(f, out);
  g_runs.push_back({name, seed, samples, worker_threads(), f.h});
  g_replay[name] = [fn](std::uint64_t s, std::size_t n) {
    Fingerprint g;
    fingerprint(g, fn(s, n));
    return g.h;
  };
  return out;
}

/// True when a count is outside the two-sided Poisson band whose tail
/// probabilities match a five-sigma Gaussian deviation.
bool poisson_outlier(double expected, double observed) {
  constexpr double kTail = 2.866515718791939e-7;
  if (expected <= 0.0) return observed > 0.0;
  const boost::math::poisson_distribution<double> law(expected);
  const double upper = observed > 0.0 ? boost::math::cdf(boost::math::complement(law, observed - 1.0)) : 1.0;
  const double lower = boost::math::cdf(law, observed);
  return upper < kTail || lower < kTail;
}

std::vector<double> head(const NumberDistribution& d, int last) {
  std::vector<double> out;
  for (int n = 0; n <= last; ++n) out.push_back(d.at(n));
  return out;
}

double max_abs_diff(const NumberDistribution& a, const NumberDistribution& b) {
  double worst = 0.0;
  for (int n = 0; n <= std::max(a.n_max(), b.n_max()); ++n) worst = std::max(worst, std::abs(a.at(n) - b.at(n)));
  return worst;
}

// ---------------------------------------------------------------------------
// 1. Thermal closed form

Outcome thermal_closed_form() {
  double worst = 0.0;
  for (double nbar : {0.1, 1.0, 10.0, 100.0}) {
    const double ref = oracle::db_thermal_multiprecision(nbar);
    const double rel = std::abs(db_thermal(nbar) - ref) / ref;
    note(format("nbar=%g: closed form %.10e, direct sum %.10e, rel. diff %.1e", nbar, db_thermal(nbar), ref, rel));
    worst = std::max(worst, rel);
  }
  std::vector<std::pair<double, double>> pts;
  for (double nbar : {10.0, 15.0, 20.0, 30.0, 50.0, 70.0, 100.0, 150.0, 200.0}) pts.emplace_back(nbar, db_thermal(nbar));
  const auto fit = fit_scaling_exponent(pts);
  const bool pass = worst <= 1e-10 && std::abs(fit.exponent + 4.0) <= 0.1;
  return {pass, format("max rel. diff %.1e (tol 1e-10); exponent over nbar in [10,200] %.4f (target -4 +- 0.1)", worst,
                       fit.exponent)};
}

// ---------------------------------------------------------------------------
// 2. Thermal discrepancy at n = 0

Outcome thermal_discrepancy() {
  auto gap = [](double nbar) {
    const double binned = pn_binned_analytic(GaussianWignerState::thermal(nbar), 0).at(0);
    const double exact = pn_thermal(nbar, 0).at(0);
    note(format("nbar=%g: binned P0 %.7f, exact P0 %.7f", nbar, binned, exact));
    return std::abs(binned - exact);
  };
  const double g10 = gap(10.0);
  const double g1 = gap(1.0);
  const bool pass = g10 >= 5e-5 && g10 <= 1e-4 && g1 >= 5e-3 && g1 <= 2e-2;
  return {pass, format("|gap| at nbar=10: %.3e (in [5e-5, 1e-4]); at nbar=1: %.3e (in [5e-3, 2e-2])", g10, g1)};
}

// ---------------------------------------------------------------------------
// 3, 4. Sampled scaling sweeps

constexpr std::size_t kSweepSamples = 10000000;

ScalingFit sweep(const std::string& tag, const std::vector<double>& xs, std::uint64_t seed0,
                 const std::function<SqueezedCoherentParams(double)>& params) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto p = params(xs[i]);
    const auto exact = pn_squeezed_coherent(p);
    const int n_max = exact.n_max();
    const auto binned = record(format("%s_%g", tag.c_str(), xs[i]), seed0 + i, kSweepSamples,
                               [p, n_max](std::uint64_t seed, std::size_t n) {
                                 return bin_ensemble(sample(to_state(p), n, seed), 0, {n_max});
                               });
    const auto est = bhattacharyya_stochastic(exact, binned);
    note(format("x=%-5g D_B %.4e +- %.1e (uncorrected %.4e)", xs[i], est.distance, est.distance_std_error,
                est.raw_distance));
    pts.emplace_back(xs[i], est.distance);
  }
  return fit_scaling_exponent(pts);
}

Outcome coherent_scaling() {
  const auto fit = sweep("coherent_beta2", {25, 50, 100, 200}, 3000,
                         [](double b2) { return SqueezedCoherentParams{std::sqrt(b2), 0.0, 0.0, 0.0}; });
  return {std::abs(fit.exponent + 1.0) <= 0.15,
          format("exponent vs |beta|^2: %.3f +- %.3f at 1e7 samples (target -1 +- 0.15)", fit.exponent, fit.std_error)};
}

Outcome sigma_eff_scaling() {
  const auto fit = sweep("sigma_eff", {0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1}, 4000,
                         [](double s) { return sigma_eff_sweep_point(50.0, s); });
  return {std::abs(fit.exponent + 6.0) <= 0.5,
          format("exponent vs sigma_eff at |beta|^2=50: %.3f +- %.3f at 1e7 samples (target -6 +- 0.5)", fit.exponent,
                 fit.std_error)};
}

// ---------------------------------------------------------------------------
// 5. Breakdown

Outcome breakdown() {
  const SqueezedCoherentParams amp{std::sqrt(20.0), 0.0, 1.5, 0.0};
  const SqueezedCoherentParams phase{std::sqrt(20.0), 0.0, 1.5, kPi};
  bool pass = true;

  auto exact_checked = [&](const SqueezedCoherentParams& p, const char* label) {
    auto exact = pn_squeezed_coherent(p);
    const auto quad = pn_quadrature(to_state(p), exact.n_max());
    const double diff = max_abs_diff(exact, quad.dist);
    note(format("%s: recurrence vs quadrature max |diff| %.1e (tol 1e-7), n_max %d", label, diff, exact.n_max()));
    pass = pass && diff <= 1e-7 && quad.failed_entries.empty();
    return exact;
  };

  // theta = 0: oscillating exact law, smooth binned law, no smoothness anywhere.
  const auto exact_a = exact_checked(amp, "theta=0");
  const auto state_a = to_state(amp);
  const auto boxcar_a = pn_binned_quadrature(state_a, exact_a.n_max());
  const auto sampled_a = record("breakdown_theta0", 5000, kSweepSamples, [amp, n_max = exact_a.n_max()](auto seed, auto n) {
    return bin_ensemble(sample(to_state(amp), n, seed), 0, {n_max});
  });
  double se = 0.0;
  for (int n = 0; n <= 80; ++n) se = std::max(se, sampled_a.error_at(n));
  const int peaks_exact = count_local_maxima(head(exact_a, 80));
  const int peaks_boxcar = count_local_maxima(head(boxcar_a, 80));
  const int peaks_sampled = count_local_maxima(head(sampled_a, 80), 5.0 * se);
  note(format("theta=0: maxima on [0,80]: exact %d (>= 8), binned quadrature %d (<= 2), sampled %d (<= 2, hysteresis %.1e)",
              peaks_exact, peaks_boxcar, peaks_sampled, 5.0 * se));
  pass = pass && peaks_exact >= 8 && peaks_boxcar <= 2 && peaks_sampled <= 2;

  const auto profile_a = radial_profile(state_a, {21.0, 2100});
  int fail_a = 0;
  double worst_a = 0.0;
  for (int n = 0; n <= 100; ++n) {
    const auto r = smoothness_check(profile_a, n);
    if (!r.pass) ++fail_a;
    worst_a = std::max(worst_a, r.min_value);
  }
  note(format("theta=0: smoothness fails for %d of 101 n in [0,100]; largest sqrt(n) l_inh minimum %.3f (threshold 10)",
              fail_a, worst_a));
  pass = pass && fail_a == 101;

  // theta = pi: failure and distance concentrated at small n.
  const auto exact_p = exact_checked(phase, "theta=pi");
  const auto state_p = to_state(phase);
  const auto profile_p = radial_profile(state_p, {21.0, 2100});
  int fail_p = 0;
  for (int n = 0; n <= 25; ++n) fail_p += smoothness_check(profile_p, n).pass ? 0 : 1;
  const auto boxcar_p = pn_binned_quadrature(state_p, exact_p.n_max());
  double low = 0.0;
  double total = 0.0;
  for (int n = 0; n <= exact_p.n_max(); ++n) {
    const double d = std::sqrt(exact_p.at(n)) - std::sqrt(std::max(0.0, boxcar_p.at(n)));
    total += d * d;
    if (n <= 25) low += d * d;
  }
  const double share = low / total;
  note(format("theta=pi: smoothness fails for %d of 26 n in [0,25]; D_B %.3e with %.4f of sum (sqrt P - sqrt Pt)^2 from n <= 25",
              fail_p, bhattacharyya(exact_p, boxcar_p).distance, share));
  pass = pass && fail_p == 26 && share >= 0.9;
  return {pass, "oscillating exact law vs smooth binned law, smoothness flags both squeezing orientations"};
}

// ---------------------------------------------------------------------------
// 6. Laguerre stability

Outcome laguerre_stability() {
  double worst = 0.0;
  bool finite = true;
  for (const auto& [n, u] : {std::pair{330, 360.0}, std::pair{700, 900.0}, std::pair{1200, 1500.0}, std::pair{2000, 2000.0}}) {
    const double ref = (n % 2 ? -2.0 : 2.0) / kPi * oracle::laguerre_scaled(n, 4.0 * u);
    const double got = fock_wigner(n, {std::sqrt(u), 0.0});
    finite = finite && std::isfinite(got);
    const double rel = std::abs(got - ref) / std::abs(ref);
    note(format("n=%d |alpha|^2=%g: W_n %.12e, oracle %.12e, rel. diff %.1e", n, u, got, ref, rel));
    worst = std::max(worst, rel);
  }
  const auto state = GaussianWignerState::coherent({20.0, 0.0});
  const int n_max = auto_n_max(state);
  const auto avg = record("wigner_average_beta2_400", 6000, 1000000, [state, n_max](auto seed, auto n) {
    return pn_wigner_average(sample(state, n, seed), n_max);
  });
  const double z = std::abs(avg.total - 1.0) / avg.total_std_error;
  note(format("|beta|^2=400, 1e6 samples, n_max %d: sum P_n = %.6f +- %.6f (%.2f standard errors)", n_max, avg.total,
              avg.total_std_error, z));
  return {finite && worst <= 1e-10 && z <= 5.0,
          format("max rel. error vs oracle %.1e (tol 1e-10); sum of Wigner averages within %.2f standard errors of 1 (tol 5)",
                 worst, z)};
}

// ---------------------------------------------------------------------------
// 7. Oracle triangle

struct TestState {
  std::string name;
  GaussianWignerState state;
  std::function<NumberDistribution(int)> analytic;
  bool isotropic;
};

std::vector<TestState> test_states() {
  auto squeezed = [](double b2, double phi, double s, double theta) {
    const SqueezedCoherentParams p{std::sqrt(b2), phi, s, theta};
    return TestState{format("squeezed |beta|^2=%g s=%g theta=%g", b2, s, theta), to_state(p),
                     [p](int n_max) { return pn_squeezed_coherent(p, n_max); }, false};
  };
  auto thermal = [](double nbar) {
    return TestState{format("thermal nbar=%g", nbar), GaussianWignerState::thermal(nbar),
                     [nbar](int n_max) { return pn_thermal(nbar, n_max); }, true};
  };
  return {
      {"vacuum", GaussianWignerState::vacuum(), [](int n_max) { return pn_poisson(0.0, n_max); }, true},
      thermal(0.5),
      thermal(4.0),
      {"coherent |beta|^2=9", to_state({3.0, 0.7, 0.0, 0.0}), [](int n_max) { return pn_poisson(9.0, n_max); }, false},
      squeezed(0.0, 0.0, 0.5, 0.3),
      squeezed(9.0, 0.4, 0.5, 1.2),
      squeezed(20.0, 0.0, 1.5, 0.0),
  };
}

Outcome oracle_triangle() {
  bool pass = true;
  int index = 0;
  for (const auto& ts : test_states()) {
    const int n_max = auto_n_max(ts.state);
    const auto quad = pn_quadrature(ts.state, n_max);
    const auto boxcar = pn_binned_quadrature(ts.state, n_max);
    const double analytic_diff = max_abs_diff(ts.analytic(n_max), quad.dist);

    const auto state = ts.state;
    const auto binned = record(format("triangle_binned_%d", index), 7000 + index, 2000000,
                               [state, n_max](auto seed, auto n) { return bin_ensemble(sample(state, n, seed), 0, {n_max}); });
    const double count = 2000000.0;
    int binned_out = 0;
    for (int n = 0; n <= n_max; ++n) {
      if (poisson_outlier(std::max(0.0, boxcar.at(n)) * count, std::round(binned.at(n) * count))) ++binned_out;
    }
    if (poisson_outlier(std::max(0.0, boxcar.overflow) * count, std::round(binned.overflow * count))) ++binned_out;

    const auto avg = record(format("triangle_wigner_%d", index), 7100 + index, 1000000,
                            [state, n_max](auto seed, auto n) { return pn_wigner_average(sample(state, n, seed), n_max); });
    int avg_out = 0;
    for (int n = 0; n <= n_max; ++n) {
      if (std::abs(avg.dist.at(n) - quad.dist.at(n)) > 5.0 * avg.dist.error_at(n) + 1e-12) ++avg_out;
    }

    double closed_diff = 0.0;
    if (ts.isotropic) closed_diff = max_abs_diff(pn_binned_analytic(ts.state, n_max), boxcar);

    note(format("%-36s n_max %3d | analytic-quadrature %.1e | binned outliers %d | Wigner-average outliers %d%s", ts.name.c_str(),
                n_max, analytic_diff, binned_out, avg_out,
                ts.isotropic ? format(" | closed-form binned %.1e", closed_diff).c_str() : ""));
    pass = pass && analytic_diff <= 1e-7 && quad.failed_entries.empty() && binned_out == 0 && avg_out == 0 &&
           closed_diff <= 1e-10;
    ++index;
  }
  return {pass, "analytic vs quadrature <= 1e-7; sampled binned counts vs binned quadrature inside the "
                "five-sigma-equivalent Poisson band; "
                "Wigner average vs quadrature within 5 SE; closed-form binned vs quadrature <= 1e-10"};
}

// ---------------------------------------------------------------------------
// 8. Bose-Hubbard

Outcome bose_hubbard() {
  bool pass = true;

  // Linear coupling: a1 -> cos t a1 + i sin t a2 and the exact marginal is Poisson(N cos^2 t).
  double bs_traj = 0.0;
  for (double t : {0.3, 0.5, 1.3}) {
    const ModePair a{{3.0, 1.0}, {-0.5, 2.0}};
    const auto out = evolve_trajectory(a, t, 1e-3, 1.0, 0.0);
    const std::complex<double> i{0.0, 1.0};
    const auto r1 = std::cos(t) * a.a1 + i * std::sin(t) * a.a2;
    const auto r2 = i * std::sin(t) * a.a1 + std::cos(t) * a.a2;
    bs_traj = std::max({bs_traj, std::abs(out.a1 - r1), std::abs(out.a2 - r2)});
  }
  BHParams linear;
  linear.U = 0.0;
  linear.t_final = 0.5;
  linear.output_times = {0.25};
  const auto ex0 = exact_evolve(linear);
  double bs_exact = 0.0;
  for (const auto& s : ex0.snapshots) {
    const double c2 = std::cos(s.t) * std::cos(s.t);
    const auto ref = pn_poisson(100.0 * c2, static_cast<int>(s.p1.size()) - 1);
    bs_exact = std::max(bs_exact, std::abs(s.n1 - 100.0 * c2) / 100.0);
    for (std::size_t k = 0; k < s.p1.size(); ++k) bs_exact = std::max(bs_exact, std::abs(s.p1[k] - ref.probs[k]));
  }
  note(format("U=0: trajectory vs beam splitter %.1e, exact marginal vs Poisson %.1e (tol 1e-8)", bs_traj, bs_exact));
  pass = pass && bs_traj <= 1e-8 && bs_exact <= 1e-8;

  bool mode1_smooth_all = true;
  int index = 0;
  for (double U : {0.25, 0.5}) {
    BHParams p;
    p.U = U;
    p.n1_initial = 100.0;
    p.t_final = 0.2;
    p.dt = 1e-4;
    p.n_traj = 100000;
    p.seed = 8000 + index++;
    p.output_times = {0.05, 0.1};
    const auto twa = record(format("bose_hubbard_U%g", U), p.seed, p.n_traj, [p](auto seed, auto n) {
      auto q = p;
      q.seed = seed;
      q.n_traj = n;
      return twa_evolve(q);
    });
    const auto exact = exact_evolve(p);
    const double drift = std::max(twa.max_number_drift, twa.max_energy_drift);
    note(format("U/Omega=%g: sector cut %d, discarded weight %.1e, max relative N_W/H_W drift %.1e (tol 1e-8), flagged %zu",
                U, exact.sector_cut, exact.discarded_weight, drift, twa.flagged));
    pass = pass && drift <= 1e-8 && twa.flagged == 0;

    for (std::size_t i = 0; i < twa.times.size(); ++i) {
      const auto m1 = compare_distributions(twa, exact, i, 0);
      double worst1 = INFINITY;
      for (const auto& s : m1.smoothness) worst1 = std::min(worst1, s.min_value);
      note(format("  t=%.2f mode 1: D_B(binned, exact) %.2e (tol 1e-2), smoothness %s over n in [%d,%d], "
                  "smallest sqrt(n) l_inh %.2f (threshold 10)",
                  twa.times[i], m1.db_binned_exact, m1.smooth ? "passes" : "fails", m1.n_lo, m1.n_hi, worst1));
      pass = pass && m1.db_binned_exact <= 1e-2;
      mode1_smooth_all = mode1_smooth_all && m1.smooth;

      const auto m2 = compare_distributions(twa, exact, i, 1);
      std::set<int> failing;
      for (const auto& s : m2.smoothness) {
        if (!s.pass) failing.insert(s.n);
      }
      std::string dev;
      std::string fail;
      bool covered = !m2.deviating.empty();
      for (int n : m2.deviating) {
        dev += format("%d ", n);
        covered = covered && failing.count(n) > 0;
      }
      for (int n : failing) fail += format("%d ", n);
      note(format("  t=%.2f mode 2: deviating beyond 5 SE {%s}, smoothness failing {%s} -> %s", twa.times[i], dev.c_str(),
                  fail.c_str(), covered ? "every deviation flagged" : "deviation not flagged or absent"));
      pass = pass && covered;
    }
  }
  pass = pass && mode1_smooth_all;
  return {pass, format("linear, conservation, D_B and mode-2 checks %s; mode-1 smoothness %s",
                       pass || !mode1_smooth_all ? "hold" : "do not all hold", mode1_smooth_all ? "passes" : "fails")};
}

// ---------------------------------------------------------------------------
// 9. Determinism

Outcome determinism() {
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& r : g_runs) {
    manifest.push_back({{"name", r.name},
                        {"seed", r.seed},
                        {"samples", r.samples},
                        {"threads", r.threads},
                        {"fingerprint", format("%016llx", static_cast<unsigned long long>(r.fingerprint))}});
  }
  {
    std::ofstream f("acceptance_manifest.json");
    f << manifest.dump(2) << '\n';
  }
  std::ifstream f("acceptance_manifest.json");
  const auto loaded = nlohmann::json::parse(f);
  int same = 0;
  int k = 0;
  for (const auto& e : loaded) {
    const int threads = k++ % 2 == 0 ? 3 : 2;
    set_worker_threads(threads);
    const auto h = g_replay.at(e["name"].get<std::string>())(e["seed"].get<std::uint64_t>(), e["samples"].get<std::size_t>());
    const bool ok = format("%016llx", static_cast<unsigned long long>(h)) == e["fingerprint"].get<std::string>();
    if (ok) {
      ++same;
    } else {
      note(format("%s differs at %d workers", e["name"].get<std::string>().c_str(), threads));
    }
  }
  set_worker_threads(1);
  return {same == static_cast<int>(loaded.size()) && !loaded.empty(),
          format("%d of %zu stochastic runs replayed from acceptance_manifest.json at 2-3 workers are bitwise identical",
                 same, loaded.size())};
}

}  // namespace

int main() {
  set_worker_threads(1);
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"thermal closed form", thermal_closed_form},
      {"thermal discrepancy", thermal_discrepancy},
      {"coherent scaling", coherent_scaling},
      {"sigma_eff scaling", sigma_eff_scaling},
      {"breakdown", breakdown},
      {"Laguerre stability", laguerre_stability},
      {"oracle triangle", oracle_triangle},
      {"Bose-Hubbard", bose_hubbard},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::printf("[%zu] %s\n", i + 1, criteria[i].first);
    std::fflush(stdout);
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.summary.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
