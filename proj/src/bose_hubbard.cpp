#include "phasebin/bose_hubbard.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "phasebin/binning.hpp"
#include "phasebin/fock_oracle.hpp"
#include "phasebin/parallel.hpp"
#include "phasebin/rng.hpp"

namespace phasebin {

namespace {

constexpr double kDriftFlag = 1e-6;
constexpr double kFlaggedFraction = 1e-3;
constexpr double kTailBound = 1e-10;
constexpr std::uint32_t kTwaDomain = 2;

/// Union of the snapshot times and the equally spaced series grid.
std::vector<double> record_times(const BHParams& p) {
  std::vector<double> t = snapshot_times(p);
  for (int i = 0; i < p.series_points; ++i) {
    t.push_back(p.series_points == 1 ? 0.0 : p.t_final * i / (p.series_points - 1));
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

std::size_t index_of(const std::vector<double>& times, double t) {
  return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

double energy_scale(const BHParams& p, double number) {
  return std::abs(p.Omega) * number + 0.5 * std::abs(p.U) * number * number;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate(const BHParams& p) {
  if (!std::isfinite(p.U) || !(p.Omega >= 0.0) || !std::isfinite(p.Omega)) {
    throw std::invalid_argument("BHParams: U must be finite and Omega >= 0");
  }
  if (!(p.n1_initial >= 0.0) || !std::isfinite(p.n1_initial)) throw std::invalid_argument("BHParams: n1_initial >= 0");
  if (!(p.t_final >= 0.0) || !std::isfinite(p.t_final)) throw std::invalid_argument("BHParams: t_final >= 0");
  if (!(p.dt > 0.0)) throw std::invalid_argument("BHParams: dt must be > 0");
  if (p.n_traj == 0) throw std::invalid_argument("BHParams: n_traj must be >= 1");
  if (p.series_points < 1) throw std::invalid_argument("BHParams: series_points must be >= 1");
  if (p.dt * std::max(p.Omega, std::abs(p.U) * p.n1_initial) > 0.01) {
    throw std::invalid_argument("BHParams: dt * max(Omega, U n1) must be <= 0.01");
  }
  for (double t : p.output_times) {
    if (!(t >= 0.0 && t <= p.t_final)) throw std::invalid_argument("BHParams: output times must lie in [0, t_final]");
  }
}

std::vector<double> snapshot_times(const BHParams& p) {
  std::vector<double> t = p.output_times;
  t.push_back(p.t_final);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

BHParams bh_params_from_json(const nlohmann::json& c) {
  BHParams p;
  p.U = c.value("U", p.U);
  p.Omega = c.value("Omega", p.Omega);
  p.n1_initial = c.value("n1_initial", p.n1_initial);
  p.t_final = c.value("t_final", p.t_final);
  p.dt = c.value("dt", p.dt);
  p.n_traj = c.value("n_traj", p.n_traj);
  p.seed = c.value("seed", p.seed);
  p.output_times = c.value("output_times", p.output_times);
  p.series_points = c.value("series_points", p.series_points);
  for (const auto& [key, value] : c.items()) {
    static const std::vector<std::string> known = {"U",      "Omega", "n1_initial",   "t_final",       "dt",
                                                   "n_traj", "seed",  "output_times", "series_points", "sector_cut"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown Bose-Hubbard config key '" + key + "'");
    }
    (void)value;
  }
  validate(p);
  return p;
}

nlohmann::json to_json(const BHParams& p) {
  return {{"U", p.U},           {"Omega", p.Omega},   {"n1_initial", p.n1_initial},     {"t_final", p.t_final},
          {"dt", p.dt},         {"n_traj", p.n_traj}, {"seed", p.seed}, {"output_times", p.output_times},
          {"series_points", p.series_points}};
}

// ---------------------------------------------------------------------------
// Truncated Wigner trajectories

ModePair twa_rhs(const ModePair& a, double Omega, double U) {
  const std::complex<double> i(0.0, 1.0);
  return {i * Omega * a.a2 - i * U * (std::norm(a.a1) - 1.0) * a.a1,
          i * Omega * a.a1 - i * U * (std::norm(a.a2) - 1.0) * a.a2};
}

ModePair rk4_step(const ModePair& a, double h, double Omega, double U) {
  auto axpy = [](const ModePair& x, double s, const ModePair& k) { return ModePair{x.a1 + s * k.a1, x.a2 + s * k.a2}; };
  const ModePair k1 = twa_rhs(a, Omega, U);
  const ModePair k2 = twa_rhs(axpy(a, 0.5 * h, k1), Omega, U);
  const ModePair k3 = twa_rhs(axpy(a, 0.5 * h, k2), Omega, U);
  const ModePair k4 = twa_rhs(axpy(a, h, k3), Omega, U);
  return {a.a1 + (h / 6.0) * (k1.a1 + 2.0 * k2.a1 + 2.0 * k3.a1 + k4.a1),
          a.a2 + (h / 6.0) * (k1.a2 + 2.0 * k2.a2 + 2.0 * k3.a2 + k4.a2)};
}

ModePair evolve_trajectory(ModePair a, double t, double dt, double Omega, double U) {
  if (!(t > 0.0)) return a;
  const long steps = static_cast<long>(std::ceil(t / dt - 1e-9));
  const double h = t / static_cast<double>(std::max(1L, steps));
  for (long s = 0; s < std::max(1L, steps); ++s) a = rk4_step(a, h, Omega, U);
  return a;
}

double twa_number(const ModePair& a) { return std::norm(a.a1) + std::norm(a.a2); }

double twa_energy(const ModePair& a, double Omega, double U) {
  const double n1 = std::norm(a.a1);
  const double n2 = std::norm(a.a2);
  return -2.0 * Omega * std::real(std::conj(a.a2) * a.a1) + 0.5 * U * (n1 * n1 - 2.0 * n1 + n2 * n2 - 2.0 * n2);
}

TrajectoryEnsemble twa_initial_ensemble(const BHParams& p) {
  validate(p);
  const std::size_t count = p.n_traj;
  const std::size_t blocks = (count + kStreamBlock - 1) / kStreamBlock;
  TrajectoryEnsemble ens(2, count, p.seed, blocks);
  auto m1 = ens.mode(0);
  auto m2 = ens.mode(1);
  const double b = std::sqrt(p.n1_initial);
  parallel_for_blocks(blocks, [&](std::size_t block) {
    auto engine = stream_engine(p.seed, block, kTwaDomain);
    std::normal_distribution<double> normal(0.0, 0.5);
    const std::size_t end = std::min(count, (block + 1) * kStreamBlock);
    for (std::size_t i = block * kStreamBlock; i < end; ++i) {
      const double x1 = normal(engine);
      const double y1 = normal(engine);
      const double x2 = normal(engine);
      const double y2 = normal(engine);
      m1[i] = {b + x1, y1};
      m2[i] = {x2, y2};
    }
  });
  ens.metadata()["model"] = "bose_hubbard";
  ens.metadata()["U"] = fmt(p.U);
  ens.metadata()["Omega"] = fmt(p.Omega);
  ens.metadata()["n1_initial"] = fmt(p.n1_initial);
  ens.metadata()["dt"] = fmt(p.dt);
  return ens;
}

TwaResult twa_evolve(const BHParams& p) {
  validate(p);
  const TrajectoryEnsemble initial = twa_initial_ensemble(p);
  const auto rec = record_times(p);
  const auto snaps = snapshot_times(p);
  const std::size_t count = p.n_traj;
  const std::size_t blocks = initial.stream_count();

  TwaResult out;
  out.times = snaps;
  out.snapshots.reserve(snaps.size());
  for (double t : snaps) {
    out.snapshots.emplace_back(2, count, p.seed, blocks);
    out.snapshots.back().metadata() = initial.metadata();
    out.snapshots.back().metadata()["t"] = fmt(t);
  }
  std::vector<char> is_snapshot(rec.size(), 0);
  std::vector<std::size_t> snapshot_slot(rec.size(), 0);
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    const std::size_t k = index_of(rec, snaps[s]);
    is_snapshot[k] = 1;
    snapshot_slot[k] = s;
  }

  // Per block: for each record time sum |a1|^2, |a1|^4, |a2|^2, |a2|^4; then flagged count and two drift maxima.
  const std::size_t width = 4 * rec.size() + 3;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(width, 0.0));
  const auto in1 = initial.mode(0);
  const auto in2 = initial.mode(1);
  parallel_for_blocks(blocks, [&](std::size_t block) {
    auto& acc = partial[block];
    const std::size_t end = std::min(count, (block + 1) * kStreamBlock);
    for (std::size_t i = block * kStreamBlock; i < end; ++i) {
      ModePair a{in1[i].complex(), in2[i].complex()};
      const double n0 = twa_number(a);
      const double h0 = twa_energy(a, p.Omega, p.U);
      const double n_scale = std::max(n0, 1e-300);
      const double h_scale = std::max({std::abs(h0), energy_scale(p, n0), 1e-300});
      double drift_n = 0.0;
      double drift_h = 0.0;
      double t_prev = 0.0;
      for (std::size_t k = 0; k < rec.size(); ++k) {
        a = evolve_trajectory(a, rec[k] - t_prev, p.dt, p.Omega, p.U);
        t_prev = rec[k];
        const double u1 = std::norm(a.a1);
        const double u2 = std::norm(a.a2);
        acc[4 * k] += u1;
        acc[4 * k + 1] += u1 * u1;
        acc[4 * k + 2] += u2;
        acc[4 * k + 3] += u2 * u2;
        drift_n = std::max(drift_n, std::abs(twa_number(a) - n0) / n_scale);
        drift_h = std::max(drift_h, std::abs(twa_energy(a, p.Omega, p.U) - h0) / h_scale);
        if (is_snapshot[k]) {
          auto& snap = out.snapshots[snapshot_slot[k]];
          snap.mode(0)[i] = {a.a1.real(), a.a1.imag()};
          snap.mode(1)[i] = {a.a2.real(), a.a2.imag()};
        }
      }
      if (drift_n > kDriftFlag || drift_h > kDriftFlag) acc[width - 3] += 1.0;
      acc[width - 2] = std::max(acc[width - 2], drift_n);
      acc[width - 1] = std::max(acc[width - 1], drift_h);
    }
  });

  std::vector<double> sums(4 * rec.size(), 0.0);
  for (std::size_t j = 0; j < sums.size(); ++j) {
    CompensatedSum s;
    for (const auto& part : partial) s.add(part[j]);
    sums[j] = s.value();
  }
  for (const auto& part : partial) {
    out.flagged += static_cast<std::size_t>(part[width - 3]);
    out.max_number_drift = std::max(out.max_number_drift, part[width - 2]);
    out.max_energy_drift = std::max(out.max_energy_drift, part[width - 1]);
  }
  const double nt = static_cast<double>(count);
  auto se = [nt](double s, double s2) {
    return nt < 2.0 ? 0.0 : std::sqrt(std::max(0.0, (s2 - s * s / nt) / (nt - 1.0)) / nt);
  };
  for (std::size_t k = 0; k < rec.size(); ++k) {
    PopulationPoint pt;
    pt.t = rec[k];
    pt.n1 = sums[4 * k] / nt - 0.5;
    pt.n2 = sums[4 * k + 2] / nt - 0.5;
    pt.n1_std_error = se(sums[4 * k], sums[4 * k + 1]);
    pt.n2_std_error = se(sums[4 * k + 2], sums[4 * k + 3]);
    out.populations.push_back(pt);
  }
  if (static_cast<double>(out.flagged) > kFlaggedFraction * nt) {
    throw std::runtime_error("twa_evolve: " + std::to_string(out.flagged) +
                             " trajectories drifted beyond tolerance; reduce dt");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact sector evolution

namespace {

double poisson_weight(double mean, int n) {
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

double poisson_tail(double mean, int cut) {
  CompensatedSum s;
  for (int n = cut + 1;; ++n) {
    const double w = poisson_weight(mean, n);
    s.add(w);
    if (n > mean && w < 1e-30) break;
  }
  return s.value();
}

}  // namespace

int exact_sector_cut(double n1_initial, double tail) {
  int cut = static_cast<int>(std::floor(n1_initial));
  while (poisson_tail(n1_initial, cut) >= tail) ++cut;
  return cut;
}

ExactResult exact_evolve(const BHParams& p, int sector_cut) {
  validate(p);
  ExactResult out;
  out.sector_cut = sector_cut < 0 ? exact_sector_cut(p.n1_initial) : sector_cut;
  out.discarded_weight = poisson_tail(p.n1_initial, out.sector_cut);
  if (out.discarded_weight > kTailBound) {
    throw std::invalid_argument("exact_evolve: sector cut " + std::to_string(out.sector_cut) + " discards weight " +
                                std::to_string(out.discarded_weight));
  }
  const auto rec = record_times(p);
  const auto snaps = snapshot_times(p);
  const int cut = out.sector_cut;
  const std::size_t len = static_cast<std::size_t>(cut) + 1;
  const std::size_t nt = rec.size();
  // Per sector and record time: p1 (len), p2 (len), then n1, n2, energy, norm.
  const std::size_t stride = 2 * len + 4;
  std::vector<std::vector<double>> partial(len, std::vector<double>(stride * nt, 0.0));

  parallel_for_blocks(len, [&](std::size_t sector) {
    const int N = static_cast<int>(sector);
    const double weight = poisson_weight(p.n1_initial, N);
    if (weight == 0.0) return;
    const Eigen::Index dim = N + 1;
    Eigen::VectorXd diag(dim);
    Eigen::VectorXd off(std::max<Eigen::Index>(dim - 1, 1));
    for (int k = 0; k <= N; ++k) {
      diag(k) = 0.5 * p.U * (static_cast<double>(k) * (k - 1) + static_cast<double>(N - k) * (N - k - 1));
      if (k < N) off(k) = -p.Omega * std::sqrt((k + 1.0) * (N - k));
    }
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
    if (dim == 1) {
      vectors = Eigen::MatrixXd::Ones(1, 1);
      values = diag;
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
      solver.computeFromTridiagonal(diag, off.head(dim - 1), Eigen::ComputeEigenvectors);
      vectors = solver.eigenvectors();
      values = solver.eigenvalues();
    }
    // Initial vector |n1 = N, n2 = 0> is the last basis element.
    const Eigen::VectorXd overlap = vectors.row(N).transpose();
    auto& acc = partial[sector];
    Eigen::VectorXcd phases(dim);
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = rec[it];
      for (Eigen::Index j = 0; j < dim; ++j) phases(j) = std::polar(overlap(j), -values(j) * t);
      const Eigen::VectorXcd c = vectors.cast<std::complex<double>>() * phases;
      double* slot = acc.data() + it * stride;
      double norm = 0.0;
      double n1 = 0.0;
      double energy = 0.0;
      for (int k = 0; k <= N; ++k) {
        const double prob = std::norm(c(k));
        slot[k] += weight * prob;
        slot[len + static_cast<std::size_t>(N - k)] += weight * prob;
        norm += prob;
        n1 += k * prob;
        std::complex<double> hc = diag(k) * c(k);
        if (k > 0) hc += off(k - 1) * c(k - 1);
        if (k < N) hc += off(k) * c(k + 1);
        energy += std::real(std::conj(c(k)) * hc);
      }
      slot[2 * len] += weight * n1;
      slot[2 * len + 1] += weight * (N * norm - n1);
      slot[2 * len + 2] += weight * energy;
      slot[2 * len + 3] += weight * norm;
    }
  });

  const auto total = reduce_blocks(partial);
  std::size_t next_snapshot = 0;
  for (std::size_t it = 0; it < nt; ++it) {
    const double* slot = total.data() + it * stride;
    PopulationPoint pt;
    pt.t = rec[it];
    pt.n1 = slot[2 * len];
    pt.n2 = slot[2 * len + 1];
    out.populations.push_back(pt);
    if (next_snapshot < snaps.size() && rec[it] == snaps[next_snapshot]) {
      ExactSnapshot s;
      s.t = rec[it];
      s.p1.assign(slot, slot + len);
      s.p2.assign(slot + len, slot + 2 * len);
      s.n1 = slot[2 * len];
      s.n2 = slot[2 * len + 1];
      s.energy = slot[2 * len + 2];
      s.norm = slot[2 * len + 3];
      out.snapshots.push_back(std::move(s));
      ++next_snapshot;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Three-way comparison

ComparisonReport compare_distributions(const TwaResult& twa, const ExactResult& exact, std::size_t index,
                                       std::size_t mode, double hist_width, double threshold, double epsilon) {
  if (index >= twa.snapshots.size() || index >= exact.snapshots.size()) {
    throw std::out_of_range("compare_distributions: no snapshot " + std::to_string(index));
  }
  if (mode > 1) throw std::out_of_range("compare_distributions: mode must be 0 or 1");
  if (twa.times[index] != exact.snapshots[index].t) {
    throw std::invalid_argument("compare_distributions: TWA and exact snapshots are at different times");
  }
  const auto& ens = twa.snapshots[index];
  const int n_max = exact.sector_cut;
  ComparisonReport r;
  r.t = twa.times[index];
  r.mode = mode;
  r.binned = bin_ensemble(ens, mode, {n_max});
  r.wigner_average = pn_wigner_average(ens, n_max, mode).dist;
  r.exact.method = Method::Analytic;
  r.exact.probs = mode == 0 ? exact.snapshots[index].p1 : exact.snapshots[index].p2;
  r.exact.metadata = {{"route", "exact-sectors"}, {"t", fmt(r.t)}, {"mode", std::to_string(mode)}};
  r.db_binned_exact = bhattacharyya(r.binned, r.exact).distance;
  r.db_wigner_exact = bhattacharyya(r.wigner_average, r.exact).distance;
  r.db_binned_wigner = bhattacharyya(r.binned, r.wigner_average).distance;

  double cdf = 0.0;
  r.n_lo = -1;
  r.n_hi = n_max;
  for (int n = 0; n <= n_max; ++n) {
    cdf += r.exact.at(n);
    if (r.n_lo < 0 && cdf > 0.005) r.n_lo = n;
    if (cdf >= 0.995) {
      r.n_hi = n;
      break;
    }
  }
  r.n_lo = std::max(r.n_lo, 0);

  const double extent = std::sqrt(n_max + 1.0) + 1.0;
  r.histogram = histogram_2d(ens, mode, hist_width, extent);
  RadialGrid grid{extent, 400};
  r.profile = radial_profile(r.histogram, grid);
  r.smooth = true;
  const double count = static_cast<double>(ens.count());
  for (int n = r.n_lo; n <= r.n_hi; ++n) {
    r.smoothness.push_back(smoothness_check(r.profile, n, threshold, epsilon));
    r.smooth = r.smooth && r.smoothness.back().pass;
    // Binomial standard error of the bin, floored at one count so empty bins still carry an error.
    const double q = r.binned.at(n);
    const double se = std::sqrt(std::max(q, 1.0 / count) * (1.0 - q) / count);
    if (std::abs(q - r.exact.at(n)) > 5.0 * se) r.deviating.push_back(n);
  }
  return r;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json smooth = nlohmann::json::array();
  for (const auto& s : r.smoothness) {
    smooth.push_back({{"n", s.n}, {"pass", s.pass}, {"min_sqrt_n_l_inh", s.min_value}, {"r_at_min", s.r_at_min},
                      {"tail_only", s.tail_only}});
  }
  return {{"t", r.t},
          {"mode", r.mode + 1},
          {"db_binned_exact", r.db_binned_exact},
          {"db_wigner_exact", r.db_wigner_exact},
          {"db_binned_wigner", r.db_binned_wigner},
          {"n_range", {r.n_lo, r.n_hi}},
          {"smooth", r.smooth},
          {"smoothness", smooth},
          {"deviating_n", r.deviating}};
}

}  // namespace phasebin
