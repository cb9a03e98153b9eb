#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "phasebin/diagnostics.hpp"
#include "phasebin/number_distribution.hpp"
#include "phasebin/phase_space.hpp"

namespace phasebin {

/// Two-site Bose-Hubbard run. Times are in units of 1/Omega.
struct BHParams {
  double U = 0.5;
  double Omega = 1.0;
  double n1_initial = 100.0;
  double t_final = 0.5;
  double dt = 1e-4;
  std::size_t n_traj = 100000;
  std::uint64_t seed = 1;
  /// Times at which ensembles and exact states are kept; t_final is always added.
  std::vector<double> output_times;
  /// Number of equally spaced points in the population time series.
  int series_points = 101;
};

/// Throws std::invalid_argument unless all fields are sensible and
/// dt * max(Omega, U * n1_initial) <= 0.01.
void validate(const BHParams& params);

/// Sorted, de-duplicated output times including t_final.
std::vector<double> snapshot_times(const BHParams& params);

BHParams bh_params_from_json(const nlohmann::json& config);
nlohmann::json to_json(const BHParams& params);

/// State of one trajectory.
struct ModePair {
  std::complex<double> a1;
  std::complex<double> a2;
};

/// d a1/dt = i Omega a2 - i U (|a1|^2 - 1) a1 and the same with 1 <-> 2.
ModePair twa_rhs(const ModePair& a, double Omega, double U);
ModePair rk4_step(const ModePair& a, double h, double Omega, double U);
/// Advances by t in ceil(t/dt) equal RK4 steps.
ModePair evolve_trajectory(ModePair a, double t, double dt, double Omega, double U);

/// Weyl symbols of the conserved quantities.
double twa_number(const ModePair& a);
double twa_energy(const ModePair& a, double Omega, double U);

struct PopulationPoint {
  double t = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double n1_std_error = 0.0;
  double n2_std_error = 0.0;
};

struct TwaResult {
  std::vector<double> times;
  /// Two-mode ensembles at `times`.
  std::vector<TrajectoryEnsemble> snapshots;
  std::vector<PopulationPoint> populations;
  /// Trajectories whose N_W or H_W drifted by more than 1e-6 relative.
  std::size_t flagged = 0;
  double max_number_drift = 0.0;
  double max_energy_drift = 0.0;
};

/// Initial mode 1 ~ coherent at sqrt(n1_initial), mode 2 ~ vacuum, both sampled
/// per block of kStreamBlock trajectories from (seed, block). Throws
/// std::runtime_error if more than 0.1% of trajectories are flagged.
TwaResult twa_evolve(const BHParams& params);

/// Initial two-mode ensemble of a run.
TrajectoryEnsemble twa_initial_ensemble(const BHParams& params);

struct ExactSnapshot {
  double t = 0.0;
  /// Marginals P(n1 = k) and P(n2 = k), k = 0 .. sector cut.
  std::vector<double> p1;
  std::vector<double> p2;
  double n1 = 0.0;
  double n2 = 0.0;
  double energy = 0.0;
  double norm = 0.0;
};

struct ExactResult {
  int sector_cut = 0;
  /// Poisson weight of the discarded sectors N > sector_cut.
  double discarded_weight = 0.0;
  std::vector<ExactSnapshot> snapshots;
  std::vector<PopulationPoint> populations;
};

/// Smallest cut whose discarded Poisson weight is below `tail`.
int exact_sector_cut(double n1_initial, double tail = 1e-10);

/// Each sector of fixed N = n1 + n2 holds the single initial amplitude on
/// |n1 = N, n2 = 0> and is evolved exactly through the eigendecomposition of its
/// tridiagonal Hamiltonian. sector_cut < 0 picks exact_sector_cut. Throws
/// std::invalid_argument if the discarded weight exceeds 1e-10.
ExactResult exact_evolve(const BHParams& params, int sector_cut = -1);

struct ComparisonReport {
  double t = 0.0;
  std::size_t mode = 0;
  NumberDistribution binned;
  NumberDistribution wigner_average;
  NumberDistribution exact;
  double db_binned_exact = 0.0;
  double db_wigner_exact = 0.0;
  double db_binned_wigner = 0.0;
  Histogram2D histogram;
  RadialProfile profile;
  /// n range holding the central 99% of the exact mass.
  int n_lo = 0;
  int n_hi = 0;
  std::vector<SmoothnessResult> smoothness;
  /// n in [n_lo, n_hi] where |binned - exact| exceeds 5 standard errors.
  std::vector<int> deviating;
  /// True when every n in [n_lo, n_hi] passes the smoothness check.
  bool smooth = false;
};

/// Compares the binned and Wigner-average estimates from the TWA snapshot
/// `index` with the exact marginal for one mode (0 or 1).
ComparisonReport compare_distributions(const TwaResult& twa, const ExactResult& exact, std::size_t index,
                                       std::size_t mode, double hist_width = 0.2, double threshold = 10.0,
                                       double epsilon = 1e-3);

nlohmann::json to_json(const ComparisonReport& report);

}  // namespace phasebin
