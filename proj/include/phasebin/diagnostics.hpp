#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "phasebin/number_distribution.hpp"
#include "phasebin/phase_space.hpp"

namespace phasebin {

enum class ProfileSource { Analytic, Histogram };

std::string to_string(ProfileSource source);

/// Uniform radial grid of `points` cells on [0, r_max]; values live at cell centres.
struct RadialGrid {
  double r_max = 0.0;
  int points = 400;

  double dr() const { return r_max / points; }
  double centre(int i) const { return (i + 0.5) * dr(); }
};

/// Radial structure of a phase-space distribution.
///   w(r)            = int dphi W(r, phi)   (no radial Jacobian)
///   radial_density  = r w(r), which integrates to one over dr
///   l_inh           = w / |dw/dr|, +inf where the derivative vanishes
struct RadialProfile {
  ProfileSource source = ProfileSource::Analytic;
  double dr = 0.0;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> dw;
  std::vector<double> l_inh;
  std::vector<double> radial_density;
  /// Histogram path only: unsmoothed w and its standard error.
  std::vector<double> w_raw;
  std::vector<double> w_std_error;
  std::size_t samples = 0;

  /// int r w dr by the midpoint rule.
  double normalization() const;
};

/// Angular quadrature of a Gaussian state and its analytic radial derivative.
/// Throws std::invalid_argument for grids with fewer than 200 points.
RadialProfile radial_profile(const GaussianWignerState& state, const RadialGrid& grid);

/// Radial histogram of one mode's samples, normalised to a density. w is
/// smoothed with a centred boxcar of `smoothing_window` cells before central
/// differencing. Samples beyond r_max count towards the normalisation only.
RadialProfile radial_profile(const TrajectoryEnsemble& ensemble, std::size_t mode, const RadialGrid& grid,
                             int smoothing_window = 3);

/// Density histogram over (Re alpha, Im alpha) with square cells.
struct Histogram2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double width = 0.2;
  int nx = 0;
  int ny = 0;
  std::size_t samples = 0;
  /// Row-major [iy * nx + ix], normalised so the sum times width^2 is the
  /// captured fraction of samples.
  std::vector<double> density;

  double at(int ix, int iy) const { return density[static_cast<std::size_t>(iy) * nx + ix]; }
  /// Bilinear interpolation between cell centres, zero outside.
  double interpolate(double x, double y) const;
};

/// Histogram over the square [-extent, extent]^2 centred on the origin.
Histogram2D histogram_2d(const TrajectoryEnsemble& ensemble, std::size_t mode, double width, double extent);

void write_histogram_csv(std::ostream& out, const Histogram2D& hist);

/// w(r) from a 2-D histogram by angular averaging of the interpolated density,
/// then the same smoothing and differencing as the sample path.
RadialProfile radial_profile(const Histogram2D& hist, const RadialGrid& grid, int smoothing_window = 3);

struct SmoothnessResult {
  int n = 0;
  bool pass = false;
  /// Minimum of sqrt(n) l_inh over the overlap region and where it occurs.
  double min_value = 0.0;
  double r_at_min = 0.0;
  /// No grid point in r <= sqrt(n+1) reached epsilon * max(w); the minimum was
  /// then taken over the points with w > 0.
  bool tail_only = false;
};

/// Checks sqrt(n) l_inh(r) >= threshold over {r <= sqrt(n+1), w >= epsilon max w}.
/// Throws std::invalid_argument if the profile does not reach sqrt(n+1).
SmoothnessResult smoothness_check(const RadialProfile& profile, int n, double threshold = 10.0,
                                  double epsilon = 1e-3);

struct Bhattacharyya {
  double coefficient = 0.0;
  double distance = 0.0;
  /// Non-empty when an input's mass (plus overflow) is more than 0.01 from one.
  std::string warning;
};

/// B = sum sqrt(p_n q_n) over the zero-padded union of ranges, D_B = -ln B
/// (+inf when B = 0). Negative entries of stochastic estimates count as zero.
Bhattacharyya bhattacharyya(const NumberDistribution& p, const NumberDistribution& q);

/// Distance between an exact law and a binned estimate from N samples.
struct StochasticBhattacharyya {
  double raw_coefficient = 0.0;
  double raw_distance = 0.0;
  /// With the first-order bias of sqrt(p_hat) removed.
  double coefficient = 0.0;
  double distance = 0.0;
  /// Delta-method standard errors.
  double coefficient_std_error = 0.0;
  double distance_std_error = 0.0;
};

StochasticBhattacharyya bhattacharyya_stochastic(const NumberDistribution& exact, const NumberDistribution& binned);

struct ScalingFit {
  double exponent = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Least-squares slope of ln y against ln x. Needs at least 4 points with
/// x_max / x_min >= 4; throws std::domain_error for non-positive values.
ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

/// Local maxima with hysteresis: a maximum counts once the sequence has risen
/// by more than `tolerance` from the preceding minimum and then fallen by more
/// than `tolerance` from the peak.
int count_local_maxima(const std::vector<double>& values, double tolerance = 0.0);

/// CSV columns r,w,l_inh with '#'-prefixed metadata.
void write_profile_csv(std::ostream& out, const RadialProfile& profile);

}  // namespace phasebin
