#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phasebin/laguerre.hpp"
#include "phasebin/number_distribution.hpp"
#include "phasebin/phase_space.hpp"

namespace phasebin {

/// W_{|n>}(alpha) = (2/pi)(-1)^n e^{-2|alpha|^2} L_n(4|alpha|^2), evaluated through
/// the scaled Laguerre recurrence so it stays finite for any n and |alpha|.
double fock_wigner(int n, PhaseAmplitude alpha);

/// out[k] = W_{|k>}(alpha) for k = 0 .. out.size()-1, given |alpha|^2.
void fock_wigner_sequence(double norm2, std::span<double> out);

/// Positive Gaussian-ring stand-in for the Fock Wigner function,
/// A exp[-2(|alpha|^2 - n - 1/2)^2], normalised over the plane.
class FockGaussianRing {
 public:
  explicit FockGaussianRing(int n);

  int n() const { return n_; }
  double normalization() const { return norm_; }
  double density(PhaseAmplitude alpha) const;
  /// |alpha|^2 by inverse CDF on a tabulated grid of the radial marginal, phase uniform.
  TrajectoryEnsemble sample(std::size_t count, std::uint64_t seed) const;

 private:
  int n_;
  double norm_;
  std::vector<double> u_grid_;
  std::vector<double> cdf_;
};

/// Cached per n.
double fock_gaussian_ring_density(int n, PhaseAmplitude alpha);
TrajectoryEnsemble sample_fock_gaussian_ring(int n, std::size_t count, std::uint64_t seed);

/// Default truncation in [20, 5000]: the geometric tail below 1e-12 for thermal
/// states; otherwise the larger of mean + 10 std + 20 and (|beta| + 7.5 sigma_a)^2.
int auto_n_max(const GaussianWignerState& state);

struct QuadratureOptions {
  /// Convergence target on max |P_n(level) - P_n(level-1)|.
  double tolerance = 1e-10;
  /// Entries whose error estimate exceeds this are reported as failed.
  double failure_threshold = 1e-9;
  int order = 24;
  int max_levels = 10;
};

struct QuadratureResult {
  NumberDistribution dist;
  std::vector<double> error_estimate;
  std::vector<int> failed_entries;
};

/// P_n = pi int d^2 alpha W(alpha) W_{|n>}(alpha) for n = 0 .. n_max.
/// The angular integral is done first (periodic trapezoid), then the radial
/// integral in r = |alpha| by composite Gauss-Legendre with the panel count
/// doubled until successive estimates agree. Fock oscillations are close to
/// uniform in r, so equal panels in r resolve them without crowding near 0.
QuadratureResult pn_quadrature(const GaussianWignerState& state, int n_max, const QuadratureOptions& options = {});

struct WignerAverageResult {
  NumberDistribution dist;
  /// sum_n P_n and the standard error of that sum (per-sample sums are correlated across n).
  double total = 0.0;
  double total_std_error = 0.0;
};

/// P_n = pi <W_{|n>}(alpha)>_W over the samples of one mode.
WignerAverageResult pn_wigner_average(const TrajectoryEnsemble& ensemble, int n_max, std::size_t mode = 0);

}  // namespace phasebin
