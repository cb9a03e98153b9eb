#pragma once

#include "phasebin/number_distribution.hpp"
#include "phasebin/phase_space.hpp"

namespace phasebin {

/// Displaced squeezed vacuum D(beta) S(eta)|0> with beta = beta_mag e^{i varphi}
/// and eta = s e^{i theta}.
struct SqueezedCoherentParams {
  double beta_mag = 0.0;
  double varphi = 0.0;
  double s = 0.0;
  double theta = 0.0;
};

/// Throws std::domain_error for negative or non-finite parameters.
void validate(const SqueezedCoherentParams& p);

GaussianWignerState to_state(const SqueezedCoherentParams& p);

/// Geometric law nbar^n / (nbar+1)^{n+1}. Throws std::domain_error for nbar <= 0.
NumberDistribution pn_thermal(double nbar, int n_max);

/// Poisson law e^{-mean} mean^n / n!.
NumberDistribution pn_poisson(double mean, int n_max);

/// Number distribution of a squeezed coherent state. The Hermite polynomial is
/// carried in the normalised form h_n = H_n(z) (tanh s / 2)^{n/2} / sqrt(n!),
///   h_{n+1} = (w h_n - tanh(s) sqrt(n) h_{n-1}) / sqrt(n+1),
///   w = (beta + beta* e^{i theta} tanh s) e^{-i theta/2},
/// with a shared base-2 exponent, so no step can overflow. s = 0 is the Poisson law.
/// n_max < 0 selects it automatically (see squeezed_auto_n_max).
NumberDistribution pn_squeezed_coherent(const SqueezedCoherentParams& p, int n_max = -1);

/// |beta|^2 + 10 sqrt(variance) + 20, then extended until the tail mass beyond
/// n_max is below 1e-12 (capped at 5000).
int squeezed_auto_n_max(const SqueezedCoherentParams& p);

/// |beta|^2 [e^{-2s} cos^2(varphi - theta/2) + e^{2s} sin^2(varphi - theta/2)],
/// the large-amplitude number variance.
double variance_formula(const SqueezedCoherentParams& p);

/// Full number variance: variance_formula(p) + 2 sinh^2 s cosh^2 s.
double number_variance(const SqueezedCoherentParams& p);

/// sqrt(sigma_s^2 cos^2(varphi - theta/2) + sigma_a^2 sin^2(varphi - theta/2)).
double sigma_eff(const SqueezedCoherentParams& p);

/// Parameters of the width sweep at fixed |beta|^2: theta = 0, s = -ln(2 sigma)
/// for sigma <= 1/2 and theta = pi, s = ln(2 sigma) above, with varphi = 0.
SqueezedCoherentParams sigma_eff_sweep_point(double beta2, double sigma);

/// Closed-form Bhattacharyya distance between the thermal law and its binned law.
double db_thermal(double nbar);

}  // namespace phasebin
