#pragma once

#include <cstddef>

#include "phasebin/number_distribution.hpp"
#include "phasebin/phase_space.hpp"

namespace phasebin {

/// Bins are the half-open annuli n <= |alpha|^2 < n+1 for n = 0 .. n_max;
/// samples with |alpha|^2 >= n_max+1 are counted as overflow.
struct BinSpec {
  int n_max = 0;
};

/// Histogram of |alpha|^2 for one mode, with multinomial standard errors
/// sqrt(p(1-p)/N) per bin and the overflow fraction.
NumberDistribution bin_ensemble(const TrajectoryEnsemble& ensemble, std::size_t mode, const BinSpec& spec);

/// Boxcar band (1/pi) on sqrt(n) <= |alpha| < sqrt(n+1), zero elsewhere.
double boxcar_wigner(int n, PhaseAmplitude alpha);

/// Closed-form binned distribution of an isotropic centred Gaussian
/// (vacuum or thermal): q^n (1 - q), q = exp(-1/(nbar + 1/2)).
/// Throws std::invalid_argument for other states.
NumberDistribution pn_binned_analytic(const GaussianWignerState& state, int n_max);

/// Binned distribution of any Gaussian state by quadrature:
/// (1/2) int_n^{n+1} du int dphi W(sqrt(u), phi).
NumberDistribution pn_binned_quadrature(const GaussianWignerState& state, int n_max);

/// Mean of the binned law of a thermal state, 1/(e^{1/(nbar+1/2)} - 1).
double binned_thermal_mean(double nbar);

}  // namespace phasebin
