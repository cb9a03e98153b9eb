#include "phasebin/binning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "phasebin/parallel.hpp"
#include "phasebin/quadrature.hpp"

namespace phasebin {

NumberDistribution bin_ensemble(const TrajectoryEnsemble& ensemble, std::size_t mode, const BinSpec& spec) {
  if (spec.n_max < 0) throw std::invalid_argument("bin_ensemble: n_max must be >= 0");
  const auto samples = ensemble.mode(mode);
  if (samples.empty()) throw std::invalid_argument("bin_ensemble: empty ensemble");
  const std::size_t bins = static_cast<std::size_t>(spec.n_max) + 1;
  const std::size_t blocks = (samples.size() + kStreamBlock - 1) / kStreamBlock;
  // Last slot holds the overflow count.
  std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(bins + 1, 0));
  parallel_for_blocks(blocks, [&](std::size_t block) {
    auto& counts = partial[block];
    const std::size_t end = std::min(samples.size(), (block + 1) * kStreamBlock);
    for (std::size_t i = block * kStreamBlock; i < end; ++i) {
      const double u = samples[i].norm2();
      const double k = std::floor(u);
      counts[k < static_cast<double>(bins) ? static_cast<std::size_t>(k) : bins] += 1;
    }
  });
  std::vector<std::uint64_t> counts(bins + 1, 0);
  for (const auto& p : partial) {
    for (std::size_t k = 0; k <= bins; ++k) counts[k] += p[k];
  }
  const double total = static_cast<double>(samples.size());
  NumberDistribution dist;
  dist.method = Method::Binned;
  dist.samples = samples.size();
  dist.probs.resize(bins);
  dist.std_error = std::vector<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = static_cast<double>(counts[k]) / total;
    dist.probs[k] = p;
    (*dist.std_error)[k] = std::sqrt(p * (1.0 - p) / total);
  }
  dist.overflow = static_cast<double>(counts[bins]) / total;
  dist.metadata = ensemble.metadata();
  dist.metadata["seed"] = std::to_string(ensemble.seed());
  dist.metadata["mode"] = std::to_string(mode);
  dist.metadata["overflow_count"] = std::to_string(counts[bins]);
  return dist;
}

double boxcar_wigner(int n, PhaseAmplitude alpha) {
  if (n < 0) throw std::domain_error("boxcar_wigner: n must be >= 0");
  const double u = alpha.norm2();
  return (u >= n && u < n + 1.0) ? 1.0 / kPi : 0.0;
}

double binned_thermal_mean(double nbar) {
  if (!(nbar >= 0.0)) throw std::domain_error("binned_thermal_mean: nbar must be >= 0");
  return 1.0 / std::expm1(1.0 / (nbar + 0.5));
}

NumberDistribution pn_binned_analytic(const GaussianWignerState& state, int n_max) {
  if (n_max < 0) throw std::invalid_argument("pn_binned_analytic: n_max must be >= 0");
  if (!state.isotropic() || state.beta().norm2() != 0.0) {
    throw std::invalid_argument("pn_binned_analytic: only centred isotropic states (vacuum, thermal) are supported");
  }
  // Centred isotropic Gaussian: |alpha|^2 is exponential with mean 2 sigma^2 = nbar + 1/2.
  const double a = 1.0 / (2.0 * state.sigma_s() * state.sigma_s());
  const double one_minus_q = -std::expm1(-a);
  NumberDistribution dist;
  dist.method = Method::Binned;
  dist.probs.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) dist.probs[static_cast<std::size_t>(n)] = std::exp(-a * n) * one_minus_q;
  dist.std_error = std::vector<double>(dist.probs.size(), 0.0);
  dist.overflow = std::exp(-a * (n_max + 1.0));
  dist.metadata = state.describe();
  dist.metadata["route"] = "closed-form";
  return dist;
}

NumberDistribution pn_binned_quadrature(const GaussianWignerState& state, int n_max) {
  if (n_max < 0) throw std::invalid_argument("pn_binned_quadrature: n_max must be >= 0");
  constexpr int kMaxPanels = 8;
  constexpr int kOrder = 24;
  const auto [r_lo, r_hi] = radial_support(state);
  const double u_lo = r_lo * r_lo;
  const double u_hi = r_hi * r_hi;
  NumberDistribution dist;
  dist.method = Method::Binned;
  dist.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  parallel_for_blocks(dist.probs.size(), [&](std::size_t n) {
    const double lo = std::max(static_cast<double>(n), u_lo);
    const double hi = std::min(static_cast<double>(n) + 1.0, u_hi);
    if (!(hi > lo)) return;
    // The narrowest feature spans about 2 sqrt(u) sigma_s in u; keep panels to half that.
    const double feature = std::sqrt(lo) * state.sigma_s();
    const int panels = feature > 0.0 ? static_cast<int>(std::clamp(std::ceil(1.0 / feature), 1.0, double(kMaxPanels))) : kMaxPanels;
    CompensatedSum sum;
    for (const auto& node : composite_gauss_legendre(lo, hi, panels, kOrder)) {
      sum.add(node.weight * angular_integral(state, std::sqrt(node.x)).value);
    }
    dist.probs[n] = 0.5 * sum.value();
  });
  dist.std_error = std::vector<double>(dist.probs.size(), 0.0);
  dist.overflow = 1.0 - dist.total();
  dist.metadata = state.describe();
  dist.metadata["route"] = "quadrature";
  return dist;
}

}  // namespace phasebin
