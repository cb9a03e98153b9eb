#include "phasebin/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>

#include "phasebin/parallel.hpp"
#include "phasebin/quadrature.hpp"
#include "phasebin/rng.hpp"

namespace phasebin {

double fock_wigner(int n, PhaseAmplitude alpha) {
  if (!alpha.finite()) throw std::domain_error("fock_wigner: non-finite alpha");
  const double v = laguerre_scaled(n, 4.0 * alpha.norm2()).value;
  return (n % 2 == 0 ? 2.0 : -2.0) / kPi * v;
}

void fock_wigner_sequence(double norm2, std::span<double> out) {
  laguerre_scaled_sequence(4.0 * norm2, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= (k % 2 == 0 ? 2.0 : -2.0) / kPi;
}

// ---------------------------------------------------------------------------
// Gaussian ring

namespace {
constexpr int kRingTable = 4096;
constexpr double kRingHalfWidth = 5.0;  // in u = |alpha|^2; the marginal has rms 1/2
}  // namespace

FockGaussianRing::FockGaussianRing(int n) : n_(n) {
  if (n < 0) throw std::domain_error("FockGaussianRing: n must be >= 0");
  const double c = n + 0.5;
  const double lo = std::max(0.0, c - kRingHalfWidth);
  const double hi = c + kRingHalfWidth;
  // pi * int_0^inf exp(-2(u-c)^2) du with d^2 alpha = pi du after the angular integral.
  double integral = 0.0;
  for (const auto& node : composite_gauss_legendre(lo, hi, 16, 24)) {
    integral += node.weight * std::exp(-2.0 * (node.x - c) * (node.x - c));
  }
  norm_ = 1.0 / (kPi * integral);

  u_grid_.resize(kRingTable);
  cdf_.resize(kRingTable);
  const double h = (hi - lo) / (kRingTable - 1);
  double acc = 0.0;
  double prev = std::exp(-2.0 * (lo - c) * (lo - c));
  u_grid_[0] = lo;
  cdf_[0] = 0.0;
  for (int i = 1; i < kRingTable; ++i) {
    const double u = lo + i * h;
    const double f = std::exp(-2.0 * (u - c) * (u - c));
    acc += 0.5 * h * (prev + f);
    prev = f;
    u_grid_[static_cast<std::size_t>(i)] = u;
    cdf_[static_cast<std::size_t>(i)] = acc;
  }
  for (double& v : cdf_) v /= acc;
}

double FockGaussianRing::density(PhaseAmplitude alpha) const {
  const double d = alpha.norm2() - n_ - 0.5;
  return norm_ * std::exp(-2.0 * d * d);
}

TrajectoryEnsemble FockGaussianRing::sample(std::size_t count, std::uint64_t seed) const {
  if (count == 0) throw std::invalid_argument("FockGaussianRing::sample: count must be >= 1");
  const std::size_t streams = (count + kStreamBlock - 1) / kStreamBlock;
  TrajectoryEnsemble ens(1, count, seed, streams);
  auto out = ens.mode(0);
  parallel_for_blocks(streams, [&](std::size_t block) {
    auto engine = stream_engine(seed, block, 1);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::size_t begin = block * kStreamBlock;
    const std::size_t end = std::min(count, begin + kStreamBlock);
    for (std::size_t i = begin; i < end; ++i) {
      const double q = uniform(engine);
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), q);
      const std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), 1, cdf_.size() - 1);
      const double c0 = cdf_[j - 1];
      const double c1 = cdf_[j];
      const double t = c1 > c0 ? (q - c0) / (c1 - c0) : 0.0;
      const double u = u_grid_[j - 1] + t * (u_grid_[j] - u_grid_[j - 1]);
      out[i] = PhaseAmplitude::polar(std::sqrt(u), kTwoPi * uniform(engine));
    }
  });
  ens.metadata()["state"] = "fock_gaussian_ring";
  ens.metadata()["n"] = std::to_string(n_);
  return ens;
}

namespace {

std::shared_ptr<const FockGaussianRing> cached_ring(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const FockGaussianRing>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const FockGaussianRing>(n);
  return slot;
}

}  // namespace

double fock_gaussian_ring_density(int n, PhaseAmplitude alpha) { return cached_ring(n)->density(alpha); }

TrajectoryEnsemble sample_fock_gaussian_ring(int n, std::size_t count, std::uint64_t seed) {
  return cached_ring(n)->sample(count, seed);
}

// ---------------------------------------------------------------------------
// Overlap quadrature

int auto_n_max(const GaussianWignerState& state) {
  if (state.kind() == StateKind::Thermal && state.nbar() > 0.0) {
    // Geometric tail (nbar/(nbar+1))^{n+1} below 1e-12.
    const double n = std::log(1e-12) / std::log1p(-1.0 / (state.nbar() + 1.0));
    return static_cast<int>(std::clamp(std::ceil(n), 20.0, 5000.0));
  }
  const double moments = state.mean_occupation() + 10.0 * std::sqrt(state.number_variance()) + 20.0;
  // Squeezed number tails are far from Gaussian; also reach 7.5 sigma along the long axis.
  const double reach = state.beta().abs() + 7.5 * state.sigma_a();
  return static_cast<int>(std::clamp(std::ceil(std::max(moments, reach * reach)), 20.0, 5000.0));
}

namespace {

constexpr std::size_t kNodeChunk = 32;

/// One pass of the composite rule: returns P_n for n = 0..n_max.
std::vector<double> overlap_pass(const GaussianWignerState& state, int n_max, double r_lo, double r_hi, int panels,
                                 int order) {
  const auto nodes = composite_gauss_legendre(r_lo, r_hi, panels, order);
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  const std::size_t chunks = (nodes.size() + kNodeChunk - 1) / kNodeChunk;
  std::vector<std::vector<double>> partials(chunks, std::vector<double>(len, 0.0));
  parallel_for_blocks(chunks, [&](std::size_t chunk) {
    std::vector<double> ell(len);
    auto& acc = partials[chunk];
    const std::size_t end = std::min(nodes.size(), (chunk + 1) * kNodeChunk);
    for (std::size_t i = chunk * kNodeChunk; i < end; ++i) {
      const double r = nodes[i].x;
      const double ang = angular_integral(state, r).value;
      // P_n = pi int r dr A(r) W_n(r) = 2 int r dr A(r) (-1)^n e^{-2 r^2} L_n(4 r^2)
      const double w = 2.0 * nodes[i].weight * r * ang;
      if (w == 0.0) continue;
      laguerre_scaled_sequence(4.0 * r * r, ell);
      for (std::size_t n = 0; n < len; ++n) acc[n] += (n % 2 == 0 ? w : -w) * ell[n];
    }
  });
  return reduce_blocks(partials);
}

}  // namespace

QuadratureResult pn_quadrature(const GaussianWignerState& state, int n_max, const QuadratureOptions& options) {
  if (n_max < 0) throw std::invalid_argument("pn_quadrature: n_max must be >= 0");
  const auto [r_lo, r_hi] = radial_support(state);
  const double span = r_hi - r_lo;
  // Fock oscillations have radial wavelength >= pi / sqrt(2 n + 1); aim for a few per panel,
  // and several panels across the narrowest width of the state.
  const double per_oscillation = span * std::sqrt(2.0 * n_max + 1.0) / (4.0 * kPi);
  const double per_width = span / state.sigma_s();
  int panels = static_cast<int>(std::clamp(std::ceil(std::max(per_oscillation, per_width)), 4.0, 1e6));

  QuadratureResult result;
  auto previous = overlap_pass(state, n_max, r_lo, r_hi, panels, options.order);
  std::vector<double> current;
  std::vector<double> error(previous.size(), 0.0);
  for (int level = 0; level < options.max_levels; ++level) {
    panels *= 2;
    current = overlap_pass(state, n_max, r_lo, r_hi, panels, options.order);
    double worst = 0.0;
    for (std::size_t n = 0; n < current.size(); ++n) {
      error[n] = std::abs(current[n] - previous[n]);
      worst = std::max(worst, error[n]);
    }
    previous = current;
    if (worst <= options.tolerance) break;
  }
  for (std::size_t n = 0; n < error.size(); ++n) {
    if (error[n] > options.failure_threshold) result.failed_entries.push_back(static_cast<int>(n));
  }
  result.dist.method = Method::Quadrature;
  result.dist.probs = std::move(previous);
  result.dist.metadata = state.describe();
  result.dist.metadata["panels"] = std::to_string(panels);
  result.error_estimate = std::move(error);
  return result;
}

// ---------------------------------------------------------------------------
// Wigner-function average

WignerAverageResult pn_wigner_average(const TrajectoryEnsemble& ensemble, int n_max, std::size_t mode) {
  if (n_max < 0) throw std::invalid_argument("pn_wigner_average: n_max must be >= 0");
  const auto samples = ensemble.mode(mode);
  if (samples.empty()) throw std::invalid_argument("pn_wigner_average: empty ensemble");
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  const std::size_t blocks = (samples.size() + kStreamBlock - 1) / kStreamBlock;
  // Per block: [sum x_n (len), sum x_n^2 (len), sum total, sum total^2].
  std::vector<std::vector<double>> partials(blocks, std::vector<double>(2 * len + 2, 0.0));
  parallel_for_blocks(blocks, [&](std::size_t block) {
    std::vector<double> ell(len);
    auto& acc = partials[block];
    const std::size_t end = std::min(samples.size(), (block + 1) * kStreamBlock);
    for (std::size_t i = block * kStreamBlock; i < end; ++i) {
      laguerre_scaled_sequence(4.0 * samples[i].norm2(), ell);
      double total = 0.0;
      for (std::size_t n = 0; n < len; ++n) {
        const double x = (n % 2 == 0 ? 2.0 : -2.0) * ell[n];  // pi W_n(alpha)
        acc[n] += x;
        acc[len + n] += x * x;
        total += x;
      }
      acc[2 * len] += total;
      acc[2 * len + 1] += total * total;
    }
  });
  const auto sums = reduce_blocks(partials);
  const double count = static_cast<double>(samples.size());
  auto stderr_of = [count](double s, double s2) {
    if (count < 2.0) return 0.0;
    const double var = std::max(0.0, (s2 - s * s / count) / (count - 1.0));
    return std::sqrt(var / count);
  };
  WignerAverageResult out;
  out.dist.method = Method::WignerAverage;
  out.dist.samples = samples.size();
  out.dist.probs.resize(len);
  out.dist.std_error = std::vector<double>(len);
  for (std::size_t n = 0; n < len; ++n) {
    out.dist.probs[n] = sums[n] / count;
    (*out.dist.std_error)[n] = stderr_of(sums[n], sums[len + n]);
  }
  out.total = sums[2 * len] / count;
  out.total_std_error = stderr_of(sums[2 * len], sums[2 * len + 1]);
  out.dist.metadata = ensemble.metadata();
  out.dist.metadata["seed"] = std::to_string(ensemble.seed());
  out.dist.metadata["mode"] = std::to_string(mode);
  return out;
}

}  // namespace phasebin
