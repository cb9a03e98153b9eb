#include "phasebin/analytic_states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <stdexcept>
#include <string>

#include "phasebin/parallel.hpp"

namespace phasebin {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::complex<double> scale2(std::complex<double> z, int e) {
  return {std::ldexp(z.real(), e), std::ldexp(z.imag(), e)};
}

constexpr int kAutoCap = 5000;
constexpr double kTailTarget = 1e-12;

/// log P_n for n = 0 .. n_max of a squeezed coherent state with s > 0.
std::vector<double> squeezed_log_probs(const SqueezedCoherentParams& p, int n_max) {
  const double t = std::tanh(p.s);
  const std::complex<double> beta = std::polar(p.beta_mag, p.varphi);
  const std::complex<double> w =
      (beta + std::conj(beta) * std::polar(t, p.theta)) * std::polar(1.0, -0.5 * p.theta);
  const double b2 = p.beta_mag * p.beta_mag;
  const double log_pref = -b2 * (1.0 + std::cos(2.0 * p.varphi - p.theta) * t) - std::log(std::cosh(p.s));

  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  std::complex<double> prev = 0.0;
  std::complex<double> cur = 1.0;
  std::int64_t exponent = 0;  // h_k = cur * 2^exponent, prev shares the exponent
  out[0] = log_pref;
  for (int k = 0; k < n_max; ++k) {
    const std::complex<double> next = (w * cur - t * std::sqrt(static_cast<double>(k)) * prev) /
                                      std::sqrt(static_cast<double>(k) + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag != 0.0 && (mag > 0x1p256 || mag < 0x1p-256)) {
      const int e = std::ilogb(mag);
      cur = scale2(cur, -e);
      prev = scale2(prev, -e);
      exponent += e;
    }
    const double a = std::abs(cur);
    out[static_cast<std::size_t>(k) + 1] =
        a == 0.0 ? -INFINITY : log_pref + 2.0 * (std::log(a) + static_cast<double>(exponent) * std::log(2.0));
  }
  return out;
}

std::vector<double> poisson_log_probs(double mean, int n_max) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  const double lm = mean > 0.0 ? std::log(mean) : -INFINITY;
  for (int n = 0; n <= n_max; ++n) {
    out[static_cast<std::size_t>(n)] = n == 0 ? -mean : -mean + n * lm - std::lgamma(n + 1.0);
  }
  return out;
}

std::vector<double> log_probs(const SqueezedCoherentParams& p, int n_max) {
  if (p.s == 0.0) return poisson_log_probs(p.beta_mag * p.beta_mag, n_max);
  return squeezed_log_probs(p, n_max);
}

std::vector<double> exp_all(const std::vector<double>& logs) {
  std::vector<double> out(logs.size());
  std::transform(logs.begin(), logs.end(), out.begin(), [](double l) { return std::exp(l); });
  return out;
}

}  // namespace

void validate(const SqueezedCoherentParams& p) {
  if (!(p.beta_mag >= 0.0) || !std::isfinite(p.beta_mag)) throw std::domain_error("|beta| must be finite and >= 0");
  if (!(p.s >= 0.0) || !std::isfinite(p.s)) throw std::domain_error("s must be finite and >= 0");
  if (!std::isfinite(p.varphi) || !std::isfinite(p.theta)) throw std::domain_error("angles must be finite");
}

GaussianWignerState to_state(const SqueezedCoherentParams& p) {
  validate(p);
  return GaussianWignerState::squeezed_coherent(PhaseAmplitude::polar(p.beta_mag, p.varphi), p.s, p.theta);
}

NumberDistribution pn_thermal(double nbar, int n_max) {
  if (!(nbar > 0.0) || !std::isfinite(nbar)) throw std::domain_error("pn_thermal: nbar must be > 0");
  if (n_max < 0) throw std::invalid_argument("pn_thermal: n_max must be >= 0");
  const double log_ratio = std::log1p(-1.0 / (nbar + 1.0));
  NumberDistribution dist;
  dist.method = Method::Analytic;
  dist.probs.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) dist.probs[static_cast<std::size_t>(n)] = std::exp(n * log_ratio) / (nbar + 1.0);
  dist.metadata = {{"state", "thermal"}, {"nbar", fmt(nbar)}};
  return dist;
}

NumberDistribution pn_poisson(double mean, int n_max) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::domain_error("pn_poisson: mean must be >= 0");
  if (n_max < 0) throw std::invalid_argument("pn_poisson: n_max must be >= 0");
  NumberDistribution dist;
  dist.method = Method::Analytic;
  dist.probs = exp_all(poisson_log_probs(mean, n_max));
  dist.metadata = {{"state", "coherent"}, {"beta2", fmt(mean)}};
  return dist;
}

int squeezed_auto_n_max(const SqueezedCoherentParams& p) {
  validate(p);
  const double b2 = p.beta_mag * p.beta_mag;
  int n_max = static_cast<int>(std::ceil(b2 + 10.0 * std::sqrt(number_variance(p)) + 20.0));
  n_max = std::min(n_max, kAutoCap);
  while (n_max < kAutoCap) {
    const double mass = compensated_sum(exp_all(log_probs(p, n_max)));
    if (1.0 - mass < kTailTarget) break;
    n_max = std::min(kAutoCap, n_max + std::max(50, n_max / 2));
  }
  return n_max;
}

NumberDistribution pn_squeezed_coherent(const SqueezedCoherentParams& p, int n_max) {
  validate(p);
  if (n_max < 0) n_max = squeezed_auto_n_max(p);
  NumberDistribution dist;
  dist.method = Method::Analytic;
  dist.probs = exp_all(log_probs(p, n_max));
  dist.metadata = {{"state", "squeezed_coherent"},
                   {"beta_mag", fmt(p.beta_mag)},
                   {"varphi", fmt(p.varphi)},
                   {"s", fmt(p.s)},
                   {"theta", fmt(p.theta)}};
  return dist;
}

double variance_formula(const SqueezedCoherentParams& p) {
  const double a = p.varphi - 0.5 * p.theta;
  const double c = std::cos(a);
  const double s = std::sin(a);
  return p.beta_mag * p.beta_mag * (std::exp(-2.0 * p.s) * c * c + std::exp(2.0 * p.s) * s * s);
}

double number_variance(const SqueezedCoherentParams& p) {
  const double sh = std::sinh(p.s);
  const double ch = std::cosh(p.s);
  return variance_formula(p) + 2.0 * sh * sh * ch * ch;
}

double sigma_eff(const SqueezedCoherentParams& p) {
  const double a = p.varphi - 0.5 * p.theta;
  const double c = std::cos(a);
  const double s = std::sin(a);
  const double ss = 0.5 * std::exp(-p.s);
  const double sa = 0.5 * std::exp(p.s);
  return std::sqrt(ss * ss * c * c + sa * sa * s * s);
}

SqueezedCoherentParams sigma_eff_sweep_point(double beta2, double sigma) {
  if (!(sigma > 0.0) || !(beta2 >= 0.0)) throw std::domain_error("sigma_eff_sweep_point: need sigma > 0, beta2 >= 0");
  SqueezedCoherentParams p;
  p.beta_mag = std::sqrt(beta2);
  if (sigma <= 0.5) {
    p.s = -std::log(2.0 * sigma);
    p.theta = 0.0;
  } else {
    p.s = std::log(2.0 * sigma);
    p.theta = kPi;
  }
  return p;
}

double db_thermal(double nbar) {
  if (!(nbar > 0.0) || !std::isfinite(nbar)) throw std::domain_error("db_thermal: nbar must be > 0");
  const double a = 1.0 / (2.0 * nbar + 1.0);
  if (a <= 0.2) {
    // The closed form below is a difference of O(1) logs that cancel to O(a^4);
    // for large nbar sum its Taylor series in a^2 instead.
    static constexpr double kCoeff[] = {
        0.013888888888888888,  0.0074074074074074077, 0.0052921075837742502, 0.0039425338036449152,
        0.0030860625550881283, 0.0024982709620055298, 0.002075365085809769,  0.0017592882188567393,
        0.0015158365265462298, 0.0013236675743893305, 0.0011688623248351934, 0.0010420010031948466,
        0.00093650747078691265, 0.00084766739743919232};
    const double a2 = a * a;
    double sum = 0.0;
    for (auto it = std::rbegin(kCoeff); it != std::rend(kCoeff); ++it) sum = sum * a2 + *it;
    return sum * a2 * a2;
  }
  const double sn = std::sqrt(nbar);
  const double sn1 = std::sqrt(nbar + 1.0);
  // sqrt(nbar+1) - sqrt(nbar) e^{-a}, rearranged to avoid cancellation.
  const double second = 1.0 / (sn1 + sn) - sn * std::expm1(-a);
  return -0.5 * std::log(-std::expm1(-2.0 * a)) + std::log(second);
}

}  // namespace phasebin
