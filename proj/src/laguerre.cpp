#include "phasebin/laguerre.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace phasebin {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kUpper = 0x1p512;
constexpr double kLower = 0x1p-512;

/// e^{-x/2} as mantissa * 2^exponent with the mantissa in [2^-1/2, 2^1/2].
ScaledReal scaled_exp_half_negative(double x) {
  const double e0 = std::nearbyint(-0.5 * x / (kLn2Hi + kLn2Lo));
  const double r = (-0.5 * x - e0 * kLn2Hi) - e0 * kLn2Lo;
  return {std::exp(r), static_cast<std::int64_t>(e0)};
}

/// Recurrence state: f_{k-1}, f_k share one exponent.
struct Recurrence {
  double prev;
  double cur;
  std::int64_t exponent;
  int k;
  double x;

  explicit Recurrence(double x_) : x(x_) {
    const ScaledReal f0 = scaled_exp_half_negative(x_);
    prev = 0.0;
    cur = f0.mantissa;
    exponent = f0.exponent;
    k = 0;
  }

  void advance() {
    const double kk = static_cast<double>(k);
    const double next = ((2.0 * kk + 1.0 - x) * cur - kk * prev) / (kk + 1.0);
    prev = cur;
    cur = next;
    ++k;
    const double big = std::max(std::abs(prev), std::abs(cur));
    if (big > kUpper || (big < kLower && big != 0.0)) {
      const int shift = std::ilogb(big);
      prev = std::ldexp(prev, -shift);
      cur = std::ldexp(cur, -shift);
      exponent += shift;
    }
  }
};

double to_double(double mantissa, std::int64_t exponent) {
  if (mantissa == 0.0) return 0.0;
  if (exponent > 4096) return std::copysign(std::numeric_limits<double>::infinity(), mantissa);
  if (exponent < -4096) return std::copysign(0.0, mantissa);
  return std::ldexp(mantissa, static_cast<int>(exponent));
}

}  // namespace

double ScaledReal::value() const { return to_double(mantissa, exponent); }

double ScaledReal::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

LaguerreScaledValue laguerre_scaled(int n, double x) {
  if (n < 0) throw std::domain_error("laguerre_scaled: n must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("laguerre_scaled: x must be finite and >= 0");
  Recurrence rec(x);
  while (rec.k < n) rec.advance();
  LaguerreScaledValue out;
  out.n = n;
  out.x = x;
  out.scaled = {rec.cur, rec.exponent};
  out.value = out.scaled.value();
  return out;
}

void laguerre_scaled_sequence(double x, std::span<double> out) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("laguerre_scaled_sequence: x must be finite and >= 0");
  if (out.empty()) return;
  Recurrence rec(x);
  // 2^exponent is cached while it is a normal double; otherwise fall back to ldexp.
  std::int64_t cached_exponent = rec.exponent;
  bool use_scale = cached_exponent > -1000 && cached_exponent < 1000;
  double scale = use_scale ? std::ldexp(1.0, static_cast<int>(cached_exponent)) : 0.0;
  out[0] = use_scale ? rec.cur * scale : to_double(rec.cur, rec.exponent);
  for (std::size_t k = 1; k < out.size(); ++k) {
    rec.advance();
    if (rec.exponent != cached_exponent) {
      cached_exponent = rec.exponent;
      use_scale = cached_exponent > -1000 && cached_exponent < 1000;
      scale = use_scale ? std::ldexp(1.0, static_cast<int>(cached_exponent)) : 0.0;
    }
    out[k] = use_scale ? rec.cur * scale : to_double(rec.cur, rec.exponent);
  }
}

}  // namespace phasebin
