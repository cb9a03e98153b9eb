#pragma once

#include <cstdint>
#include <span>

namespace phasebin {

/// mantissa * 2^exponent. Used to carry recurrences far outside the double range.
struct ScaledReal {
  double mantissa = 0.0;
  std::int64_t exponent = 0;

  /// Nearest double; underflows to zero and overflows to +-inf.
  double value() const;
  /// log|value|, finite even when value() is not representable. -inf for zero.
  double log_abs() const;
};

/// e^{-x/2} L_n(x) together with its argument.
struct LaguerreScaledValue {
  double value = 0.0;
  int n = 0;
  double x = 0.0;
  ScaledReal scaled;
};

/// e^{-x/2} L_n(x) by the three-term recurrence carried with an explicit
/// base-2 exponent. The mantissa pair is renormalised whenever it leaves
/// [2^-512, 2^512], so no intermediate overflows or underflows.
/// Throws std::domain_error for n < 0 or x < 0.
LaguerreScaledValue laguerre_scaled(int n, double x);

/// out[k] = e^{-x/2} L_k(x) for k = 0 .. out.size()-1 in one recurrence pass.
void laguerre_scaled_sequence(double x, std::span<double> out);

}  // namespace phasebin
