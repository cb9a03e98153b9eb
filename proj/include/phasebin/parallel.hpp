#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace phasebin {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

/// Caps the number of worker threads used by every parallel loop.
/// Zero restores the runtime default.
void set_worker_threads(int threads);
int worker_threads();

/// Runs body(block) for block in [0, blocks). Blocks may execute in any order
/// and on any worker; callers write results into per-block slots and reduce
/// them in block order so output never depends on scheduling.
void parallel_for_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);

/// Element-wise ordered reduction of per-block partial vectors.
std::vector<double> reduce_blocks(const std::vector<std::vector<double>>& partials);

}  // namespace phasebin
