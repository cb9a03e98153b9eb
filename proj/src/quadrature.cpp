#include "phasebin/quadrature.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "phasebin/parallel.hpp"

namespace phasebin {

namespace {

GaussLegendreRule build_rule(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(order));
  return *slot;
}

std::vector<QuadNode> composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
  const auto& rule = gauss_legendre(order);
  std::vector<QuadNode> out;
  out.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      out.push_back({mid + 0.5 * h * rule.nodes[i], 0.5 * h * rule.weights[i]});
    }
  }
  return out;
}

AngularIntegral angular_integral(const GaussianWignerState& state, double r, double rel_tol) {
  if (r == 0.0) {
    const double w = density(state, {0.0, 0.0});
    return {kTwoPi * w, 0.0, 1};
  }
  auto eval = [&](double phi, double& value, double& deriv) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const PhaseAmplitude a{r * c, r * s};
    const auto g = density_gradient(state, a);
    value += density(state, a);
    deriv += g[0] * c + g[1] * s;
  };
  // Start with ~8 points across the narrowest angular feature width sigma_s / r.
  const double want = 8.0 * kTwoPi * r / state.sigma_s();
  std::size_t m = std::bit_ceil(static_cast<std::size_t>(std::max(64.0, std::min(want, 1048576.0))));
  double sum_v = 0.0;
  double sum_d = 0.0;
  for (std::size_t i = 0; i < m; ++i) eval(kTwoPi * static_cast<double>(i) / static_cast<double>(m), sum_v, sum_d);
  double prev_v = kTwoPi * sum_v / static_cast<double>(m);
  double prev_d = kTwoPi * sum_d / static_cast<double>(m);
  for (int level = 0; level < 12; ++level) {
    for (std::size_t i = 0; i < m; ++i) {
      eval(kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(m), sum_v, sum_d);
    }
    m *= 2;
    const double v = kTwoPi * sum_v / static_cast<double>(m);
    const double d = kTwoPi * sum_d / static_cast<double>(m);
    const double scale_v = std::max(std::abs(v), 1e-300);
    const double scale_d = std::max({std::abs(d), std::abs(v) / std::max(r, 1e-3), 1e-300});
    const bool done = std::abs(v - prev_v) <= rel_tol * scale_v && std::abs(d - prev_d) <= rel_tol * scale_d;
    prev_v = v;
    prev_d = d;
    if (done) break;
  }
  return {prev_v, prev_d, static_cast<int>(m)};
}

std::pair<double, double> radial_support(const GaussianWignerState& state) {
  const double reach = 9.0 * state.sigma_a();
  const double b = state.beta().abs();
  return {std::max(0.0, b - reach), b + reach};
}

}  // namespace phasebin
