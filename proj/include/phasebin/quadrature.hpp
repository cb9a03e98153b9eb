#pragma once

#include <vector>

#include "phasebin/phase_space.hpp"

namespace phasebin {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Nodes and weights of the order-point Gauss-Legendre rule (cached, thread safe).
const GaussLegendreRule& gauss_legendre(int order);

/// One node of a composite rule on [a, b].
struct QuadNode {
  double x;
  double weight;
};

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points each.
std::vector<QuadNode> composite_gauss_legendre(double a, double b, int panels, int order);

/// Angular integrals of a Gaussian Wigner function on the circle |alpha| = r:
/// value = int dphi W(r, phi), radial_derivative = d/dr of the same.
struct AngularIntegral {
  double value;
  double radial_derivative;
  int points;
};

/// Periodic trapezoid rule, doubled until two successive estimates agree to
/// rel_tol. The starting resolution resolves the narrowest axis of the state.
AngularIntegral angular_integral(const GaussianWignerState& state, double r, double rel_tol = 1e-13);

/// Radial extent [r_lo, r_hi] outside which the state carries no weight above ~e^{-40}.
std::pair<double, double> radial_support(const GaussianWignerState& state);

}  // namespace phasebin
