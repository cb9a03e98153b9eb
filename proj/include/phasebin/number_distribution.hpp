#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phasebin {

enum class Method { Binned, Analytic, Quadrature, WignerAverage };

std::string to_string(Method method);
Method method_from_string(const std::string& name);
/// Binned and WignerAverage estimates come from samples and carry standard errors.
bool is_stochastic(Method method);

/// Probability mass over n = 0 .. n_max.
struct NumberDistribution {
  Method method = Method::Analytic;
  std::vector<double> probs;
  /// Standard error per entry; present iff the method is stochastic.
  std::optional<std::vector<double>> std_error;
  /// Fraction of samples beyond n_max (binned estimates only).
  double overflow = 0.0;
  /// Number of samples behind a stochastic estimate.
  std::size_t samples = 0;
  std::map<std::string, std::string> metadata;

  int n_max() const { return static_cast<int>(probs.size()) - 1; }
  /// P_n, zero outside the stored range.
  double at(int n) const;
  double error_at(int n) const;
  double total() const;
  double mean() const;
};

/// Checks entry range and total mass. Stochastic estimates are exempt from the
/// per-entry [0, 1] bound since sample means of W_n can fall slightly outside it.
/// Returns an empty string when valid, else a description of the violation.
std::string validate(const NumberDistribution& dist, double tail_tolerance = 1e-6);

/// CSV: '#'-prefixed metadata lines, then columns n,p,stderr,method.
void write_distribution_csv(std::ostream& out, const NumberDistribution& dist);
NumberDistribution read_distribution_csv(std::istream& in);

}  // namespace phasebin
