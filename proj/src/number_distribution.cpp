#include "phasebin/number_distribution.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "phasebin/parallel.hpp"

namespace phasebin {

std::string to_string(Method method) {
  switch (method) {
    case Method::Binned: return "binned";
    case Method::Analytic: return "analytic";
    case Method::Quadrature: return "quadrature";
    case Method::WignerAverage: return "wigner-average";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "binned") return Method::Binned;
  if (name == "analytic") return Method::Analytic;
  if (name == "quadrature") return Method::Quadrature;
  if (name == "wigner-average") return Method::WignerAverage;
  throw std::invalid_argument("unknown method '" + name + "'");
}

bool is_stochastic(Method method) { return method == Method::Binned || method == Method::WignerAverage; }

double NumberDistribution::at(int n) const {
  if (n < 0 || n >= static_cast<int>(probs.size())) return 0.0;
  return probs[static_cast<std::size_t>(n)];
}

double NumberDistribution::error_at(int n) const {
  if (!std_error || n < 0 || n >= static_cast<int>(std_error->size())) return 0.0;
  return (*std_error)[static_cast<std::size_t>(n)];
}

double NumberDistribution::total() const { return compensated_sum(probs); }

double NumberDistribution::mean() const {
  CompensatedSum s;
  for (std::size_t n = 0; n < probs.size(); ++n) s.add(static_cast<double>(n) * probs[n]);
  return s.value();
}

std::string validate(const NumberDistribution& dist, double tail_tolerance) {
  if (dist.std_error.has_value() != is_stochastic(dist.method)) {
    return "standard errors must be present exactly for stochastic methods";
  }
  if (dist.std_error && dist.std_error->size() != dist.probs.size()) return "standard error length mismatch";
  if (!is_stochastic(dist.method)) {
    for (std::size_t n = 0; n < dist.probs.size(); ++n) {
      const double p = dist.probs[n];
      if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) return "entry " + std::to_string(n) + " outside [0, 1]";
    }
  }
  const double total = dist.total() + dist.overflow;
  if (dist.method == Method::Binned && std::abs(total - 1.0) > 1e-12) return "binned mass plus overflow != 1";
  if (!is_stochastic(dist.method)) {
    if (total > 1.0 + 1e-9) return "total mass exceeds 1";
    if (total < 1.0 - tail_tolerance) return "total mass below 1 - tail tolerance";
  }
  return {};
}

void write_distribution_csv(std::ostream& out, const NumberDistribution& dist) {
  out << "# method=" << to_string(dist.method) << "\n";
  out << "# n_max=" << dist.n_max() << "\n";
  out << "# samples=" << dist.samples << "\n";
  const auto old_precision = out.precision(17);
  out << "# overflow=" << dist.overflow << "\n";
  for (const auto& [k, v] : dist.metadata) out << "# " << k << "=" << v << "\n";
  out << "n,p,stderr,method\n";
  const std::string m = to_string(dist.method);
  for (std::size_t n = 0; n < dist.probs.size(); ++n) {
    out << n << ',' << dist.probs[n] << ',';
    if (dist.std_error) out << (*dist.std_error)[n];
    out << ',' << m << '\n';
  }
  out.precision(old_precision);
}

NumberDistribution read_distribution_csv(std::istream& in) {
  NumberDistribution dist;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "method") {
        dist.method = method_from_string(value);
      } else if (key == "samples") {
        dist.samples = std::stoull(value);
      } else if (key == "overflow") {
        dist.overflow = std::stod(value);
      } else if (key != "n_max") {
        dist.metadata[key] = value;
      }
      continue;
    }
    if (line == "n,p,stderr,method") {
      have_header = true;
      break;
    }
    throw std::runtime_error("read_distribution_csv: unexpected line '" + line + "'");
  }
  if (!have_header) throw std::runtime_error("read_distribution_csv: missing column header");
  std::vector<double> errors;
  bool any_error = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string n, p, e, m;
    std::getline(row, n, ',');
    std::getline(row, p, ',');
    std::getline(row, e, ',');
    std::getline(row, m);
    if (static_cast<std::size_t>(std::stoul(n)) != dist.probs.size()) {
      throw std::runtime_error("read_distribution_csv: rows out of order");
    }
    dist.probs.push_back(std::stod(p));
    errors.push_back(e.empty() ? 0.0 : std::stod(e));
    any_error = any_error || !e.empty();
  }
  if (any_error || is_stochastic(dist.method)) dist.std_error = std::move(errors);
  return dist;
}

}  // namespace phasebin
