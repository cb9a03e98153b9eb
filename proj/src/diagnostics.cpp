#include "phasebin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "phasebin/parallel.hpp"
#include "phasebin/quadrature.hpp"

namespace phasebin {

namespace {

constexpr int kMinGridPoints = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid(const RadialGrid& grid) {
  if (grid.points < kMinGridPoints) throw std::invalid_argument("radial grid needs at least 200 points");
  if (!(grid.r_max > 0.0) || !std::isfinite(grid.r_max)) throw std::invalid_argument("radial grid needs r_max > 0");
}

RadialProfile empty_profile(ProfileSource source, const RadialGrid& grid) {
  RadialProfile p;
  p.source = source;
  p.dr = grid.dr();
  p.r.resize(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i) p.r[static_cast<std::size_t>(i)] = grid.centre(i);
  return p;
}

double inhomogeneity(double w, double dw) { return dw == 0.0 ? kInf : w / std::abs(dw); }

/// Boxcar-smooths w_raw into w, differentiates, and fills l_inh and r w.
void finish_sampled(RadialProfile& p, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  const std::size_t m = p.w_raw.size();
  const std::ptrdiff_t half = window / 2;
  p.w.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(m) - 1,
                                                       static_cast<std::ptrdiff_t>(i) + half);
    double s = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) s += p.w_raw[static_cast<std::size_t>(j)];
    p.w[i] = s / static_cast<double>(hi - lo + 1);
  }
  p.dw.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (m < 2) break;
    if (i == 0) {
      p.dw[i] = (p.w[1] - p.w[0]) / p.dr;
    } else if (i + 1 == m) {
      p.dw[i] = (p.w[i] - p.w[i - 1]) / p.dr;
    } else {
      p.dw[i] = (p.w[i + 1] - p.w[i - 1]) / (2.0 * p.dr);
    }
  }
  p.l_inh.resize(m);
  p.radial_density.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    p.l_inh[i] = inhomogeneity(p.w[i], p.dw[i]);
    p.radial_density[i] = p.r[i] * p.w[i];
  }
}

}  // namespace

std::string to_string(ProfileSource source) {
  return source == ProfileSource::Analytic ? "analytic" : "histogram";
}

double RadialProfile::normalization() const {
  CompensatedSum s;
  for (double v : radial_density) s.add(v * dr);
  return s.value();
}

RadialProfile radial_profile(const GaussianWignerState& state, const RadialGrid& grid) {
  check_grid(grid);
  RadialProfile p = empty_profile(ProfileSource::Analytic, grid);
  const std::size_t m = p.r.size();
  p.w.resize(m);
  p.dw.resize(m);
  parallel_for_blocks(m, [&](std::size_t i) {
    const auto a = angular_integral(state, p.r[i]);
    p.w[i] = a.value;
    p.dw[i] = a.radial_derivative;
  });
  p.l_inh.resize(m);
  p.radial_density.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    p.l_inh[i] = inhomogeneity(p.w[i], p.dw[i]);
    p.radial_density[i] = p.r[i] * p.w[i];
  }
  return p;
}

RadialProfile radial_profile(const TrajectoryEnsemble& ensemble, std::size_t mode, const RadialGrid& grid,
                             int smoothing_window) {
  check_grid(grid);
  const auto samples = ensemble.mode(mode);
  if (samples.empty()) throw std::invalid_argument("radial_profile: empty ensemble");
  RadialProfile p = empty_profile(ProfileSource::Histogram, grid);
  const std::size_t m = p.r.size();
  const std::size_t blocks = (samples.size() + kStreamBlock - 1) / kStreamBlock;
  std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(m, 0));
  const double dr = p.dr;
  parallel_for_blocks(blocks, [&](std::size_t block) {
    auto& counts = partial[block];
    const std::size_t end = std::min(samples.size(), (block + 1) * kStreamBlock);
    for (std::size_t i = block * kStreamBlock; i < end; ++i) {
      const double k = std::floor(samples[i].abs() / dr);
      if (k < static_cast<double>(m)) counts[static_cast<std::size_t>(k)] += 1;
    }
  });
  const double total = static_cast<double>(samples.size());
  p.samples = samples.size();
  p.w_raw.assign(m, 0.0);
  p.w_std_error.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t c = 0;
    for (const auto& part : partial) c += part[i];
    // w = (fraction in the annulus) / (annulus measure dr * r)
    const double scale = 1.0 / (total * dr * p.r[i]);
    p.w_raw[i] = static_cast<double>(c) * scale;
    p.w_std_error[i] = std::sqrt(static_cast<double>(c)) * scale;
  }
  finish_sampled(p, smoothing_window);
  return p;
}

double Histogram2D::interpolate(double x, double y) const {
  const double fx = (x - x0) / width - 0.5;
  const double fy = (y - y0) / width - 0.5;
  const double ix = std::floor(fx);
  const double iy = std::floor(fy);
  const double tx = fx - ix;
  const double ty = fy - iy;
  auto cell = [&](double cx, double cy) {
    if (cx < 0.0 || cy < 0.0 || cx >= nx || cy >= ny) return 0.0;
    return at(static_cast<int>(cx), static_cast<int>(cy));
  };
  return (1.0 - tx) * (1.0 - ty) * cell(ix, iy) + tx * (1.0 - ty) * cell(ix + 1.0, iy) +
         (1.0 - tx) * ty * cell(ix, iy + 1.0) + tx * ty * cell(ix + 1.0, iy + 1.0);
}

Histogram2D histogram_2d(const TrajectoryEnsemble& ensemble, std::size_t mode, double width, double extent) {
  if (!(width > 0.0) || !(extent > 0.0)) throw std::invalid_argument("histogram_2d: width and extent must be > 0");
  const auto samples = ensemble.mode(mode);
  if (samples.empty()) throw std::invalid_argument("histogram_2d: empty ensemble");
  Histogram2D h;
  h.width = width;
  h.nx = h.ny = static_cast<int>(std::ceil(2.0 * extent / width));
  h.x0 = h.y0 = -0.5 * h.nx * width;
  h.samples = samples.size();
  const std::size_t cells = static_cast<std::size_t>(h.nx) * static_cast<std::size_t>(h.ny);
  const std::size_t blocks = (samples.size() + kStreamBlock - 1) / kStreamBlock;
  std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(cells, 0));
  parallel_for_blocks(blocks, [&](std::size_t block) {
    auto& counts = partial[block];
    const std::size_t end = std::min(samples.size(), (block + 1) * kStreamBlock);
    for (std::size_t i = block * kStreamBlock; i < end; ++i) {
      const double fx = std::floor((samples[i].re - h.x0) / width);
      const double fy = std::floor((samples[i].im - h.y0) / width);
      if (fx < 0.0 || fy < 0.0 || fx >= h.nx || fy >= h.ny) continue;
      counts[static_cast<std::size_t>(fy) * static_cast<std::size_t>(h.nx) + static_cast<std::size_t>(fx)] += 1;
    }
  });
  const double scale = 1.0 / (static_cast<double>(samples.size()) * width * width);
  h.density.assign(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::uint64_t total = 0;
    for (const auto& part : partial) total += part[c];
    h.density[c] = static_cast<double>(total) * scale;
  }
  return h;
}

void write_histogram_csv(std::ostream& out, const Histogram2D& hist) {
  const auto old = out.precision(17);
  out << "# width=" << hist.width << "\n# samples=" << hist.samples << "\n";
  out << "x,y,density\n";
  for (int iy = 0; iy < hist.ny; ++iy) {
    for (int ix = 0; ix < hist.nx; ++ix) {
      out << hist.x0 + (ix + 0.5) * hist.width << ',' << hist.y0 + (iy + 0.5) * hist.width << ','
          << hist.at(ix, iy) << '\n';
    }
  }
  out.precision(old);
}

RadialProfile radial_profile(const Histogram2D& hist, const RadialGrid& grid, int smoothing_window) {
  check_grid(grid);
  RadialProfile p = empty_profile(ProfileSource::Histogram, grid);
  p.samples = hist.samples;
  const std::size_t m = p.r.size();
  p.w_raw.assign(m, 0.0);
  parallel_for_blocks(m, [&](std::size_t i) {
    const double r = p.r[i];
    const int points = std::max(64, static_cast<int>(std::ceil(kTwoPi * r / (0.25 * hist.width))));
    double s = 0.0;
    for (int k = 0; k < points; ++k) {
      const double phi = kTwoPi * k / points;
      s += hist.interpolate(r * std::cos(phi), r * std::sin(phi));
    }
    p.w_raw[i] = kTwoPi * s / points;
  });
  finish_sampled(p, smoothing_window);
  return p;
}

SmoothnessResult smoothness_check(const RadialProfile& profile, int n, double threshold, double epsilon) {
  if (n < 0) throw std::invalid_argument("smoothness_check: n must be >= 0");
  if (profile.r.empty()) throw std::invalid_argument("smoothness_check: empty profile");
  const double edge = std::sqrt(n + 1.0);
  if (profile.r.back() + 0.5 * profile.dr < edge) {
    throw std::invalid_argument("smoothness_check: profile does not cover r = sqrt(n+1)");
  }
  SmoothnessResult result;
  result.n = n;
  const double w_max = *std::max_element(profile.w.begin(), profile.w.end());
  const double root_n = std::sqrt(static_cast<double>(n));
  auto scan = [&](double floor_w, bool strict) {
    bool any = false;
    double best = kInf;
    double at = 0.0;
    for (std::size_t i = 0; i < profile.r.size() && profile.r[i] <= edge; ++i) {
      const double w = profile.w[i];
      if (strict ? !(w > floor_w) : !(w >= floor_w)) continue;
      const double v = root_n * profile.l_inh[i];
      if (!any || v < best) {
        best = v;
        at = profile.r[i];
      }
      any = true;
    }
    return std::make_tuple(any, best, at);
  };
  auto [found, best, at] = scan(epsilon * w_max, false);
  if (!found || !(w_max > 0.0)) {
    std::tie(found, best, at) = scan(0.0, true);
    result.tail_only = true;
  }
  if (!found) {
    result.pass = false;
    result.min_value = 0.0;
    return result;
  }
  if (n == 0) best = 0.0;
  result.min_value = best;
  result.r_at_min = at;
  result.pass = best >= threshold;
  return result;
}

namespace {

std::string mass_warning(const NumberDistribution& d, const char* which) {
  const double mass = d.total() + d.overflow;
  if (std::abs(mass - 1.0) > 0.01) {
    return std::string(which) + " mass " + std::to_string(mass) + " deviates from 1 by more than 0.01";
  }
  return {};
}

double distance_from(double b) { return b > 0.0 ? -std::log(b) : kInf; }

}  // namespace

Bhattacharyya bhattacharyya(const NumberDistribution& p, const NumberDistribution& q) {
  Bhattacharyya out;
  const int n = std::min(p.n_max(), q.n_max());
  CompensatedSum s;
  for (int k = 0; k <= n; ++k) s.add(std::sqrt(std::max(0.0, p.at(k)) * std::max(0.0, q.at(k))));
  out.coefficient = s.value();
  out.distance = distance_from(out.coefficient);
  std::string w = mass_warning(p, "first");
  const std::string wq = mass_warning(q, "second");
  if (!wq.empty()) w += (w.empty() ? "" : "; ") + wq;
  out.warning = w;
  return out;
}

StochasticBhattacharyya bhattacharyya_stochastic(const NumberDistribution& exact, const NumberDistribution& binned) {
  if (binned.samples == 0) throw std::invalid_argument("bhattacharyya_stochastic: binned estimate has no samples");
  const double count = static_cast<double>(binned.samples);
  const int n = std::min(exact.n_max(), binned.n_max());
  CompensatedSum b;
  CompensatedSum bias;
  CompensatedSum support;
  for (int k = 0; k <= n; ++k) {
    const double p = std::max(0.0, exact.at(k));
    const double q = std::max(0.0, binned.at(k));
    if (q <= 0.0) continue;
    b.add(std::sqrt(p * q));
    bias.add(std::sqrt(p / q) * (1.0 - q) / (8.0 * count));
    support.add(p);
  }
  StochasticBhattacharyya out;
  out.raw_coefficient = b.value();
  out.raw_distance = distance_from(out.raw_coefficient);
  out.coefficient = out.raw_coefficient + bias.value();
  out.distance = distance_from(out.coefficient);
  const double var = std::max(0.0, support.value() - out.raw_coefficient * out.raw_coefficient) / (4.0 * count);
  out.coefficient_std_error = std::sqrt(var);
  out.distance_std_error = out.coefficient > 0.0 ? out.coefficient_std_error / out.coefficient : kInf;
  return out;
}

ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("fit_scaling_exponent: need at least 4 points");
  double x_min = kInf;
  double x_max = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw std::domain_error("fit_scaling_exponent: values must be finite and positive");
    }
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
  }
  if (x_max / x_min < 4.0) throw std::invalid_argument("fit_scaling_exponent: x range must span a factor of 4");
  const double m = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (const auto& [x, y] : points) {
    const double e = std::log(y) - fit.intercept - fit.exponent * std::log(x);
    rss += e * e;
  }
  fit.std_error = std::sqrt(rss / (m - 2.0) / sxx);
  fit.points = points;
  return fit;
}

int count_local_maxima(const std::vector<double>& values, double tolerance) {
  if (values.empty()) return 0;
  int count = 0;
  bool rising = false;
  double lo = values[0];
  double hi = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double x = values[i];
    if (!rising) {
      lo = std::min(lo, x);
      if (x > lo + tolerance) {
        rising = true;
        hi = x;
      }
    } else {
      hi = std::max(hi, x);
      if (x < hi - tolerance) {
        ++count;
        rising = false;
        lo = x;
      }
    }
  }
  return count;
}

void write_profile_csv(std::ostream& out, const RadialProfile& profile) {
  const auto old = out.precision(17);
  out << "# source=" << to_string(profile.source) << "\n# dr=" << profile.dr << "\n";
  if (profile.samples != 0) out << "# samples=" << profile.samples << "\n";
  out << "r,w,l_inh\n";
  for (std::size_t i = 0; i < profile.r.size(); ++i) {
    out << profile.r[i] << ',' << profile.w[i] << ',';
    if (std::isinf(profile.l_inh[i])) {
      out << "inf";
    } else {
      out << profile.l_inh[i];
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace phasebin
