#include "phasebin/phase_space.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "phasebin/parallel.hpp"
#include "phasebin/rng.hpp"

namespace phasebin {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_finite(PhaseAmplitude a, const char* what) {
  if (!a.finite()) throw std::domain_error(std::string(what) + ": non-finite phase amplitude");
}

}  // namespace

PhaseAmplitude PhaseAmplitude::checked(double re, double im) {
  PhaseAmplitude a{re, im};
  require_finite(a, "PhaseAmplitude");
  return a;
}

double PhaseAmplitude::arg() const {
  double phi = std::atan2(im, re);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi -= kTwoPi;
  return phi;
}

bool PhaseAmplitude::finite() const { return std::isfinite(re) && std::isfinite(im); }

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Vacuum: return "vacuum";
    case StateKind::Coherent: return "coherent";
    case StateKind::Thermal: return "thermal";
    case StateKind::SqueezedCoherent: return "squeezed_coherent";
  }
  return "unknown";
}

GaussianWignerState::GaussianWignerState(StateKind kind, PhaseAmplitude beta, double sigma_s,
                                         double sigma_a, double theta, double squeeze, double nbar)
    : kind_(kind), beta_(beta), sigma_s_(sigma_s), sigma_a_(sigma_a), theta_(theta), squeeze_(squeeze),
      nbar_(nbar) {}

GaussianWignerState GaussianWignerState::vacuum() {
  return {StateKind::Vacuum, {}, 0.5, 0.5, 0.0, 0.0, 0.0};
}

GaussianWignerState GaussianWignerState::coherent(PhaseAmplitude beta) {
  require_finite(beta, "coherent state");
  return {StateKind::Coherent, beta, 0.5, 0.5, 0.0, 0.0, 0.0};
}

GaussianWignerState GaussianWignerState::thermal(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::domain_error("thermal state: nbar must be >= 0");
  const double sigma = std::sqrt((nbar + 0.5) / 2.0);
  return {StateKind::Thermal, {}, sigma, sigma, 0.0, 0.0, nbar};
}

GaussianWignerState GaussianWignerState::squeezed_coherent(PhaseAmplitude beta, double s, double theta) {
  require_finite(beta, "squeezed coherent state");
  if (!(s >= 0.0) || !std::isfinite(s) || !std::isfinite(theta)) {
    throw std::domain_error("squeezed coherent state: need finite s >= 0 and finite theta");
  }
  return {StateKind::SqueezedCoherent, beta, 0.5 * std::exp(-s), 0.5 * std::exp(s), theta, s, 0.0};
}

double GaussianWignerState::symmetric_mean_norm2() const {
  return beta_.norm2() + sigma_s_ * sigma_s_ + sigma_a_ * sigma_a_;
}

double GaussianWignerState::mean_occupation() const { return symmetric_mean_norm2() - 0.5; }

double GaussianWignerState::number_variance() const {
  const double c = std::cos(0.5 * theta_);
  const double s = std::sin(0.5 * theta_);
  const double along_s = beta_.re * c + beta_.im * s;
  const double along_a = -beta_.re * s + beta_.im * c;
  const double vs = sigma_s_ * sigma_s_;
  const double va = sigma_a_ * sigma_a_;
  const double var_norm2 = 4.0 * (vs * along_s * along_s + va * along_a * along_a) + 2.0 * (vs * vs + va * va);
  return std::max(0.0, var_norm2 - 0.25);
}

std::map<std::string, std::string> GaussianWignerState::describe() const {
  return {
      {"state", to_string(kind_)},
      {"beta_re", format_double(beta_.re)},
      {"beta_im", format_double(beta_.im)},
      {"sigma_s", format_double(sigma_s_)},
      {"sigma_a", format_double(sigma_a_)},
      {"theta", format_double(theta_)},
      {"s", format_double(squeeze_)},
      {"nbar", format_double(nbar_)},
  };
}

namespace {

struct Rotated {
  double gx;
  double gy;
  double c;
  double s;
};

Rotated rotate_into_frame(const GaussianWignerState& state, PhaseAmplitude alpha) {
  const double dx = alpha.re - state.beta().re;
  const double dy = alpha.im - state.beta().im;
  const double c = std::cos(0.5 * state.theta());
  const double s = std::sin(0.5 * state.theta());
  return {dx * c + dy * s, -dx * s + dy * c, c, s};
}

}  // namespace

double density(const GaussianWignerState& state, PhaseAmplitude alpha) {
  require_finite(alpha, "density");
  const auto f = rotate_into_frame(state, alpha);
  const double ss = state.sigma_s();
  const double sa = state.sigma_a();
  const double exponent = -f.gx * f.gx / (2.0 * ss * ss) - f.gy * f.gy / (2.0 * sa * sa);
  return std::exp(exponent) / (kTwoPi * ss * sa);
}

std::array<double, 2> density_gradient(const GaussianWignerState& state, PhaseAmplitude alpha) {
  const double w = density(state, alpha);
  const auto f = rotate_into_frame(state, alpha);
  const double ks = f.gx / (state.sigma_s() * state.sigma_s());
  const double ka = f.gy / (state.sigma_a() * state.sigma_a());
  return {w * (-ks * f.c + ka * f.s), w * (-ks * f.s - ka * f.c)};
}

TrajectoryEnsemble::TrajectoryEnsemble(std::size_t modes, std::size_t count, std::uint64_t seed,
                                       std::size_t stream_count)
    : modes_(modes), count_(count), seed_(seed), stream_count_(stream_count), data_(modes * count) {
  if (modes == 0 || modes > 2) throw std::invalid_argument("TrajectoryEnsemble: 1 or 2 modes supported");
}

std::span<const PhaseAmplitude> TrajectoryEnsemble::mode(std::size_t m) const {
  if (m >= modes_) throw std::out_of_range("TrajectoryEnsemble: mode index out of range");
  return {data_.data() + m * count_, count_};
}

std::span<PhaseAmplitude> TrajectoryEnsemble::mode(std::size_t m) {
  if (m >= modes_) throw std::out_of_range("TrajectoryEnsemble: mode index out of range");
  return {data_.data() + m * count_, count_};
}

TrajectoryEnsemble sample(const GaussianWignerState& state, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
  const std::size_t streams = (count + kStreamBlock - 1) / kStreamBlock;
  TrajectoryEnsemble ens(1, count, seed, streams);
  auto out = ens.mode(0);
  const double c = std::cos(0.5 * state.theta());
  const double s = std::sin(0.5 * state.theta());
  const double ss = state.sigma_s();
  const double sa = state.sigma_a();
  const PhaseAmplitude beta = state.beta();
  parallel_for_blocks(streams, [&](std::size_t block) {
    auto engine = stream_engine(seed, block);
    std::normal_distribution<double> normal;
    const std::size_t begin = block * kStreamBlock;
    const std::size_t end = std::min(count, begin + kStreamBlock);
    for (std::size_t i = begin; i < end; ++i) {
      const double gx = ss * normal(engine);
      const double gy = sa * normal(engine);
      out[i] = {beta.re + gx * c - gy * s, beta.im + gx * s + gy * c};
    }
  });
  ens.metadata() = state.describe();
  return ens;
}

std::vector<PolarPoint> to_polar(const TrajectoryEnsemble& ensemble, std::size_t mode) {
  const auto samples = ensemble.mode(mode);
  std::vector<PolarPoint> out;
  out.reserve(samples.size());
  for (const auto& a : samples) out.push_back({a.abs(), a.arg()});
  return out;
}

void write_ensemble_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
  out << "# seed=" << ensemble.seed() << "\n";
  out << "# count=" << ensemble.count() << "\n";
  out << "# modes=" << ensemble.modes() << "\n";
  out << "# stream_count=" << ensemble.stream_count() << "\n";
  for (const auto& [k, v] : ensemble.metadata()) out << "# " << k << "=" << v << "\n";
  out << "mode,re,im\n";
  const auto old_precision = out.precision(17);
  for (std::size_t m = 0; m < ensemble.modes(); ++m) {
    for (const auto& a : ensemble.mode(m)) out << m << ',' << a.re << ',' << a.im << '\n';
  }
  out.precision(old_precision);
}

TrajectoryEnsemble read_ensemble_csv(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) header[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (line == "mode,re,im") break;
    throw std::runtime_error("read_ensemble_csv: unexpected line '" + line + "'");
  }
  auto field = [&](const std::string& key) -> std::uint64_t {
    const auto it = header.find(key);
    if (it == header.end()) throw std::runtime_error("read_ensemble_csv: missing header " + key);
    return std::stoull(it->second);
  };
  const std::size_t count = field("count");
  const std::size_t modes = field("modes");
  TrajectoryEnsemble ens(modes, count, field("seed"), field("stream_count"));
  std::vector<std::size_t> filled(modes, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string m, re, im;
    if (!std::getline(row, m, ',') || !std::getline(row, re, ',') || !std::getline(row, im)) {
      throw std::runtime_error("read_ensemble_csv: malformed row '" + line + "'");
    }
    const std::size_t mode = std::stoul(m);
    if (mode >= modes || filled[mode] >= count) throw std::runtime_error("read_ensemble_csv: row out of range");
    ens.mode(mode)[filled[mode]++] = PhaseAmplitude::checked(std::stod(re), std::stod(im));
  }
  for (std::size_t f : filled) {
    if (f != count) throw std::runtime_error("read_ensemble_csv: truncated file");
  }
  for (const auto& [k, v] : header) {
    if (k != "seed" && k != "count" && k != "modes" && k != "stream_count") ens.metadata()[k] = v;
  }
  return ens;
}

}  // namespace phasebin
