#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace phasebin {

/// One complex mode amplitude alpha = re + i im in dimensionless phase-space units.
struct PhaseAmplitude {
  double re = 0.0;
  double im = 0.0;

  /// Throws std::domain_error for non-finite components.
  static PhaseAmplitude checked(double re, double im);
  static PhaseAmplitude polar(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

  std::complex<double> complex() const { return {re, im}; }
  double norm2() const { return re * re + im * im; }
  double abs() const { return std::hypot(re, im); }
  /// Argument folded into [0, 2 pi).
  double arg() const;
  bool finite() const;

  friend bool operator==(const PhaseAmplitude&, const PhaseAmplitude&) = default;
};

enum class StateKind { Vacuum, Coherent, Thermal, SqueezedCoherent };

std::string to_string(StateKind kind);

/// Gaussian Wigner function with centre beta and principal rms widths
/// sigma_s (squeezed axis) and sigma_a (anti-squeezed axis). The squeezed
/// axis is the real axis rotated counter-clockwise by theta/2.
class GaussianWignerState {
 public:
  static GaussianWignerState vacuum();
  static GaussianWignerState coherent(PhaseAmplitude beta);
  /// Isotropic Gaussian of width sqrt((nbar + 1/2) / 2).
  static GaussianWignerState thermal(double nbar);
  /// sigma_s = e^{-s}/2, sigma_a = e^{s}/2; s >= 0.
  static GaussianWignerState squeezed_coherent(PhaseAmplitude beta, double s, double theta);

  StateKind kind() const { return kind_; }
  PhaseAmplitude beta() const { return beta_; }
  double sigma_s() const { return sigma_s_; }
  double sigma_a() const { return sigma_a_; }
  double theta() const { return theta_; }
  /// Squeezing magnitude s (zero unless SqueezedCoherent).
  double squeeze() const { return squeeze_; }
  /// Mean occupation of a thermal state (zero otherwise).
  double nbar() const { return nbar_; }
  bool isotropic() const { return sigma_s_ == sigma_a_; }

  /// <|alpha|^2>_W, the symmetric-ordered occupation (<n> + 1/2).
  double symmetric_mean_norm2() const;
  /// Mean and variance of the particle number implied by the Gaussian moments.
  double mean_occupation() const;
  double number_variance() const;

  /// Key/value description used in file headers.
  std::map<std::string, std::string> describe() const;

 private:
  GaussianWignerState(StateKind kind, PhaseAmplitude beta, double sigma_s, double sigma_a,
                      double theta, double squeeze, double nbar);

  StateKind kind_;
  PhaseAmplitude beta_;
  double sigma_s_;
  double sigma_a_;
  double theta_;
  double squeeze_;
  double nbar_;
};

/// W(alpha) for a Gaussian state. Throws std::domain_error for non-finite alpha.
double density(const GaussianWignerState& state, PhaseAmplitude alpha);

/// Gradient of W with respect to (re, im).
std::array<double, 2> density_gradient(const GaussianWignerState& state, PhaseAmplitude alpha);

/// Samples of one or two modes plus the metadata needed to regenerate them.
/// Storage is mode-major.
class TrajectoryEnsemble {
 public:
  TrajectoryEnsemble() = default;
  TrajectoryEnsemble(std::size_t modes, std::size_t count, std::uint64_t seed, std::size_t stream_count);

  std::size_t modes() const { return modes_; }
  std::size_t count() const { return count_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t stream_count() const { return stream_count_; }

  std::span<const PhaseAmplitude> mode(std::size_t m) const;
  std::span<PhaseAmplitude> mode(std::size_t m);

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  friend bool operator==(const TrajectoryEnsemble& a, const TrajectoryEnsemble& b) {
    return a.modes_ == b.modes_ && a.count_ == b.count_ && a.seed_ == b.seed_ && a.data_ == b.data_;
  }

 private:
  std::size_t modes_ = 0;
  std::size_t count_ = 0;
  std::uint64_t seed_ = 0;
  std::size_t stream_count_ = 0;
  std::vector<PhaseAmplitude> data_;
  std::map<std::string, std::string> metadata_;
};

/// Samples per RNG stream. Stream k always covers samples [k*kStreamBlock, (k+1)*kStreamBlock).
inline constexpr std::size_t kStreamBlock = 1u << 16;

/// Draws count samples of W. Each block of kStreamBlock samples uses its own
/// engine seeded from (seed, block), so output is independent of thread count.
TrajectoryEnsemble sample(const GaussianWignerState& state, std::size_t count, std::uint64_t seed);

struct PolarPoint {
  double r;
  double phi;
};

std::vector<PolarPoint> to_polar(const TrajectoryEnsemble& ensemble, std::size_t mode = 0);

/// CSV with '#'-prefixed header lines (seed, count, metadata) and columns mode,re,im.
void write_ensemble_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);
TrajectoryEnsemble read_ensemble_csv(std::istream& in);

}  // namespace phasebin
