#ifndef GM_PROBE_HPP
#define GM_PROBE_HPP

#include "gm/grid.hpp"

namespace gm {

/// Analysis window ("probe") for the time-frequency transforms. Either the
/// centred Gaussian of width sigma, handled analytically, or an arbitrary
/// sampled window, renormalized to unit L2 norm on construction.
struct Probe {
  enum class Kind { AnalyticGaussian, Sampled };

  Kind kind = Kind::AnalyticGaussian;
  double sigma = 1.0;        // analytic-gaussian only
  SampledFunction samples;   // sampled only

  // Cached first and second central moments in time and frequency.
  double mean_time = 0.0;
  double mean_freq = 0.0;
  double var_time = 0.5;
  double var_freq = 0.5;

  static Probe gaussian(double sigma);
  static Probe from_samples(SampledFunction s);

  /// Time-domain value psi(t). Sampled probes interpolate linearly and
  /// vanish outside their grid.
  Complex operator()(double t) const;

  /// Frequency-domain value psihat(w) = (2pi)^{-1/2} \int e^{-iwt} psi(t) dt.
  Complex spectrum(double w) const;

  /// Radius beyond which |psi| is negligible (8 sigma for the Gaussian,
  /// grid extent for sampled probes).
  double support_radius() const;
};

}  // namespace gm

#endif
