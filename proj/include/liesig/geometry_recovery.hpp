#ifndef LIESIG_GEOMETRY_RECOVERY_HPP
#define LIESIG_GEOMETRY_RECOVERY_HPP

// Geometry from the rescaled trace spectrum r_{2k} = (2k)! tr(A_{2k}).
//
// r_{2k} is the k-th moment of f(g) = d(e,g)^2 under normalized Haar measure.
// Everything here treats the spectrum as a moment sequence of a law on
// [0, D^2]: L^k norms, the diameter as the growth rate of the moments, and the
// ball-volume function F(R) = P(d <= R) by pairing a polynomial approximation
// of an indicator with the moments.  Dimension, volume and scalar curvature
// come from the small-ball expansion
//     F(eps) = (w_n / V) eps^n (1 - S eps^2 / (6 (n + 2)) + O(eps^3)).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liesig/average_signature.hpp"
#include "liesig/group_models.hpp"

namespace liesig {

struct TraceSpectrum {
  /// values[k] = r_{2k}, k = 0..K.
  std::vector<double> values;
  /// Standard errors of values (zero for deterministic spectra).
  std::vector<double> stderr_values;
  std::string method;
  std::string group;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  int half_depth() const { return static_cast<int>(values.size()) - 1; }
  double r(int k) const { return values.at(k); }
};

/// r_{2k} = (2k)! trace_level(avg.tensor, 2k) for k = 0..K.
TraceSpectrum rtr_spectrum(const AverageSignatureResult& avg, int half_depth);

/// Circle: pi^{2k}/(2k+1); products by the binomial product rule.
TraceSpectrum spectrum_closed_form(const LieGroupModel& model, int half_depth);

/// Circle or su2 by Gauss-Legendre in the distance variable; products by the
/// product rule.  Uses trace(M_{2k}) = 1, so no tensors are formed.
TraceSpectrum spectrum_quadrature(const LieGroupModel& model, int half_depth, int nodes);

/// Sample moments of |log g|^2 over Haar draws (same streams as average_monte_carlo).
TraceSpectrum spectrum_monte_carlo(const LieGroupModel& model, int half_depth, const MonteCarloOptions& opts);

/// rtr(C_{2N}) = sum_k binom(N, k) rtr(A_{2k}) rtr(B_{2N-2k}).
TraceSpectrum product_spectrum(const TraceSpectrum& a, const TraceSpectrum& b);

/// Deterministic spectrum by the best available route for the model.
TraceSpectrum exact_spectrum(const LieGroupModel& model, int half_depth, int nodes);

/// ||d^2||_{L^k} = r_{2k}^{1/k}.
double lk_norm(const TraceSpectrum& spec, int k);

struct DiameterEstimate {
  double diameter = 0.0;
  /// Fit log r_{2k} = 2k log D - c log(2k) + b over k in [k_first, K].
  double exponent_c = 0.0;
  double intercept_b = 0.0;
  int k_first = 0;
  double residual_rms = 0.0;
  /// r_{2k}^{1/2k} for k = 1..K (index 0 holds k = 1).
  std::vector<double> raw_sequence;
  bool raw_non_decreasing = true;
};

DiameterEstimate diameter_estimate(const TraceSpectrum& spec);

struct BallVolumeEstimate {
  double value = 0.0;
  double raw_value = 0.0;      // before clamping to [0, 1]
  int requested_degree = 0;
  int effective_degree = 0;    // largest degree whose moment pairing is stable
  double mollifier_width = 0.0;  // in units of d^2
  double noise_bound = 0.0;    // bound on the pairing error from moment noise
};

/// F(R) from the moments: Chebyshev projection of a mollified indicator of
/// [0, R^2] on [0, Dmax^2], re-expanded in monomials and paired with r_{2j}.
BallVolumeEstimate ball_volume_from_moments(const TraceSpectrum& spec, double radius, int degree, double dmax);
BallVolumeEstimate ball_volume_from_moments(const TraceSpectrum& spec, double radius, int degree);

struct BallVolumeSample {
  double radius = 0.0;
  double value = 0.0;
  double stderr_value = 0.0;
  std::uint64_t samples = 0;
};

/// Fraction of Haar draws with |log g| <= R, for each radius, from one pass.
std::vector<BallVolumeSample> ball_volume_empirical(const LieGroupModel& model, const std::vector<double>& radii,
                                                    const MonteCarloOptions& opts);
BallVolumeSample ball_volume_empirical(const LieGroupModel& model, double radius, const MonteCarloOptions& opts);

using BallVolumeFn = std::function<BallVolumeSample(double)>;

struct SmallBallFit {
  double dimension_raw = 0.0;
  int dimension = 0;
  double volume = 0.0;
  double scalar_curvature = 0.0;
  std::vector<double> eps_grid;
  std::vector<double> f_values;
  std::vector<double> f_stderr;
  std::vector<double> slope_residuals;
  std::vector<double> fit_residuals;  // standardized residuals of the (V, S) fit
};

/// Eight geometrically spaced radii from 0.05 to 0.3.
std::vector<double> default_eps_grid();

/// Throws AmbiguousDimension when the log-log slope is farther than 0.35 from
/// an integer, FitFailure when the fit breaks down.
SmallBallFit small_ball_recovery(const BallVolumeFn& f, const std::vector<double>& eps_grid);

/// Volume of the Euclidean unit n-ball.
double unit_ball_volume(int n);

}  // namespace liesig

#endif
