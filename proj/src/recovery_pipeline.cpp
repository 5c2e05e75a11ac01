#include "liesig/recovery_pipeline.hpp"

#include <algorithm>

#include "liesig/errors.hpp"

namespace liesig {

RecoveryReport recover_geometry(const LieGroupModel& model, const RecoverOptions& opts) {
  RecoveryReport report;
  report.group = model.kind();
  if (opts.spectrum_method == "exact")
    report.spectrum = exact_spectrum(model, opts.half_depth, opts.nodes);
  else if (opts.spectrum_method == "monte_carlo")
    report.spectrum = spectrum_monte_carlo(model, opts.half_depth, opts.mc);
  else
    throw ConfigError("unknown spectrum method '" + opts.spectrum_method + "' (expected exact or monte_carlo)");

  report.diameter = diameter_estimate(report.spectrum);
  const double dmax = report.diameter.diameter;
  const int degree = opts.degree > 0 ? opts.degree : opts.half_depth;
  const int points = std::max(2, opts.f_table_points);
  double running = 0.0;
  for (int i = 0; i < points; ++i) {
    const double radius = dmax * i / (points - 1);
    BallVolumeEstimate est = ball_volume_from_moments(report.spectrum, radius, degree, dmax);
    running = std::max(running, est.value);
    report.f_table.emplace_back(radius, running);
    report.f_table_raw.push_back(est);
  }

  report.small_ball_samples = ball_volume_empirical(model, opts.eps_grid, opts.mc);
  const auto& table = report.small_ball_samples;
  BallVolumeFn lookup = [&table](double eps) {
    for (const auto& s : table)
      if (s.radius == eps) return s;
    throw ConfigError("small-ball radius not in the sampled grid");
  };
  try {
    report.small_ball = small_ball_recovery(lookup, opts.eps_grid);
  } catch (const AmbiguousDimension& e) {
    report.error_kind = "AmbiguousDimension";
    report.error = e.what();
  } catch (const FitFailure& e) {
    report.error_kind = "FitFailure";
    report.error = e.what();
  }
  return report;
}

}  // namespace liesig
