#ifndef LIESIG_RECOVERY_PIPELINE_HPP
#define LIESIG_RECOVERY_PIPELINE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liesig/geometry_recovery.hpp"

namespace liesig {

struct RecoverOptions {
  int half_depth = 8;
  int nodes = 64;
  /// "exact" (closed form / quadrature / product rule) or "monte_carlo".
  std::string spectrum_method = "exact";
  /// Polynomial degree for F(R) from the moments; 0 means K.
  int degree = 0;
  int f_table_points = 17;
  std::vector<double> eps_grid = default_eps_grid();
  /// Sampling for the spectrum (monte_carlo) and the small-ball F.
  MonteCarloOptions mc;
};

struct RecoveryReport {
  std::string group;
  TraceSpectrum spectrum;
  DiameterEstimate diameter;
  /// (R, moment-based F(R)) after enforcing monotonicity.
  std::vector<std::pair<double, double>> f_table;
  std::vector<BallVolumeEstimate> f_table_raw;
  std::vector<BallVolumeSample> small_ball_samples;
  std::optional<SmallBallFit> small_ball;
  /// Empty on success; otherwise the failure class and message.
  std::string error_kind;
  std::string error;
};

/// spectrum -> diameter -> F table -> small-ball (dimension, volume, curvature).
/// Numerical failures in the last stage are recorded in the report, not thrown.
RecoveryReport recover_geometry(const LieGroupModel& model, const RecoverOptions& opts);

}  // namespace liesig

#endif
