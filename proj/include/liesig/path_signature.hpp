#ifndef LIESIG_PATH_SIGNATURE_HPP
#define LIESIG_PATH_SIGNATURE_HPP

// Signatures of group-valued paths.
//
// A path on G is pulled back to the Lie algebra through its left-trivialized
// velocity; the signature of the pulled-back path is the signature of the
// group path.  For a geodesic from e to g this is exactly exp_tensor(log g).
// For a sampled path every chord (g_i, g_{i+1}) is replaced by the geodesic
// between its endpoints, whose signature is exp_tensor(log(g_i^-1 g_{i+1})),
// and the chords are Chen-multiplied in order.

#include <functional>
#include <span>
#include <vector>

#include "liesig/group_models.hpp"
#include "liesig/tensor_series.hpp"

namespace liesig {

struct SampledPath {
  ModelPtr model;
  std::vector<double> times;       // strictly increasing, 0 -> 1
  std::vector<GroupPoint> points;  // one per time

  /// Throws ShapeError if the time grid or point count is malformed.
  void validate() const;
};

/// A curve in the Lie algebra; the group path is t -> exp(curve(t)).
using AlgebraCurve = std::function<AlgebraVector(double)>;

inline constexpr int kDefaultChords = 1024;
inline constexpr int kMaxChords = 1 << 16;

/// exp_tensor(log g): the signature of the unique shortest geodesic e -> g.
TensorSeriesd geodesic_signature(const LieGroupModel& model, const GroupPoint& g, int depth);

/// Chordal signature of a sampled path.  Throws RefineMeshError when some
/// chord ends on the cut locus of its start.
TensorSeriesd path_signature_numeric(const SampledPath& path, int depth);

std::vector<double> uniform_times(int chords);

SampledPath sample_path(ModelPtr model, const AlgebraCurve& curve, std::span<const double> times);

/// Samples t -> exp(curve(t)) on `chords` uniform chords, doubling the mesh on
/// RefineMeshError up to kMaxChords.
TensorSeriesd curve_signature(ModelPtr model, const AlgebraCurve& curve, int depth, int chords = kDefaultChords);

/// t -> h * path(t).
SampledPath left_translate(const SampledPath& path, const GroupPoint& h);

/// t -> path(1 - t).
SampledPath reversed(const SampledPath& path);

/// Points [first, last] with times affinely rescaled onto [0, 1].
SampledPath sub_path(const SampledPath& path, std::size_t first, std::size_t last);

/// Sum of chord lengths |log(g_i^-1 g_{i+1})|.
double polygonal_length(const SampledPath& path);

}  // namespace liesig

#endif
