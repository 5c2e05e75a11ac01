#include "liesig/path_signature.hpp"

#include <string>

#include "liesig/errors.hpp"

namespace liesig {

void SampledPath::validate() const {
  if (!model) throw ShapeError("sampled path has no group model");
  if (times.size() < 2) throw ShapeError("sampled path needs at least two points");
  if (points.size() != times.size()) throw ShapeError("sampled path: times and points differ in length");
  if (times.front() != 0.0 || times.back() != 1.0) throw ShapeError("sampled path times must run from 0 to 1");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ShapeError("sampled path times must be strictly increasing");
  for (const auto& p : points)
    if (p.coords.size() != model->point_size()) throw ShapeError("sampled path point has the wrong coordinate count");
}

TensorSeriesd geodesic_signature(const LieGroupModel& model, const GroupPoint& g, int depth) {
  return exp_tensor(model.log(g), depth);
}

TensorSeriesd path_signature_numeric(const SampledPath& path, int depth) {
  path.validate();
  const LieGroupModel& m = *path.model;
  TensorSeriesd sig = unit_series(m.dim(), depth);
  TensorSeriesd chord(m.dim(), depth);
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const GroupPoint step = m.multiply(m.inverse(path.points[i]), path.points[i + 1]);
    if (m.near_cut_locus(step))
      throw RefineMeshError("chord " + std::to_string(i) + " reaches the cut locus; refine the mesh");
    exp_tensor_into(m.log(step), chord);
    sig = concat_product(sig, chord);
  }
  return sig;
}

std::vector<double> uniform_times(int chords) {
  if (chords < 1) throw ShapeError("uniform_times: need at least one chord");
  std::vector<double> t(chords + 1);
  for (int i = 0; i <= chords; ++i) t[i] = static_cast<double>(i) / chords;
  t.back() = 1.0;
  return t;
}

SampledPath sample_path(ModelPtr model, const AlgebraCurve& curve, std::span<const double> times) {
  SampledPath path{std::move(model), {times.begin(), times.end()}, {}};
  path.points.reserve(times.size());
  for (double t : times) path.points.push_back(path.model->exp(curve(t)));
  return path;
}

TensorSeriesd curve_signature(ModelPtr model, const AlgebraCurve& curve, int depth, int chords) {
  for (int c = chords;; c *= 2) {
    try {
      const auto times = uniform_times(c);
      return path_signature_numeric(sample_path(model, curve, times), depth);
    } catch (const RefineMeshError&) {
      if (c * 2 > kMaxChords) throw;
    }
  }
}

SampledPath left_translate(const SampledPath& path, const GroupPoint& h) {
  SampledPath out{path.model, path.times, {}};
  out.points.reserve(path.points.size());
  for (const auto& p : path.points) out.points.push_back(path.model->multiply(h, p));
  return out;
}

SampledPath reversed(const SampledPath& path) {
  SampledPath out{path.model, {}, {path.points.rbegin(), path.points.rend()}};
  out.times.reserve(path.times.size());
  for (auto it = path.times.rbegin(); it != path.times.rend(); ++it) out.times.push_back(1.0 - *it);
  out.times.front() = 0.0;
  out.times.back() = 1.0;
  return out;
}

SampledPath sub_path(const SampledPath& path, std::size_t first, std::size_t last) {
  if (first >= last || last >= path.points.size()) throw ShapeError("sub_path: bad index range");
  SampledPath out{path.model, {}, {path.points.begin() + first, path.points.begin() + last + 1}};
  const double t0 = path.times[first], span = path.times[last] - t0;
  for (std::size_t i = first; i <= last; ++i) out.times.push_back((path.times[i] - t0) / span);
  out.times.front() = 0.0;
  out.times.back() = 1.0;
  return out;
}

double polygonal_length(const SampledPath& path) {
  path.validate();
  const LieGroupModel& m = *path.model;
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
    len += m.log(m.multiply(m.inverse(path.points[i]), path.points[i + 1])).norm();
  return len;
}

}  // namespace liesig
