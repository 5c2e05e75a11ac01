#ifndef LIESIG_GROUP_MODELS_HPP
#define LIESIG_GROUP_MODELS_HPP

// Compact Lie groups with bi-invariant metrics.
//
// Lie algebra vectors are coordinates in a fixed orthonormal basis, so the
// Euclidean norm of log(g) is the Riemannian distance d(e, g).  Group points
// are stored as flat coordinate vectors whose meaning depends on the model:
//
//   circle   (theta)        theta in (-pi, pi]
//   su2      (w, x, y, z)   unit quaternion; e1, e2, e3 act as i, j, k, so
//                           [e1,e2] = 2 e3, [e1,e3] = -2 e2, [e2,e3] = 2 e1.
//                           As matrices: e1 = diag(i, -i), e2 = [[0,1],[-1,0]],
//                           e3 = [[0,i],[i,0]].  This is the unit round S^3.
//   product  (g1..., g2...) concatenated component coordinates.

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

#include "liesig/rng.hpp"

namespace liesig {

using AlgebraVector = Eigen::VectorXd;

struct GroupPoint {
  Eigen::VectorXd coords;
};

/// Points this close (in distance) to the cut locus of the identity are refused by log.
inline constexpr double kCutLocusTolerance = 1e-9;

class LieGroupModel {
 public:
  virtual ~LieGroupModel() = default;

  /// Selection string that reconstructs this model through parse_group.
  virtual std::string kind() const = 0;
  virtual int dim() const = 0;
  virtual int point_size() const = 0;

  virtual GroupPoint identity() const = 0;
  virtual GroupPoint exp(const AlgebraVector& v) const = 0;
  /// Principal logarithm; throws CutLocusError at the cut locus.
  virtual AlgebraVector log(const GroupPoint& g) const = 0;
  virtual bool near_cut_locus(const GroupPoint& g) const = 0;

  virtual GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) const = 0;
  virtual GroupPoint inverse(const GroupPoint& g) const = 0;

  /// One draw from the normalized Haar measure; consumes a model-specific
  /// number of uniforms from the stream.
  virtual GroupPoint haar_sample(RngStream& rng) const = 0;

  /// Open star-shaped domain D of the algebra mapped bijectively by exp onto
  /// the complement of the cut locus.
  virtual bool in_domain(const AlgebraVector& v) const = 0;
  /// Weight w on D with integral 1 whose push-forward under exp is Haar.
  virtual double pullback_density(const AlgebraVector& v) const = 0;

  /// Known diameter.  Only test oracles use this.
  virtual double diameter_hint() const = 0;

  /// Metric on the coordinate representation (not the Riemannian distance).
  virtual double representation_distance(const GroupPoint& a, const GroupPoint& b) const = 0;

  /// Immediate factors of a product; empty for simple models.
  virtual std::vector<std::shared_ptr<const LieGroupModel>> factors() const { return {}; }

  double distance_from_identity(const GroupPoint& g) const { return log(g).norm(); }
};

using ModelPtr = std::shared_ptr<const LieGroupModel>;

class CircleGroup final : public LieGroupModel {
 public:
  std::string kind() const override { return "circle"; }
  int dim() const override { return 1; }
  int point_size() const override { return 1; }
  GroupPoint identity() const override;
  GroupPoint exp(const AlgebraVector& v) const override;
  AlgebraVector log(const GroupPoint& g) const override;
  bool near_cut_locus(const GroupPoint& g) const override;
  GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) const override;
  GroupPoint inverse(const GroupPoint& g) const override;
  GroupPoint haar_sample(RngStream& rng) const override;
  bool in_domain(const AlgebraVector& v) const override;
  double pullback_density(const AlgebraVector& v) const override;
  double diameter_hint() const override;
  double representation_distance(const GroupPoint& a, const GroupPoint& b) const override;
};

class SU2Group final : public LieGroupModel {
 public:
  std::string kind() const override { return "su2"; }
  int dim() const override { return 3; }
  int point_size() const override { return 4; }
  GroupPoint identity() const override;
  GroupPoint exp(const AlgebraVector& v) const override;
  AlgebraVector log(const GroupPoint& g) const override;
  bool near_cut_locus(const GroupPoint& g) const override;
  GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) const override;
  GroupPoint inverse(const GroupPoint& g) const override;
  GroupPoint haar_sample(RngStream& rng) const override;
  bool in_domain(const AlgebraVector& v) const override;
  double pullback_density(const AlgebraVector& v) const override;
  double diameter_hint() const override;
  double representation_distance(const GroupPoint& a, const GroupPoint& b) const override;

  /// Haar law of the distance from the identity: P(r <= R) = (R - sin R cos R) / pi.
  static double radial_cdf(double r);
  /// Inverse of radial_cdf by 60 bisection steps on [0, pi].
  static double radial_quantile(double u);
};

/// Riemannian product G1 x G2; the algebra splits as g1 (+) g2, G1 first.
class ProductGroup final : public LieGroupModel {
 public:
  ProductGroup(ModelPtr first, ModelPtr second, std::string label = {});

  std::string kind() const override;
  int dim() const override { return first_->dim() + second_->dim(); }
  int point_size() const override { return first_->point_size() + second_->point_size(); }
  GroupPoint identity() const override;
  GroupPoint exp(const AlgebraVector& v) const override;
  AlgebraVector log(const GroupPoint& g) const override;
  bool near_cut_locus(const GroupPoint& g) const override;
  GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) const override;
  GroupPoint inverse(const GroupPoint& g) const override;
  GroupPoint haar_sample(RngStream& rng) const override;
  bool in_domain(const AlgebraVector& v) const override;
  double pullback_density(const AlgebraVector& v) const override;
  double diameter_hint() const override;
  double representation_distance(const GroupPoint& a, const GroupPoint& b) const override;
  std::vector<ModelPtr> factors() const override { return {first_, second_}; }

  const ModelPtr& first() const { return first_; }
  const ModelPtr& second() const { return second_; }

  GroupPoint join(const GroupPoint& a, const GroupPoint& b) const;
  GroupPoint first_part(const GroupPoint& g) const;
  GroupPoint second_part(const GroupPoint& g) const;

 private:
  ModelPtr first_;
  ModelPtr second_;
  std::string label_;
};

/// Parses "circle", "su2", "torus:<k>" or "product:<a>,<b>" (recursive).
ModelPtr parse_group(const std::string& spec);

inline GroupPoint exp_map(const LieGroupModel& model, const AlgebraVector& v) { return model.exp(v); }
inline AlgebraVector log_map(const LieGroupModel& model, const GroupPoint& g) { return model.log(g); }
inline GroupPoint haar_sample(const LieGroupModel& model, RngStream& rng) { return model.haar_sample(rng); }
double pullback_density_eval(const LieGroupModel& model, const AlgebraVector& v);

/// log of a Haar draw, redrawing the (measure-zero) cut-locus hits.
AlgebraVector sample_log(const LieGroupModel& model, RngStream& rng);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

}  // namespace liesig

#endif
