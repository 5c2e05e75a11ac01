#include "liesig/group_models.hpp"

#include <Eigen/Geometry>

#include <cctype>
#include <cmath>
#include <numbers>
#include <string_view>

#include "liesig/errors.hpp"

namespace liesig {

namespace {

constexpr double kPi = std::numbers::pi;

void require_algebra_size(const LieGroupModel& m, const AlgebraVector& v) {
  if (v.size() != m.dim())
    throw ShapeError(m.kind() + ": algebra vector has length " + std::to_string(v.size()) + ", expected " +
                     std::to_string(m.dim()));
  if (!v.allFinite()) throw NumericalFailure(m.kind() + ": non-finite algebra vector");
}

void require_point_size(const LieGroupModel& m, const GroupPoint& g) {
  if (g.coords.size() != m.point_size())
    throw ShapeError(m.kind() + ": group point has " + std::to_string(g.coords.size()) + " coordinates, expected " +
                     std::to_string(m.point_size()));
}

Eigen::Quaterniond as_quaternion(const GroupPoint& g) {
  return Eigen::Quaterniond(g.coords(0), g.coords(1), g.coords(2), g.coords(3));
}

GroupPoint from_quaternion(const Eigen::Quaterniond& q) {
  GroupPoint g{Eigen::VectorXd(4)};
  g.coords << q.w(), q.x(), q.y(), q.z();
  g.coords.normalize();
  return g;
}

// sin(r)/r
double sinc(double r) { return std::abs(r) < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r; }

}  // namespace

double wrap_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

//---------------------------------------------------------------------------//
// circle

GroupPoint CircleGroup::identity() const { return {Eigen::VectorXd::Zero(1)}; }

GroupPoint CircleGroup::exp(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  return {Eigen::VectorXd::Constant(1, wrap_angle(v(0)))};
}

bool CircleGroup::near_cut_locus(const GroupPoint& g) const {
  require_point_size(*this, g);
  return kPi - std::abs(wrap_angle(g.coords(0))) < kCutLocusTolerance;
}

AlgebraVector CircleGroup::log(const GroupPoint& g) const {
  if (near_cut_locus(g)) throw CutLocusError("circle: log undefined at theta = pi");
  return Eigen::VectorXd::Constant(1, wrap_angle(g.coords(0)));
}

GroupPoint CircleGroup::multiply(const GroupPoint& a, const GroupPoint& b) const {
  require_point_size(*this, a);
  require_point_size(*this, b);
  return {Eigen::VectorXd::Constant(1, wrap_angle(a.coords(0) + b.coords(0)))};
}

GroupPoint CircleGroup::inverse(const GroupPoint& g) const {
  require_point_size(*this, g);
  return {Eigen::VectorXd::Constant(1, wrap_angle(-g.coords(0)))};
}

GroupPoint CircleGroup::haar_sample(RngStream& rng) const {
  // u in [0,1) maps onto (-pi, pi]
  return {Eigen::VectorXd::Constant(1, kPi - 2.0 * kPi * rng.uniform())};
}

bool CircleGroup::in_domain(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  return std::abs(v(0)) < kPi;
}

double CircleGroup::pullback_density(const AlgebraVector& v) const {
  if (!in_domain(v)) throw ShapeError("circle: density requested outside (-pi, pi)");
  return 1.0 / (2.0 * kPi);
}

double CircleGroup::diameter_hint() const { return kPi; }

double CircleGroup::representation_distance(const GroupPoint& a, const GroupPoint& b) const {
  return std::abs(wrap_angle(a.coords(0) - b.coords(0)));
}

//---------------------------------------------------------------------------//
// SU(2)

GroupPoint SU2Group::identity() const {
  GroupPoint g{Eigen::VectorXd::Zero(4)};
  g.coords(0) = 1.0;
  return g;
}

GroupPoint SU2Group::exp(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  const double r = v.norm();
  GroupPoint g{Eigen::VectorXd(4)};
  g.coords(0) = std::cos(r);
  g.coords.tail<3>() = sinc(r) * v;
  return g;
}

bool SU2Group::near_cut_locus(const GroupPoint& g) const {
  require_point_size(*this, g);
  const double r = std::atan2(g.coords.tail<3>().norm(), g.coords(0));
  return kPi - r < kCutLocusTolerance;
}

AlgebraVector SU2Group::log(const GroupPoint& g) const {
  if (near_cut_locus(g)) throw CutLocusError("su2: log undefined at -1");
  const Eigen::Vector3d u = g.coords.tail<3>();
  const double s = u.norm();
  if (s == 0.0) return Eigen::VectorXd::Zero(3);
  const double r = std::atan2(s, g.coords(0));
  return (r / s) * u;
}

GroupPoint SU2Group::multiply(const GroupPoint& a, const GroupPoint& b) const {
  require_point_size(*this, a);
  require_point_size(*this, b);
  return from_quaternion(as_quaternion(a) * as_quaternion(b));
}

GroupPoint SU2Group::inverse(const GroupPoint& g) const {
  require_point_size(*this, g);
  return from_quaternion(as_quaternion(g).conjugate());
}

double SU2Group::radial_cdf(double r) { return (r - std::sin(r) * std::cos(r)) / kPi; }

double SU2Group::radial_quantile(double u) {
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (radial_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GroupPoint SU2Group::haar_sample(RngStream& rng) const {
  const double z = 1.0 - 2.0 * rng.uniform();
  const double phi = 2.0 * kPi * rng.uniform();
  const double r = radial_quantile(rng.uniform());
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  GroupPoint g{Eigen::VectorXd(4)};
  const double s = std::sin(r);
  g.coords << std::cos(r), s * rho * std::cos(phi), s * rho * std::sin(phi), s * z;
  return g;
}

bool SU2Group::in_domain(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  return v.norm() < kPi;
}

double SU2Group::pullback_density(const AlgebraVector& v) const {
  if (!in_domain(v)) throw ShapeError("su2: density requested outside the open ball B(pi)");
  const double s = sinc(v.norm());
  return s * s / (2.0 * kPi * kPi);
}

double SU2Group::diameter_hint() const { return kPi; }

double SU2Group::representation_distance(const GroupPoint& a, const GroupPoint& b) const {
  return (a.coords - b.coords).norm();
}

//---------------------------------------------------------------------------//
// products

ProductGroup::ProductGroup(ModelPtr first, ModelPtr second, std::string label)
    : first_(std::move(first)), second_(std::move(second)), label_(std::move(label)) {
  if (!first_ || !second_) throw ConfigError("product group needs two factors");
}

std::string ProductGroup::kind() const {
  return label_.empty() ? "product:" + first_->kind() + "," + second_->kind() : label_;
}

GroupPoint ProductGroup::join(const GroupPoint& a, const GroupPoint& b) const {
  GroupPoint g{Eigen::VectorXd(point_size())};
  g.coords << a.coords, b.coords;
  return g;
}

GroupPoint ProductGroup::first_part(const GroupPoint& g) const {
  require_point_size(*this, g);
  return {g.coords.head(first_->point_size())};
}

GroupPoint ProductGroup::second_part(const GroupPoint& g) const {
  require_point_size(*this, g);
  return {g.coords.tail(second_->point_size())};
}

GroupPoint ProductGroup::identity() const { return join(first_->identity(), second_->identity()); }

GroupPoint ProductGroup::exp(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  return join(first_->exp(v.head(first_->dim())), second_->exp(v.tail(second_->dim())));
}

bool ProductGroup::near_cut_locus(const GroupPoint& g) const {
  return first_->near_cut_locus(first_part(g)) || second_->near_cut_locus(second_part(g));
}

AlgebraVector ProductGroup::log(const GroupPoint& g) const {
  AlgebraVector v(dim());
  v << first_->log(first_part(g)), second_->log(second_part(g));
  return v;
}

GroupPoint ProductGroup::multiply(const GroupPoint& a, const GroupPoint& b) const {
  return join(first_->multiply(first_part(a), first_part(b)), second_->multiply(second_part(a), second_part(b)));
}

GroupPoint ProductGroup::inverse(const GroupPoint& g) const {
  return join(first_->inverse(first_part(g)), second_->inverse(second_part(g)));
}

GroupPoint ProductGroup::haar_sample(RngStream& rng) const {
  GroupPoint a = first_->haar_sample(rng);
  GroupPoint b = second_->haar_sample(rng);
  return join(a, b);
}

bool ProductGroup::in_domain(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  return first_->in_domain(v.head(first_->dim())) && second_->in_domain(v.tail(second_->dim()));
}

double ProductGroup::pullback_density(const AlgebraVector& v) const {
  require_algebra_size(*this, v);
  return first_->pullback_density(v.head(first_->dim())) * second_->pullback_density(v.tail(second_->dim()));
}

double ProductGroup::diameter_hint() const { return std::hypot(first_->diameter_hint(), second_->diameter_hint()); }

double ProductGroup::representation_distance(const GroupPoint& a, const GroupPoint& b) const {
  return std::hypot(first_->representation_distance(first_part(a), first_part(b)),
                    second_->representation_distance(second_part(a), second_part(b)));
}

//---------------------------------------------------------------------------//

double pullback_density_eval(const LieGroupModel& model, const AlgebraVector& v) {
  return model.pullback_density(v);
}

AlgebraVector sample_log(const LieGroupModel& model, RngStream& rng) {
  for (;;) {
    GroupPoint g = model.haar_sample(rng);
    if (!model.near_cut_locus(g)) return model.log(g);
  }
}

namespace {

ModelPtr parse_group_at(std::string_view s, std::size_t& pos) {
  auto starts = [&](std::string_view tok) { return s.substr(pos, tok.size()) == tok; };
  if (starts("circle")) {
    pos += 6;
    return std::make_shared<CircleGroup>();
  }
  if (starts("su2")) {
    pos += 3;
    return std::make_shared<SU2Group>();
  }
  if (starts("torus:")) {
    pos += 6;
    std::size_t end = pos;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos) throw ConfigError("torus:<k> needs a positive integer k");
    const int k = std::stoi(std::string(s.substr(pos, end - pos)));
    if (k < 1 || k > 64) throw ConfigError("torus:<k> needs 1 <= k <= 64");
    pos = end;
    ModelPtr m = std::make_shared<CircleGroup>();
    for (int i = 2; i <= k; ++i)
      m = std::make_shared<ProductGroup>(m, std::make_shared<CircleGroup>(), "torus:" + std::to_string(i));
    return m;
  }
  if (starts("product:")) {
    pos += 8;
    ModelPtr a = parse_group_at(s, pos);
    if (pos >= s.size() || s[pos] != ',') throw ConfigError("product:<a>,<b> is missing the ',' separator");
    ++pos;
    ModelPtr b = parse_group_at(s, pos);
    return std::make_shared<ProductGroup>(a, b);
  }
  throw ConfigError("unknown group '" + std::string(s.substr(pos)) + "' (expected circle, su2, torus:<k>, product:<a>,<b>)");
}

}  // namespace

ModelPtr parse_group(const std::string& spec) {
  std::size_t pos = 0;
  ModelPtr m = parse_group_at(spec, pos);
  if (pos != spec.size()) throw ConfigError("trailing characters in group string '" + spec + "'");
  return m;
}

}  // namespace liesig
