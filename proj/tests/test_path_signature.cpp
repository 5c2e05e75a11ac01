#include <random>

#include "doctest.h"
#include "liesig/errors.hpp"
#include "liesig/path_signature.hpp"
#include "test_support.hpp"

using namespace liesig;
using liesig::test::kPi;
using liesig::test::max_abs_diff;

namespace {

AlgebraVector smooth_curve(double t) {
  AlgebraVector w(3);
  w << 1.1 * std::sin(kPi * t), 0.7 * t, 0.4 * std::cos(2.0 * t) - 0.4;
  return w;
}

}  // namespace

TEST_CASE("geodesic signature examples") {
  auto circle = parse_group("circle");
  Eigen::VectorXd th(1);
  th << 1.7;
  const auto s = geodesic_signature(*circle, circle->exp(th), 6);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    CHECK(s.level(k)(0) == doctest::Approx(std::pow(1.7, k) / fact).epsilon(1e-14));
  }

  auto su2 = parse_group("su2");
  Eigen::Vector3d lam(0.3, -0.9, 1.2);
  CHECK(max_abs_diff(geodesic_signature(*su2, su2->exp(lam), 5), exp_tensor(lam, 5)) < 1e-14);
  CHECK(max_abs_diff(geodesic_signature(*su2, su2->identity(), 5), unit_series(3, 5)) == 0.0);
}

TEST_CASE("sampled geodesic matches the geodesic signature") {
  auto su2 = parse_group("su2");
  Eigen::Vector3d v(1.0, 0.8, -1.4);
  const auto times = uniform_times(1000);
  const auto path = sample_path(su2, [&](double t) -> AlgebraVector { return t * v; }, times);
  CHECK(hilbert_distance(path_signature_numeric(path, 6), exp_tensor(v, 6)) < 1e-6);

  std::vector<double> warped(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) warped[i] = times[i] * times[i];
  const auto path2 = sample_path(su2, [&](double t) -> AlgebraVector { return t * v; }, warped);
  CHECK(hilbert_distance(path_signature_numeric(path2, 6), exp_tensor(v, 6)) < 1e-6);
}

TEST_CASE("left invariance and Chen split") {
  auto su2 = parse_group("su2");
  const auto times = uniform_times(1000);
  const auto path = sample_path(su2, smooth_curve, times);
  const auto sig = path_signature_numeric(path, 5);

  Eigen::Vector3d h(2.0, -0.5, 0.3);
  CHECK(hilbert_distance(path_signature_numeric(left_translate(path, su2->exp(h)), 5), sig) < 1e-6);

  const auto first = path_signature_numeric(sub_path(path, 0, 500), 5);
  const auto second = path_signature_numeric(sub_path(path, 500, 1000), 5);
  CHECK(hilbert_distance(concat_product(first, second), sig) < 1e-10);
}

TEST_CASE("reparametrization of a non-geodesic path") {
  auto su2 = parse_group("su2");
  const auto a = curve_signature(su2, smooth_curve, 4, 4096);
  const auto b = curve_signature(
      su2, [](double t) { return smooth_curve(t * t); }, 4, 4096);
  CHECK(hilbert_distance(a, b) < 1e-5);
}

TEST_CASE("mesh convergence is first order or better") {
  auto su2 = parse_group("su2");
  const auto fine = curve_signature(su2, smooth_curve, 4, 16000);
  const double d500 = hilbert_distance(curve_signature(su2, smooth_curve, 4, 500), fine);
  const double d1000 = hilbert_distance(curve_signature(su2, smooth_curve, 4, 1000), fine);
  CHECK(d500 / d1000 >= 1.8);
}

TEST_CASE("signature norm is bounded by the polygonal length") {
  auto su2 = parse_group("su2");
  const auto path = sample_path(su2, smooth_curve, uniform_times(200));
  const double len = polygonal_length(path);
  for (int depth : {2, 4, 6}) {
    double bound = 0.0, fact = 1.0;
    for (int k = 0; k <= depth; ++k) {
      if (k > 0) fact *= k;
      bound += std::pow(len, 2 * k) / (fact * fact);
    }
    CHECK(hilbert_norm(path_signature_numeric(path, depth)) <= std::sqrt(bound));
  }
}

TEST_CASE("reversed path cancels") {
  auto su2 = parse_group("su2");
  const auto path = sample_path(su2, smooth_curve, uniform_times(300));
  const auto prod = concat_product(path_signature_numeric(path, 6), path_signature_numeric(reversed(path), 6));
  CHECK(max_abs_diff(prod, unit_series(3, 6)) < 1e-8);
}

TEST_CASE("chords at the cut locus need a finer mesh") {
  auto circle = parse_group("circle");
  std::vector<double> times{0.0, 1.0};
  const AlgebraCurve half_turn = [](double t) {
    AlgebraVector w(1);
    w << kPi * t;
    return w;
  };
  const auto coarse = sample_path(circle, half_turn, times);
  CHECK_THROWS_AS(path_signature_numeric(coarse, 3), RefineMeshError);
  const auto s = curve_signature(circle, half_turn, 3, 1);
  CHECK(s.level(1)(0) == doctest::Approx(kPi));
}

TEST_CASE("malformed sampled paths") {
  auto su2 = parse_group("su2");
  SampledPath p{su2, {0.0, 0.5, 0.4, 1.0}, {}};
  for (int i = 0; i < 4; ++i) p.points.push_back(su2->identity());
  CHECK_THROWS_AS(p.validate(), ShapeError);
  SampledPath q{su2, {0.0, 1.0}, {su2->identity()}};
  CHECK_THROWS_AS(q.validate(), ShapeError);
}
