#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <random>

#include "doctest.h"
#include "liesig/errors.hpp"
#include "liesig/group_models.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace liesig;
using liesig::test::kPi;
using liesig::test::random_vector;

namespace {

using C = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

Mat2 su2_generator(int i) {
  const C I(0, 1);
  Mat2 m;
  if (i == 0) m << I, 0, 0, -I;
  if (i == 1) m << 0, 1, -1, 0;
  if (i == 2) m << 0, I, I, 0;
  return m;
}

// exp by scaling and squaring with a Taylor core.
Mat2 matrix_exp(const Mat2& x) {
  int squarings = 0;
  double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2;
    ++squarings;
  }
  const Mat2 y = x / std::pow(2.0, squarings);
  Mat2 term = Mat2::Identity(), sum = Mat2::Identity();
  for (int k = 1; k <= 20; ++k) {
    term = term * y / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

Mat2 quaternion_matrix(const GroupPoint& g) {
  const auto& q = g.coords;
  return q(0) * Mat2::Identity() + q(1) * su2_generator(0) + q(2) * su2_generator(1) + q(3) * su2_generator(2);
}

}  // namespace

TEST_CASE("group selection strings") {
  CHECK(parse_group("circle")->dim() == 1);
  CHECK(parse_group("su2")->dim() == 3);
  CHECK(parse_group("torus:3")->dim() == 3);
  CHECK(parse_group("torus:3")->kind() == "torus:3");
  const auto p = parse_group("product:circle,su2");
  CHECK(p->dim() == 4);
  CHECK(p->factors().size() == 2);
  CHECK(parse_group("product:torus:2,product:su2,circle")->dim() == 6);
  for (const char* bad : {"", "sphere", "torus:0", "torus:x", "torus:65", "product:circle", "product:circle,", "su2x"})
    CHECK_THROWS_AS(parse_group(bad), ConfigError);
}

TEST_CASE("exponential examples") {
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  CHECK(circle->representation_distance(circle->exp(Eigen::VectorXd::Zero(1)), circle->identity()) == 0.0);

  Eigen::Vector3d v(kPi / 2, 0, 0);
  const auto g = su2->exp(v);
  CHECK(g.coords(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.coords(1) == doctest::Approx(1.0));
  CHECK(g.coords(2) == 0.0);
  CHECK(g.coords(3) == 0.0);
  const Mat2 m = quaternion_matrix(g);
  CHECK(std::abs(m(0, 0) - C(0, 1)) < 1e-15);
  CHECK(std::abs(m(1, 1) - C(0, -1)) < 1e-15);
}

TEST_CASE("su2 exponential matches the matrix exponential") {
  auto su2 = parse_group("su2");
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::VectorXd v = random_vector(3, gen, 1.2);
    Mat2 x = Mat2::Zero();
    for (int i = 0; i < 3; ++i) x += v(i) * su2_generator(i);
    CHECK((matrix_exp(x) - quaternion_matrix(su2->exp(v))).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("su2 basis satisfies the bracket relations") {
  auto br = [](const Mat2& a, const Mat2& b) -> Mat2 { return a * b - b * a; };
  const Mat2 e1 = su2_generator(0), e2 = su2_generator(1), e3 = su2_generator(2);
  CHECK((br(e1, e2) - 2.0 * e3).norm() < 1e-15);
  CHECK((br(e1, e3) + 2.0 * e2).norm() < 1e-15);
  CHECK((br(e2, e3) - 2.0 * e1).norm() < 1e-15);

  auto su2 = parse_group("su2");
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = su2->exp(random_vector(3, gen)), b = su2->exp(random_vector(3, gen));
    CHECK((quaternion_matrix(su2->multiply(a, b)) - quaternion_matrix(a) * quaternion_matrix(b)).norm() < 1e-14);
  }
}

TEST_CASE("logarithm examples") {
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  Eigen::VectorXd t(1);
  t << 2.0;
  const auto v = circle->log(circle->exp(t));
  CHECK(v(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(circle->distance_from_identity(circle->exp(t)) == doctest::Approx(2.0));

  GroupPoint minus_one{Eigen::Vector4d(-1, 0, 0, 0)};
  CHECK(su2->near_cut_locus(minus_one));
  CHECK_THROWS_AS(su2->log(minus_one), CutLocusError);

  GroupPoint i_point{Eigen::Vector4d(0, 1, 0, 0)};
  const auto w = su2->log(i_point);
  CHECK(w(0) == doctest::Approx(kPi / 2));
  CHECK(w.norm() == doctest::Approx(kPi / 2));

  Eigen::VectorXd pi_angle(1);
  pi_angle << kPi;
  CHECK_THROWS_AS(circle->log(circle->exp(pi_angle)), CutLocusError);
}

TEST_CASE("round trip and distance bound over Haar samples") {
  for (const char* name : {"circle", "su2", "torus:2", "product:circle,su2"}) {
    auto model = parse_group(name);
    RngStream rng(5);
    double worst = 0.0;
    bool bounded = true;
    for (int i = 0; i < 10000; ++i) {
      const auto g = model->haar_sample(rng);
      const auto v = model->log(g);
      worst = std::max(worst, model->representation_distance(model->exp(v), g));
      bounded = bounded && v.norm() <= model->diameter_hint() + 1e-9;
    }
    CHECK_MESSAGE(worst < 1e-10, name);
    CHECK_MESSAGE(bounded, name);
  }
}

TEST_CASE("product log splits into component logs") {
  auto p = parse_group("product:circle,su2");
  const auto& prod = dynamic_cast<const ProductGroup&>(*p);
  RngStream rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto g = prod.haar_sample(rng);
    const Eigen::VectorXd v = prod.log(g);
    const auto a = prod.first()->log(prod.first_part(g));
    const auto b = prod.second()->log(prod.second_part(g));
    CHECK((v.head(1) - a).norm() == 0.0);
    CHECK((v.tail(3) - b).norm() == 0.0);
  }
}

TEST_CASE("Haar sampler moments") {
  constexpr int m = 1'000'000;
  auto circle = parse_group("circle");
  RngStream rng(7);
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < m; ++i) {
    const double th = circle->log(circle->haar_sample(rng))(0);
    s1 += th;
    s2 += th * th;
    s4 += th * th * th * th;
  }
  const double mean = s1 / m, mean2 = s2 / m;
  CHECK(std::abs(mean) <= 3.0 * std::sqrt(kPi * kPi / 3.0 / m));
  const double var2 = std::pow(kPi, 4) / 5.0 - std::pow(kPi * kPi / 3.0, 2);
  CHECK(std::abs(mean2 - kPi * kPi / 3.0) <= 3.0 * std::sqrt(var2 / m));

  auto su2 = parse_group("su2");
  RngStream rng2(8);
  double r2 = 0, r4 = 0;
  for (int i = 0; i < m; ++i) {
    const double r = su2->log(su2->haar_sample(rng2)).squaredNorm();
    r2 += r;
    r4 += r * r;
  }
  const double want = kPi * kPi / 3.0 - 0.5;
  const double sd = std::sqrt((r4 / m - std::pow(r2 / m, 2)) / m);
  CHECK(std::abs(r2 / m - want) <= 3.0 * sd);
}

TEST_CASE("radial law matches the density by Kolmogorov-Smirnov") {
  constexpr int m = 1'000'000;
  auto check = [&](const char* name, auto cdf) {
    auto model = parse_group(name);
    RngStream rng(9);
    std::vector<double> r(m);
    for (auto& x : r) x = model->log(model->haar_sample(rng)).norm();
    std::sort(r.begin(), r.end());
    double ks = 0.0;
    for (int i = 0; i < m; ++i) {
      const double f = cdf(r[i]);
      ks = std::max({ks, std::abs(f - static_cast<double>(i) / m), std::abs(f - static_cast<double>(i + 1) / m)});
    }
    CHECK_MESSAGE(ks < 0.002, name << " KS = " << ks);
  };
  check("circle", [](double r) { return r / kPi; });
  check("su2", [](double r) {
    return oracle::adaptive_simpson([](double s) { return (2.0 / kPi) * std::sin(s) * std::sin(s); }, 0.0, r, 1e-12);
  });
}

TEST_CASE("pull-back density") {
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  Eigen::VectorXd t(1);
  t << 1.3;
  CHECK(pullback_density_eval(*circle, t) == doctest::Approx(1.0 / (2.0 * kPi)));
  Eigen::Vector3d v(0, kPi / 2, 0);
  CHECK(pullback_density_eval(*su2, v) == doctest::Approx(2.0 / std::pow(kPi, 4)).epsilon(1e-14));

  const double circle_mass = oracle::adaptive_simpson(
      [&](double th) {
        Eigen::VectorXd x(1);
        x << th;
        return circle->pullback_density(x);
      },
      -kPi + 1e-12, kPi - 1e-12, 1e-12);
  CHECK(std::abs(circle_mass - 1.0) < 1e-8);
  const double su2_mass = oracle::adaptive_simpson(
      [&](double r) {
        const Eigen::Vector3d x(r, 0, 0);
        return 4.0 * kPi * r * r * su2->pullback_density(x);
      },
      0.0, kPi - 1e-12, 1e-12);
  CHECK(std::abs(su2_mass - 1.0) < 1e-8);
}

TEST_CASE("same seed gives the same sample sequence") {
  auto su2 = parse_group("su2");
  RngStream a(42), b(42), c(43);
  bool same = true, differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = su2->haar_sample(a), y = su2->haar_sample(b), z = su2->haar_sample(c);
    same = same && (x.coords.array() == y.coords.array()).all();
    differs = differs || (x.coords.array() != z.coords.array()).any();
  }
  CHECK(same);
  CHECK(differs);
  CHECK(RngStream(1, 0).next_u64() != RngStream(1, 1).next_u64());
}
