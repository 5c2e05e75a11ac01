#include "doctest.h"
#include "liesig/errors.hpp"
#include "liesig/geometry_recovery.hpp"
#include "liesig/recovery_pipeline.hpp"
#include "test_support.hpp"

using namespace liesig;
using liesig::test::kPi;

namespace {

MonteCarloOptions mc(std::uint64_t samples, std::uint64_t seed) {
  MonteCarloOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

double su2_cdf(double r) { return (r - std::sin(r) * std::cos(r)) / kPi; }

// Noise-free ball volume of a constant-curvature model.
BallVolumeFn exact_small_ball(int n, double volume, double curvature) {
  return [=](double eps) {
    BallVolumeSample s;
    s.radius = eps;
    s.value = unit_ball_volume(n) / volume * std::pow(eps, n) * (1.0 - curvature * eps * eps / (6.0 * (n + 2)));
    s.stderr_value = 1e-3 * s.value;
    return s;
  };
}

}  // namespace

TEST_CASE("trace spectra") {
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  const auto c = spectrum_closed_form(*circle, 8);
  CHECK(c.r(0) == 1.0);
  CHECK(c.r(1) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-15));
  for (int k = 0; k <= 8; ++k) CHECK(c.r(k) == doctest::Approx(std::pow(kPi, 2 * k) / (2 * k + 1)).epsilon(1e-14));

  const auto q = spectrum_quadrature(*su2, 8, 64);
  CHECK(q.r(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.r(1) == doctest::Approx(kPi * kPi / 3.0 - 0.5).epsilon(1e-13));

  const auto via_tensor = rtr_spectrum(average_quadrature(*su2, 16, 64), 8);
  for (int k = 0; k <= 8; ++k) CHECK(via_tensor.r(k) == doctest::Approx(q.r(k)).epsilon(1e-12));
  CHECK_THROWS_AS(rtr_spectrum(average_quadrature(*su2, 6, 64), 4), ConfigError);
}

TEST_CASE("product spectrum") {
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  const auto t2 = product_spectrum(spectrum_closed_form(*circle, 6), spectrum_closed_form(*circle, 6));
  CHECK(t2.r(1) == doctest::Approx(2.0 * kPi * kPi / 3.0));
  const auto direct = spectrum_closed_form(*parse_group("torus:2"), 6);
  for (int k = 0; k <= 6; ++k) CHECK(t2.r(k) == doctest::Approx(direct.r(k)).epsilon(1e-14));

  auto mixed = parse_group("product:circle,su2");
  const auto exact = exact_spectrum(*mixed, 4, 64);
  const auto est = spectrum_monte_carlo(*mixed, 4, mc(1'000'000, 12));
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(est.r(k) - exact.r(k)) <= 4.0 * est.stderr_values[k]);
}

TEST_CASE("independent streams agree within their errors") {
  auto su2 = parse_group("su2");
  const auto a = spectrum_monte_carlo(*su2, 4, mc(500'000, 1));
  const auto b = spectrum_monte_carlo(*su2, 4, mc(500'000, 2));
  for (int k = 1; k <= 4; ++k)
    CHECK(std::abs(a.r(k) - b.r(k)) <= 4.0 * std::hypot(a.stderr_values[k], b.stderr_values[k]));
}

TEST_CASE("L^k norms") {
  auto circle = parse_group("circle");
  const auto c = spectrum_closed_form(*circle, 8);
  CHECK(lk_norm(c, 1) == doctest::Approx(kPi * kPi / 3.0));
  CHECK(lk_norm(c, 2) == doctest::Approx(kPi * kPi / std::sqrt(5.0)));
  for (int k = 1; k < 8; ++k) CHECK(lk_norm(c, k) <= lk_norm(c, k + 1));
  const auto q = spectrum_quadrature(*parse_group("su2"), 8, 64);
  for (int k = 1; k < 8; ++k) CHECK(lk_norm(q, k) <= lk_norm(q, k + 1));
}

TEST_CASE("diameter") {
  const auto c = diameter_estimate(spectrum_closed_form(*parse_group("circle"), 32));
  CHECK(std::abs(c.diameter / kPi - 1.0) <= 0.01);
  CHECK(c.raw_non_decreasing);
  const auto s = diameter_estimate(spectrum_quadrature(*parse_group("su2"), 32, 64));
  CHECK(std::abs(s.diameter / kPi - 1.0) <= 0.02);
  const auto t = diameter_estimate(exact_spectrum(*parse_group("torus:2"), 32, 64));
  CHECK(std::abs(t.diameter / (kPi * std::sqrt(2.0)) - 1.0) <= 0.02);
  for (const auto* d : {&c, &s, &t})
    for (std::size_t i = 1; i < d->raw_sequence.size(); ++i) CHECK(d->raw_sequence[i] >= d->raw_sequence[i - 1]);
  CHECK_THROWS_AS(diameter_estimate(spectrum_closed_form(*parse_group("circle"), 3)), ConfigError);
}

TEST_CASE("ball volume from moments") {
  const auto c = spectrum_closed_form(*parse_group("circle"), 60);
  const auto s = spectrum_quadrature(*parse_group("su2"), 60, 128);
  for (const auto* spec : {&c, &s}) {
    const double dmax = diameter_estimate(*spec).diameter;
    CHECK(std::abs(ball_volume_from_moments(*spec, kPi / 2, 60, dmax).value - 0.5) <= 0.02);
    CHECK(std::abs(ball_volume_from_moments(*spec, 0.0, 60, dmax).value) <= 0.02);
    CHECK(std::abs(ball_volume_from_moments(*spec, dmax, 60, dmax).value - 1.0) <= 0.02);
    const auto est = ball_volume_from_moments(*spec, 1.0, 60, dmax);
    CHECK(est.requested_degree == 60);
    CHECK(est.effective_degree <= 60);
    CHECK(est.effective_degree >= 8);
  }
  CHECK_THROWS_AS(ball_volume_from_moments(c, 1.0, 61), ConfigError);
}

TEST_CASE("moment and empirical ball volumes agree") {
  const struct {
    const char* name;
    double (*cdf)(double);
  } cases[] = {{"circle", [](double r) { return r / kPi; }}, {"su2", su2_cdf}};
  for (const auto& cs : cases) {
    auto model = parse_group(cs.name);
    const auto spec = exact_spectrum(*model, 32, 64);
    const double d = diameter_estimate(spec).diameter;
    std::vector<double> radii;
    for (int i = 1; i <= 9; ++i) radii.push_back(d * i / 10.0);
    const auto emp = ball_volume_empirical(*model, radii, mc(1'000'000, 13));
    double prev = -1.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double from_moments = ball_volume_from_moments(spec, radii[i], 32, d).value;
      CHECK_MESSAGE(std::abs(from_moments - emp[i].value) <= 0.025, cs.name << " R=" << radii[i]);
      CHECK(std::abs(emp[i].value - cs.cdf(radii[i])) <= 4.0 * emp[i].stderr_value);
      CHECK(emp[i].value >= prev);
      prev = emp[i].value;
    }
  }
}

TEST_CASE("empirical ball volume") {
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  const auto c = ball_volume_empirical(*circle, kPi / 2, mc(1'000'000, 14));
  CHECK(std::abs(c.value - 0.5) <= 4.0 * c.stderr_value);
  CHECK(c.stderr_value == doctest::Approx(5e-4).epsilon(0.01));
  const auto s = ball_volume_empirical(*su2, kPi / 2, mc(1'000'000, 15));
  CHECK(std::abs(s.value - 0.5) <= 4.0 * s.stderr_value);
  CHECK(ball_volume_empirical(*su2, kPi, mc(10'000, 16)).value == 1.0);
  CHECK(ball_volume_empirical(*parse_group("torus:2"), 5.0, mc(10'000, 16)).value == 1.0);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
  CHECK_THROWS_AS(unit_ball_volume(0), ConfigError);
}

TEST_CASE("small-ball fit on noise-free data") {
  const auto grid = default_eps_grid();
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(0.3));
  const struct {
    int n;
    double v, s;
  } cases[] = {{1, 2 * kPi, 0.0}, {3, 2 * kPi * kPi, 6.0}, {2, 4 * kPi * kPi, 0.0}, {4, 8 * kPi * kPi * kPi, 6.0}};
  for (const auto& c : cases) {
    const auto fit = small_ball_recovery(exact_small_ball(c.n, c.v, c.s), grid);
    CHECK(fit.dimension == c.n);
    CHECK(fit.volume == doctest::Approx(c.v).epsilon(1e-9));
    CHECK(fit.scalar_curvature == doctest::Approx(c.s).epsilon(1e-9));
  }
}

TEST_CASE("small-ball failures") {
  const auto grid = default_eps_grid();
  BallVolumeFn fractional = [](double eps) {
    return BallVolumeSample{eps, std::pow(eps, 1.5), 1e-6, 0};
  };
  CHECK_THROWS_AS(small_ball_recovery(fractional, grid), AmbiguousDimension);
  BallVolumeFn empty = [](double eps) { return BallVolumeSample{eps, 0.0, 0.0, 0}; };
  CHECK_THROWS_AS(small_ball_recovery(empty, grid), FitFailure);
  CHECK_THROWS_AS(small_ball_recovery(exact_small_ball(1, 1, 0), {0.1, 0.2, 0.3}), ConfigError);
  CHECK_THROWS_AS(small_ball_recovery(exact_small_ball(1, 1, 0), {0.1, 0.2, 0.3, 0.5}), ConfigError);
}

TEST_CASE("recovery pipeline") {
  auto su2 = parse_group("su2");
  RecoverOptions opts;
  opts.mc = mc(2'000'000, 7);
  const auto rep = recover_geometry(*su2, opts);
  REQUIRE(rep.small_ball);
  CHECK(rep.small_ball->dimension == 3);
  CHECK(rep.error.empty());
  double prev = -1.0;
  for (const auto& [r, f] : rep.f_table) {
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(std::abs(ball_volume_from_moments(rep.spectrum, rep.diameter.diameter, 8, rep.diameter.diameter).value - 1.0) <=
        0.03);

  auto mixed = parse_group("product:circle,su2");
  const auto starved = recover_geometry(*mixed, opts);
  CHECK_FALSE(starved.small_ball);
  CHECK(starved.error_kind == "FitFailure");
  opts.eps_grid = {0.2, 0.25, 0.3, 0.35, 0.4};
  opts.mc = mc(4'000'000, 7);
  const auto rep4 = recover_geometry(*mixed, opts);
  REQUIRE(rep4.small_ball);
  CHECK(rep4.small_ball->dimension == 4);

  opts.spectrum_method = "fourier";
  CHECK_THROWS_AS(recover_geometry(*su2, opts), ConfigError);
}
