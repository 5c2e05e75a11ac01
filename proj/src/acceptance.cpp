#include "liesig/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "liesig/average_signature.hpp"
#include "liesig/errors.hpp"
#include "liesig/geometry_recovery.hpp"
#include "liesig/path_signature.hpp"
#include "liesig/recovery_pipeline.hpp"
#include "liesig/serialization.hpp"
#include "oracles.hpp"

namespace liesig {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[fail] " << what << "; ";
    }
  }
  void note(const std::string& what) { detail << what << "; "; }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome circle_closed_form() {
  Outcome o;
  auto circle = parse_group("circle");
  const auto avg = average_closed_form(*circle, 16);
  double worst = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double want = std::pow(kPi, 2 * k) / std::tgamma(2.0 * k + 2.0);
    worst = std::max(worst, rel_err(avg.tensor.level(2 * k)(0), want));
  }
  bool odd_zero = true;
  for (int k = 1; k <= 15; k += 2) odd_zero = odd_zero && avg.tensor.level(k)(0) == 0.0;
  o.require(worst <= 1e-12, "even-level relative error " + fmt(worst));
  o.require(odd_zero, "odd levels exactly zero");
  o.note("max rel err " + fmt(worst, 3) + ", odd levels zero: " + (odd_zero ? "yes" : "no"));
  return o;
}

Outcome circle_spectrum() {
  Outcome o;
  auto circle = parse_group("circle");
  const auto spec = rtr_spectrum(average_closed_form(*circle, 16), 8);
  double worst = 0.0;
  for (int k = 0; k <= 8; ++k) worst = std::max(worst, rel_err(spec.r(k), std::pow(kPi, 2 * k) / (2 * k + 1)));
  const double r2_err = rel_err(spec.r(1), kPi * kPi / 3.0);
  o.require(worst <= 1e-12, "rtr relative error " + fmt(worst));
  o.require(r2_err <= 1e-12, "r2 = pi^2/3");
  o.note("max rel err " + fmt(worst, 3) + ", r2 = " + fmt(spec.r(1), 12));
  return o;
}

Outcome su2_trace_moment(int threads) {
  Outcome o;
  auto su2 = parse_group("su2");
  const double oracle =
      oracle::adaptive_simpson([](double r) { return r * r * (2.0 / kPi) * std::sin(r) * std::sin(r); }, 0.0, kPi, 1e-14);
  const double quad = rtr_spectrum(average_quadrature(*su2, 2, 64), 1).r(1);
  o.require(std::abs(quad - oracle) <= 1e-10, "quadrature vs oracle diff " + fmt(std::abs(quad - oracle)));
  o.require(std::abs(oracle - (kPi * kPi / 3.0 - 0.5)) <= 1e-10, "oracle vs pi^2/3 - 1/2");

  MonteCarloOptions mc;
  mc.samples = 1'000'000;
  mc.seed = 42;
  mc.threads = threads;
  const double mc_r2 = rtr_spectrum(average_monte_carlo(*su2, 2, mc), 1).r(1);
  const auto mc_spec = spectrum_monte_carlo(*su2, 1, mc);
  const double se = mc_spec.stderr_values[1];
  const double z = std::abs(mc_r2 - oracle) / se;
  o.require(z <= 4.0, "Monte Carlo z = " + fmt(z));
  o.note("quadrature " + fmt(quad, 12) + ", oracle " + fmt(oracle, 12) + ", MC " + fmt(mc_r2, 7) + " (z=" + fmt(z, 3) +
         ")");
  return o;
}

Outcome odd_levels(int threads) {
  Outcome o;
  MonteCarloOptions mc;
  mc.samples = 1'000'000;
  mc.seed = 42;
  mc.threads = threads;
  for (const char* name : {"circle", "su2"}) {
    auto model = parse_group(name);
    const auto avg = average_monte_carlo(*model, 5, mc);
    double worst = 0.0;
    for (int k = 1; k <= 5; k += 2) {
      const double ratio = avg.tensor.level(k).norm() / avg.stderr_per_level[k];
      worst = std::max(worst, ratio);
      o.require(ratio <= 4.0, std::string(name) + " level " + std::to_string(k) + " norm/stderr " + fmt(ratio));
    }
    o.note(std::string(name) + " max norm/stderr " + fmt(worst, 3));
  }
  return o;
}

Outcome product_theorem(int threads) {
  Outcome o;
  auto circle = parse_group("circle");
  auto torus = parse_group("torus:2");
  const auto c = average_closed_form(*circle, 8);
  const auto shuffle = product_average_shuffle(c, c, 8);
  MonteCarloOptions mc;
  mc.samples = 1'000'000;
  mc.seed = 42;
  mc.threads = threads;
  const auto direct = average_monte_carlo(*torus, 8, mc);
  double worst = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const auto& a = shuffle.tensor.level(k);
    const auto& b = direct.tensor.level(k);
    const auto& se = direct.coefficient_stderr->level(k);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double diff = std::abs(a(i) - b(i));
      if (se(i) == 0.0) {
        o.require(diff <= 1e-12, "level " + std::to_string(k) + " index " + std::to_string(i) + " exact mismatch");
        continue;
      }
      worst = std::max(worst, diff / se(i));
    }
  }
  o.require(worst <= 4.0, "max |shuffle - MC| / stderr " + fmt(worst));
  const double r2 = rtr_spectrum(average_closed_form(*torus, 2), 1).r(1);
  const double want = 2.0 * kPi * kPi / 3.0;
  o.require(std::abs(r2 - want) <= 4.0 * std::numeric_limits<double>::epsilon() * want,
            "rtr(C2) = " + fmt(r2, 17));
  o.note("max coefficient z " + fmt(worst, 3) + ", rtr(C2) - 2pi^2/3 = " + fmt(r2 - want, 3));
  return o;
}

Outcome diameter() {
  Outcome o;
  struct Case {
    const char* group;
    TraceSpectrum spec;
    double target;
    double tol;
  };
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  auto torus = parse_group("torus:2");
  const Case cases[] = {
      {"circle", spectrum_closed_form(*circle, 32), kPi, 0.01},
      {"su2", spectrum_quadrature(*su2, 32, 64), kPi, 0.02},
      {"torus:2", exact_spectrum(*torus, 32, 64), kPi * std::sqrt(2.0), 0.02},
  };
  for (const auto& c : cases) {
    const auto est = diameter_estimate(c.spec);
    const double err = rel_err(est.diameter, c.target);
    o.require(err <= c.tol, std::string(c.group) + " diameter " + fmt(est.diameter));
    bool nondecreasing = true;
    for (std::size_t i = 1; i < est.raw_sequence.size(); ++i)
      nondecreasing = nondecreasing && est.raw_sequence[i] >= est.raw_sequence[i - 1];
    o.require(nondecreasing, std::string(c.group) + " raw sequence non-decreasing");
    o.note(std::string(c.group) + " D=" + fmt(est.diameter, 7) + " (rel err " + fmt(err, 3) + ")");
  }
  return o;
}

Outcome ball_volume(int threads) {
  Outcome o;
  auto circle = parse_group("circle");
  auto su2 = parse_group("su2");
  const TraceSpectrum specs[] = {spectrum_closed_form(*circle, 60), spectrum_quadrature(*su2, 60, 128)};
  const char* names[] = {"circle", "su2"};
  for (int i = 0; i < 2; ++i) {
    const double dmax = diameter_estimate(specs[i]).diameter;
    const auto est = ball_volume_from_moments(specs[i], kPi / 2.0, 60, dmax);
    o.require(std::abs(est.value - 0.5) <= 0.02, std::string(names[i]) + " F(pi/2) = " + fmt(est.value));
    o.note(std::string(names[i]) + " F(pi/2)=" + fmt(est.value, 5) + " (degree " + std::to_string(est.effective_degree) +
           " of " + std::to_string(est.requested_degree) + ")");
  }

  MonteCarloOptions mc;
  mc.samples = 1'000'000;
  mc.seed = 42;
  mc.threads = threads;
  std::vector<double> radii;
  for (int i = 1; i <= 9; ++i) radii.push_back(kPi * i / 10.0);
  const auto circle_f = ball_volume_empirical(*circle, radii, mc);
  const auto su2_f = ball_volume_empirical(*su2, radii, mc);
  double worst = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const double zc = std::abs(circle_f[i].value - r / kPi) / circle_f[i].stderr_value;
    const double zs = std::abs(su2_f[i].value - (r - std::sin(r) * std::cos(r)) / kPi) / su2_f[i].stderr_value;
    worst = std::max({worst, zc, zs});
  }
  o.require(worst <= 4.0, "empirical F max z " + fmt(worst));
  o.note("empirical F max z " + fmt(worst, 3));
  return o;
}

Outcome geometry_recovery_check(int threads) {
  Outcome o;
  struct Case {
    const char* group;
    int n;
    double volume;
    double vol_tol;
    double curvature;
    double curv_tol;  // absolute
  };
  const Case cases[] = {
      {"circle", 1, 2.0 * kPi, 0.01, 0.0, 0.1},
      {"su2", 3, 2.0 * kPi * kPi, 0.03, 6.0, 0.9},
      {"torus:2", 2, 4.0 * kPi * kPi, 0.02, 0.0, 0.3},
  };
  for (const auto& c : cases) {
    auto model = parse_group(c.group);
    RecoverOptions opts;
    opts.mc.samples = 10'000'000;
    opts.mc.seed = 7;
    opts.mc.threads = threads;
    const auto rep = recover_geometry(*model, opts);
    const std::string g = c.group;
    if (!rep.small_ball) {
      o.require(false, g + " recovery failed: " + rep.error_kind + " " + rep.error);
      continue;
    }
    const auto& sb = *rep.small_ball;
    o.require(sb.dimension == c.n, g + " dimension " + std::to_string(sb.dimension));
    o.require(rel_err(sb.volume, c.volume) <= c.vol_tol, g + " volume " + fmt(sb.volume));
    o.require(std::abs(sb.scalar_curvature - c.curvature) <= c.curv_tol, g + " curvature " + fmt(sb.scalar_curvature));
    o.note(g + " n=" + std::to_string(sb.dimension) + " (raw " + fmt(sb.dimension_raw, 4) + ") V=" + fmt(sb.volume, 6) +
           " S=" + fmt(sb.scalar_curvature, 4));
  }
  return o;
}

Outcome path_pipeline() {
  Outcome o;
  auto su2 = parse_group("su2");
  const int depth = 6;
  AlgebraVector v(3);
  v << 0.7, -1.1, 0.9;
  const auto expected = exp_tensor(v, depth);

  const auto times = uniform_times(1024);
  const auto geodesic = sample_path(su2, [&v](double t) -> AlgebraVector { return t * v; }, times);
  const double d_geo = hilbert_distance(path_signature_numeric(geodesic, depth), expected);
  o.require(d_geo <= 1e-6, "geodesic distance " + fmt(d_geo));

  const auto warped = sample_path(su2, [&v](double t) -> AlgebraVector { return (t * t) * v; }, times);
  const double d_rep = hilbert_distance(path_signature_numeric(warped, depth), expected);
  o.require(d_rep <= 1e-6, "reparametrized distance " + fmt(d_rep));

  const AlgebraCurve wiggle = [](double t) -> AlgebraVector {
    AlgebraVector w(3);
    w << 0.9 * std::sin(2.0 * t), 0.6 * t * t - 0.3, 0.8 * std::cos(3.0 * t) - 0.8;
    return w;
  };
  const auto path = sample_path(su2, wiggle, times);
  const auto sig = path_signature_numeric(path, depth);
  AlgebraVector h(3);
  h << -0.4, 1.3, 0.2;
  const auto moved = left_translate(path, su2->exp(h));
  const double d_left = hilbert_distance(path_signature_numeric(moved, depth), sig);
  o.require(d_left <= 1e-6, "left-invariance distance " + fmt(d_left));

  const auto first = path_signature_numeric(sub_path(path, 0, 512), depth);
  const auto second = path_signature_numeric(sub_path(path, 512, 1024), depth);
  const double d_chen = hilbert_distance(concat_product(first, second), sig);
  o.require(d_chen <= 1e-10, "Chen split distance " + fmt(d_chen));

  o.note("geodesic " + fmt(d_geo, 3) + ", reparam " + fmt(d_rep, 3) + ", left " + fmt(d_left, 3) + ", split " +
         fmt(d_chen, 3));
  return o;
}

std::vector<std::string> seeded_outputs(int threads) {
  std::vector<std::string> out;
  MonteCarloOptions mc;
  mc.samples = 200'000;
  mc.seed = 11;
  mc.threads = threads;
  auto su2 = parse_group("su2");
  auto torus = parse_group("torus:2");
  const auto avg = average_monte_carlo(*su2, 4, mc);
  out.push_back(average_to_json(avg).dump());
  out.push_back(average_to_csv(avg));
  const auto spec = spectrum_monte_carlo(*torus, 8, mc);
  out.push_back(spectrum_to_json(spec).dump());
  out.push_back(spectrum_to_csv(spec));
  RecoverOptions opts;
  opts.mc = mc;
  opts.spectrum_method = "monte_carlo";
  const auto rep = recover_geometry(*su2, opts);
  out.push_back(recovery_to_json(rep).dump());
  out.push_back(recovery_to_csv(rep));
  return out;
}

Outcome determinism() {
  Outcome o;
  const auto reference = seeded_outputs(1);
  o.require(seeded_outputs(1) == reference, "repeat run with 1 thread differs");
  for (int threads : {4, 8})
    o.require(seeded_outputs(threads) == reference, "run with " + std::to_string(threads) + " threads differs");
  std::size_t bytes = 0;
  for (const auto& s : reference) bytes += s.size();
  o.note(std::to_string(reference.size()) + " outputs, " + std::to_string(bytes) + " bytes compared");
  return o;
}

Outcome recursion_sign() {
  Outcome o;
  auto integral = [](int n) {
    return oracle::adaptive_simpson([n](double r) { return std::pow(r, n) * std::sin(r) * std::sin(r); }, 0.0, kPi,
                                    1e-12 * std::pow(kPi, n + 1) / (n + 1));
  };
  const double i2 = integral(2);
  const double minus = kPi * kPi * kPi / 6.0 - kPi / 4.0;
  const double plus = kPi * kPi * kPi / 6.0 + kPi / 4.0;
  o.require(std::abs(i2 - minus) <= 1e-10, "I2 vs pi^3/6 - pi/4");
  o.require(std::abs(i2 - plus) > 1e-3, "I2 distinguishable from pi^3/6 + pi/4");

  std::vector<double> rec(17);
  rec[0] = kPi / 2.0;
  rec[1] = kPi * kPi / 4.0;
  double worst = 0.0;
  for (int n = 2; n <= 16; ++n) rec[n] = std::pow(kPi, n + 1) / (2.0 * (n + 1)) - n * (n - 1) / 4.0 * rec[n - 2];
  for (int n = 0; n <= 16; ++n) worst = std::max(worst, rel_err(rec[n], integral(n)));
  o.require(worst <= 1e-10, "recursion vs quadrature relative error " + fmt(worst));
  o.note("I2=" + fmt(i2, 15) + ", recursion max rel err " + fmt(worst, 3));
  return o;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  const int threads = std::max(1, opts.threads);
  struct Entry {
    int id;
    const char* title;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "circle closed-form average", 1.0, circle_closed_form},
      {2, "circle trace spectrum", 1.0, circle_spectrum},
      {3, "su2 second trace moment", 30.0, [threads] { return su2_trace_moment(threads); }},
      {4, "odd levels vanish", 60.0, [threads] { return odd_levels(threads); }},
      {5, "torus product formula", 60.0, [threads] { return product_theorem(threads); }},
      {6, "diameter from spectrum", 30.0, diameter},
      {7, "ball volume function", 60.0, [threads] { return ball_volume(threads); }},
      {8, "dimension, volume, curvature", 600.0, [threads] { return geometry_recovery_check(threads); }},
      {9, "path signature pipeline", 60.0, path_pipeline},
      {10, "seeded determinism", 300.0, determinism},
      {11, "radial moment recursion sign", 1.0, recursion_sign},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), e.id) == opts.only.end()) continue;
    CriterionResult r;
    r.id = e.id;
    r.title = e.title;
    r.time_limit = e.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      Outcome o = e.run();
      r.passed = o.passed;
      r.detail = o.detail.str();
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.time_limit) {
      r.passed = false;
      r.detail += "[fail] runtime over " + fmt(r.time_limit, 4) + " s; ";
    }
    while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
    if (opts.on_result) opts.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result_line(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%s  #%-2d %-30s %8.2fs / %-5gs  ", r.passed ? "PASS" : "FAIL", r.id,
                r.title.c_str(), r.seconds, r.time_limit);
  return head + r.detail;
}

}  // namespace liesig
