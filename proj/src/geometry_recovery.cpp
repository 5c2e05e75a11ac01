#include "liesig/geometry_recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "liesig/errors.hpp"
#include "liesig/parallel.hpp"
#include "liesig/quadrature.hpp"

namespace liesig {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

TraceSpectrum deterministic(std::vector<double> values, std::string method, std::string group) {
  TraceSpectrum s;
  s.stderr_values.assign(values.size(), 0.0);
  s.values = std::move(values);
  s.method = std::move(method);
  s.group = std::move(group);
  return s;
}

void require_half_depth(int half_depth) {
  if (half_depth < 0) throw ConfigError("half-depth K must be >= 0");
}

}  // namespace

TraceSpectrum rtr_spectrum(const AverageSignatureResult& avg, int half_depth) {
  require_half_depth(half_depth);
  if (avg.tensor.depth() < 2 * half_depth)
    throw ConfigError("rtr_spectrum: average has depth " + std::to_string(avg.tensor.depth()) + " but K=" +
                      std::to_string(half_depth) + " needs depth " + std::to_string(2 * half_depth));
  TraceSpectrum s;
  s.method = to_string(avg.method);
  s.group = avg.group;
  s.samples = avg.samples;
  s.seed = avg.seed;
  for (int k = 0; k <= half_depth; ++k) {
    const double scale = factorial(2 * k);
    s.values.push_back(scale * trace_level(avg.tensor, 2 * k));
    // |trace error| <= sqrt(#diagonal words) * |level error|
    const double se = avg.stderr_per_level.empty()
                          ? 0.0
                          : scale * std::sqrt(static_cast<double>(saturating_pow(avg.tensor.dim(), k))) *
                                avg.stderr_per_level[2 * k];
    s.stderr_values.push_back(se);
  }
  return s;
}

TraceSpectrum product_spectrum(const TraceSpectrum& a, const TraceSpectrum& b) {
  const int half_depth = std::min(a.half_depth(), b.half_depth());
  std::vector<double> values(half_depth + 1, 0.0), var(half_depth + 1, 0.0);
  for (int m = 0; m <= half_depth; ++m) {
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
      if (k > 0) binom = binom * (m - k + 1) / k;
      values[m] += binom * a.r(k) * b.r(m - k);
      const double ea = a.stderr_values.empty() ? 0.0 : a.stderr_values[k];
      const double eb = b.stderr_values.empty() ? 0.0 : b.stderr_values[m - k];
      var[m] += binom * binom * (ea * ea * b.r(m - k) * b.r(m - k) + eb * eb * a.r(k) * a.r(k));
    }
  }
  TraceSpectrum s = deterministic(std::move(values), "product_shuffle", "product:" + a.group + "," + b.group);
  for (int m = 0; m <= half_depth; ++m) s.stderr_values[m] = std::sqrt(var[m]);
  return s;
}

TraceSpectrum spectrum_closed_form(const LieGroupModel& model, int half_depth) {
  require_half_depth(half_depth);
  const auto f = model.factors();
  if (!f.empty()) {
    auto s = product_spectrum(spectrum_closed_form(*f[0], half_depth), spectrum_closed_form(*f[1], half_depth));
    s.method = "closed_form";
    s.group = model.kind();
    return s;
  }
  if (model.kind() != "circle")
    throw ConfigError("closed-form spectrum is only available for circles and tori, not '" + model.kind() + "'");
  std::vector<double> values;
  double p = 1.0;
  for (int k = 0; k <= half_depth; ++k) {
    values.push_back(p / (2 * k + 1));
    p *= kPi * kPi;
  }
  return deterministic(std::move(values), "closed_form", "circle");
}

TraceSpectrum spectrum_quadrature(const LieGroupModel& model, int half_depth, int nodes) {
  require_half_depth(half_depth);
  if (nodes < 1) throw ConfigError("nodes must be >= 1");
  const auto f = model.factors();
  if (!f.empty()) {
    auto s = product_spectrum(spectrum_quadrature(*f[0], half_depth, nodes),
                              spectrum_quadrature(*f[1], half_depth, nodes));
    s.method = "quadrature";
    s.group = model.kind();
    return s;
  }
  std::vector<double> values;
  if (model.kind() == "circle") {
    const auto rule = gauss_legendre<double>(nodes, -kPi, kPi);
    for (int k = 0; k <= half_depth; ++k)
      values.push_back(rule.integrate([k](double t) { return std::pow(t, 2 * k); }) / (2.0 * kPi));
  } else if (model.kind() == "su2") {
    // (2k)! tr(A_{2k}) = I_{2k} * tr(M_{2k}) and tr(M_{2k}) = E|v|^{2k} = 1
    for (int k = 0; k <= half_depth; ++k) values.push_back(su2_radial_moment(2 * k, nodes));
  } else {
    throw ConfigError("quadrature spectrum is not available for '" + model.kind() + "'");
  }
  return deterministic(std::move(values), "quadrature", model.kind());
}

TraceSpectrum exact_spectrum(const LieGroupModel& model, int half_depth, int nodes) {
  const auto f = model.factors();
  if (f.empty())
    return model.kind() == "circle" ? spectrum_closed_form(model, half_depth)
                                    : spectrum_quadrature(model, half_depth, nodes);
  auto s = product_spectrum(exact_spectrum(*f[0], half_depth, nodes), exact_spectrum(*f[1], half_depth, nodes));
  s.group = model.kind();
  return s;
}

namespace {

struct PowerSums {
  std::vector<double> sum;
  std::vector<double> sumsq;
};

}  // namespace

TraceSpectrum spectrum_monte_carlo(const LieGroupModel& model, int half_depth, const MonteCarloOptions& opts) {
  require_half_depth(half_depth);
  if (opts.samples < 1) throw ConfigError("samples must be >= 1");
  auto partials = map_chunks<PowerSums>(
      opts.samples, opts.chunk_size, opts.threads, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        RngStream rng(opts.seed, chunk);
        PowerSums acc{std::vector<double>(half_depth + 1, 0.0), std::vector<double>(half_depth + 1, 0.0)};
        for (std::uint64_t i = begin; i < end; ++i) {
          const double d2 = sample_log(model, rng).squaredNorm();
          double p = 1.0;
          for (int k = 0; k <= half_depth; ++k) {
            acc.sum[k] += p;
            acc.sumsq[k] += p * p;
            p *= d2;
          }
        }
        return acc;
      });
  TraceSpectrum s;
  s.method = "monte_carlo";
  s.group = model.kind();
  s.samples = opts.samples;
  s.seed = opts.seed;
  const double count = static_cast<double>(opts.samples);
  for (int k = 0; k <= half_depth; ++k) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& p : partials) {
      sum += p.sum[k];
      sumsq += p.sumsq[k];
    }
    s.values.push_back(sum / count);
    const double var = opts.samples > 1 ? std::max(0.0, (sumsq - sum * sum / count) / (count - 1.0)) : 0.0;
    s.stderr_values.push_back(std::sqrt(var / count));
  }
  return s;
}

double lk_norm(const TraceSpectrum& spec, int k) {
  if (k < 1 || k > spec.half_depth())
    throw ConfigError("lk_norm: k=" + std::to_string(k) + " outside 1.." + std::to_string(spec.half_depth()));
  return std::pow(spec.r(k), 1.0 / k);
}

DiameterEstimate diameter_estimate(const TraceSpectrum& spec) {
  const int K = spec.half_depth();
  if (K < 4) throw ConfigError("diameter_estimate needs K >= 4, got K=" + std::to_string(K));
  DiameterEstimate est;
  std::vector<double> sigma;
  for (int k = 1; k <= K; ++k) {
    if (!(spec.r(k) > 0.0)) throw FitFailure("diameter_estimate: non-positive spectrum value at k=" + std::to_string(k));
    const double raw = std::pow(spec.r(k), 1.0 / (2 * k));
    est.raw_sequence.push_back(raw);
    const double se = spec.stderr_values.empty() ? 0.0 : spec.stderr_values[k];
    sigma.push_back(raw * se / (2.0 * k * spec.r(k)));
  }
  for (std::size_t i = 0; i + 1 < est.raw_sequence.size(); ++i) {
    const double slack = 4.0 * (sigma[i] + sigma[i + 1]) + 1e-12 * est.raw_sequence[i];
    if (est.raw_sequence[i + 1] < est.raw_sequence[i] - slack) est.raw_non_decreasing = false;
  }

  est.k_first = std::max(1, K / 2);
  const int m = K - est.k_first + 1;
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const int k = est.k_first + i;
    design(i, 0) = 2.0 * k;
    design(i, 1) = -std::log(2.0 * k);
    design(i, 2) = 1.0;
    y(i) = std::log(spec.r(k));
  }
  const Eigen::Vector3d sol = design.colPivHouseholderQr().solve(y);
  est.diameter = std::exp(sol(0));
  est.exponent_c = sol(1);
  est.intercept_b = sol(2);
  est.residual_rms = std::sqrt((design * sol - y).squaredNorm() / m);
  if (!std::isfinite(est.diameter) || est.diameter <= 0.0) throw FitFailure("diameter fit did not produce a positive value");
  return est;
}

namespace {

using Real = long double;
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Monomial coefficients in t of the degree-d Chebyshev projection (on t in
// [0,1], s = 2t - 1) of t -> erfc((t - t0)/h) / 2.
VectorR mollified_step_polynomial(int degree, Real t0, Real h) {
  const int nodes = 4 * degree + 8;
  VectorR cheb = VectorR::Zero(degree + 1);
  for (int i = 0; i < nodes; ++i) {
    const Real theta = std::numbers::pi_v<Real> * (i + Real(0.5)) / nodes;
    const Real s = std::cos(theta);
    const Real f = std::erfc(((s + 1) / 2 - t0) / h) / 2;
    for (int m = 0; m <= degree; ++m) cheb(m) += f * std::cos(m * theta);
  }
  cheb *= Real(2) / nodes;
  cheb(0) /= 2;

  // T_m in powers of s
  VectorR in_s = VectorR::Zero(degree + 1);
  VectorR prev = VectorR::Zero(degree + 1), cur = VectorR::Zero(degree + 1);
  prev(0) = 1;
  in_s += cheb(0) * prev;
  if (degree >= 1) {
    cur(1) = 1;
    in_s += cheb(1) * cur;
  }
  for (int m = 2; m <= degree; ++m) {
    VectorR next = VectorR::Zero(degree + 1);
    for (int j = 1; j <= m; ++j) next(j) = 2 * cur(j - 1);
    next -= prev;
    in_s += cheb(m) * next;
    prev = cur;
    cur = next;
  }

  // s^m = (2t - 1)^m
  VectorR in_t = VectorR::Zero(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    if (in_s(m) == 0) continue;
    Real binom = 1;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) binom = binom * (m - j + 1) / j;
      const Real term = binom * std::pow(Real(2), j) * (((m - j) % 2 == 0) ? Real(1) : Real(-1));
      in_t(j) += in_s(m) * term;
    }
  }
  return in_t;
}

}  // namespace

BallVolumeEstimate ball_volume_from_moments(const TraceSpectrum& spec, double radius, int degree, double dmax) {
  if (degree < 1) throw ConfigError("ball_volume_from_moments: degree must be >= 1");
  if (degree > spec.half_depth())
    throw ConfigError("ball_volume_from_moments: degree " + std::to_string(degree) + " exceeds the " +
                      std::to_string(spec.half_depth()) + " available moments");
  if (!(dmax > 0.0)) throw ConfigError("ball_volume_from_moments: Dmax must be positive");
  if (radius < 0.0) throw ConfigError("ball_volume_from_moments: negative radius");

  BallVolumeEstimate est;
  est.requested_degree = degree;
  const Real x_max = Real(dmax) * dmax;
  const Real t0 = std::min<Real>(Real(radius) * radius, x_max) / x_max;

  // moments of t = d^2 / Dmax^2 and their relative noise
  VectorR mu(degree + 1), rel_noise(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    mu(j) = Real(spec.r(j)) / std::pow(x_max, j);
    const double se = spec.stderr_values.empty() ? 0.0 : spec.stderr_values[j];
    rel_noise(j) = 16 * Real(std::numeric_limits<double>::epsilon()) + (spec.r(j) > 0 ? Real(se / spec.r(j)) : Real(0));
  }

  constexpr Real kNoiseBudget = 2e-3L;
  VectorR coeff;
  for (int d = degree; d >= 1; --d) {
    const Real h = Real(1) / (2 * d);
    coeff = mollified_step_polynomial(d, t0, h);
    Real bound = 0;
    for (int j = 0; j <= d; ++j) bound += std::abs(coeff(j)) * mu(j) * rel_noise(j);
    est.effective_degree = d;
    est.mollifier_width = static_cast<double>(h * x_max);
    est.noise_bound = static_cast<double>(bound);
    if (bound <= kNoiseBudget) break;
  }
  Real value = 0;
  for (int j = 0; j <= est.effective_degree; ++j) value += coeff(j) * mu(j);
  est.raw_value = static_cast<double>(value);
  est.value = std::clamp(est.raw_value, 0.0, 1.0);
  // a single point is Haar-null and the closed ball of radius Dmax is everything
  if (radius == 0.0) est.value = 0.0;
  if (radius >= dmax) est.value = 1.0;
  return est;
}

BallVolumeEstimate ball_volume_from_moments(const TraceSpectrum& spec, double radius, int degree) {
  return ball_volume_from_moments(spec, radius, degree, diameter_estimate(spec).diameter);
}

std::vector<BallVolumeSample> ball_volume_empirical(const LieGroupModel& model, const std::vector<double>& radii,
                                                    const MonteCarloOptions& opts) {
  if (opts.samples < 1) throw ConfigError("samples must be >= 1");
  const auto partials = map_chunks<std::vector<std::uint64_t>>(
      opts.samples, opts.chunk_size, opts.threads, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        RngStream rng(opts.seed, chunk);
        std::vector<std::uint64_t> counts(radii.size(), 0);
        for (std::uint64_t i = begin; i < end; ++i) {
          const double d = sample_log(model, rng).norm();
          for (std::size_t j = 0; j < radii.size(); ++j)
            if (d <= radii[j]) ++counts[j];
        }
        return counts;
      });
  std::vector<BallVolumeSample> out;
  const double count = static_cast<double>(opts.samples);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    std::uint64_t c = 0;
    for (const auto& p : partials) c += p[j];
    const double f = static_cast<double>(c) / count;
    out.push_back({radii[j], f, std::sqrt(f * (1.0 - f) / count), opts.samples});
  }
  return out;
}

BallVolumeSample ball_volume_empirical(const LieGroupModel& model, double radius, const MonteCarloOptions& opts) {
  return ball_volume_empirical(model, std::vector<double>{radius}, opts).front();
}

std::vector<double> default_eps_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 8; ++i) grid.push_back(0.05 * std::pow(6.0, i / 7.0));
  grid.back() = 0.3;
  return grid;
}

double unit_ball_volume(int n) {
  if (n < 1) throw ConfigError("unit_ball_volume: dimension must be >= 1");
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

SmallBallFit small_ball_recovery(const BallVolumeFn& f, const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 4) throw ConfigError("small_ball_recovery needs at least 4 radii");
  for (double e : eps_grid)
    if (!(e > 0.0 && e <= 0.4)) throw ConfigError("small_ball_recovery radii must lie in (0, 0.4]");

  SmallBallFit fit;
  fit.eps_grid = eps_grid;
  for (double e : eps_grid) {
    const BallVolumeSample s = f(e);
    if (!(s.value > 0.0)) throw FitFailure("ball volume is zero at eps=" + std::to_string(e) + "; increase samples");
    fit.f_values.push_back(s.value);
    fit.f_stderr.push_back(s.stderr_value);
  }
  const int m = static_cast<int>(eps_grid.size());

  // dimension: least-squares slope of log F against log eps
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    design(i, 0) = std::log(eps_grid[i]);
    design(i, 1) = 1.0;
    y(i) = std::log(fit.f_values[i]);
  }
  const Eigen::Vector2d line = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd slope_res = y - design * line;
  fit.slope_residuals.assign(slope_res.data(), slope_res.data() + m);
  fit.dimension_raw = line(0);
  fit.dimension = static_cast<int>(std::lround(fit.dimension_raw));
  if (fit.dimension < 1 || std::abs(fit.dimension_raw - fit.dimension) > 0.35)
    throw AmbiguousDimension("log-log slope " + std::to_string(fit.dimension_raw) + " is not within 0.35 of a positive integer");

  // F / eps^n = a - b eps^2 with a = w_n / V and b = a S / (6 (n + 2))
  const int n = fit.dimension;
  Eigen::MatrixXd wdesign(m, 2);
  Eigen::VectorXd wy(m);
  for (int i = 0; i < m; ++i) {
    const double scale = std::pow(eps_grid[i], n);
    const double sigma = fit.f_stderr[i] > 0.0 ? fit.f_stderr[i] / scale : 1.0;
    wdesign(i, 0) = 1.0 / sigma;
    wdesign(i, 1) = -eps_grid[i] * eps_grid[i] / sigma;
    wy(i) = fit.f_values[i] / scale / sigma;
  }
  const Eigen::Vector2d ab = wdesign.colPivHouseholderQr().solve(wy);
  const Eigen::VectorXd res = wy - wdesign * ab;
  fit.fit_residuals.assign(res.data(), res.data() + m);
  if (!(ab(0) > 0.0)) throw FitFailure("small-ball fit produced a non-positive volume");
  fit.volume = unit_ball_volume(n) / ab(0);
  fit.scalar_curvature = 6.0 * (n + 2) * ab(1) / ab(0);
  return fit;
}

}  // namespace liesig
