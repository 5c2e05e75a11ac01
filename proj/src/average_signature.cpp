#include "liesig/average_signature.hpp"

#include <cmath>
#include <numbers>

#include "liesig/errors.hpp"
#include "liesig/parallel.hpp"
#include "liesig/quadrature.hpp"

namespace liesig {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_circle(const LieGroupModel& m) { return m.kind() == "circle"; }
bool is_su2(const LieGroupModel& m) { return m.kind() == "su2"; }

bool all_circles(const LieGroupModel& m) {
  const auto f = m.factors();
  if (f.empty()) return is_circle(m);
  return all_circles(*f[0]) && all_circles(*f[1]);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// The single coefficient of level k of a one-dimensional average.
AverageSignatureResult one_dimensional(const std::vector<double>& coeff, AverageMethod method) {
  const int depth = static_cast<int>(coeff.size()) - 1;
  AverageSignatureResult res{TensorSeriesd(1, depth), method, "circle", 0, 0, {}, {}};
  for (int k = 0; k <= depth; ++k) res.tensor.level(k)(0) = coeff[k];
  return res;
}

}  // namespace

std::string to_string(AverageMethod m) {
  switch (m) {
    case AverageMethod::closed_form: return "closed_form";
    case AverageMethod::quadrature: return "quadrature";
    case AverageMethod::monte_carlo: return "monte_carlo";
    case AverageMethod::product_shuffle: return "product_shuffle";
  }
  return "unknown";
}

AverageMethod parse_average_method(const std::string& s) {
  if (s == "closed_form") return AverageMethod::closed_form;
  if (s == "quadrature") return AverageMethod::quadrature;
  if (s == "monte_carlo") return AverageMethod::monte_carlo;
  if (s == "product_shuffle") return AverageMethod::product_shuffle;
  throw ConfigError("unknown method '" + s + "' (expected closed_form, quadrature, monte_carlo, product_shuffle)");
}

AverageSignatureResult average_closed_form(const LieGroupModel& model, int depth) {
  if (depth < 0) throw ConfigError("depth must be >= 0");
  if (is_circle(model)) {
    // A_k = pi^k / (k+1)! for even k, 0 for odd k
    std::vector<double> coeff(depth + 1, 0.0);
    double c = 1.0;
    for (int k = 0; k <= depth; ++k) {
      if (k > 0) c *= kPi / (k + 1);
      if (k % 2 == 0) coeff[k] = c;
    }
    return one_dimensional(coeff, AverageMethod::closed_form);
  }
  if (!model.factors().empty() && all_circles(model)) {
    const auto f = model.factors();
    auto res = product_average_shuffle(average_closed_form(*f[0], depth), average_closed_form(*f[1], depth), depth);
    res.method = AverageMethod::closed_form;
    res.group = model.kind();
    return res;
  }
  throw ConfigError("closed_form average is only available for circles and tori, not '" + model.kind() + "'");
}

double su2_radial_moment(int k, int nodes) {
  const auto rule = gauss_legendre<double>(nodes, 0.0, kPi);
  return rule.integrate([k](double r) {
    const double s = std::sin(r);
    return std::pow(r, k) * (2.0 / kPi) * s * s;
  });
}

Eigen::VectorXd sphere_moment_tensor(int k) {
  if (k < 0) throw ShapeError("sphere_moment_tensor: negative level");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(saturating_pow(3, k)));
  if (k % 2 == 1) return m;
  // E[x^a y^b z^c] over S^2 = (a-1)!! (b-1)!! (c-1)!! / (k+1)!!  (a, b, c even)
  std::vector<double> dfact(k + 3, 1.0);  // dfact[j] = (j-1)!!
  for (int j = 2; j < k + 3; ++j) dfact[j] = dfact[j - 2] * (j - 1);
  const double denom = dfact[k + 2];
  std::vector<int> digits(k, 0);
  int counts[3] = {k, 0, 0};
  for (Eigen::Index idx = 0; idx < m.size(); ++idx) {
    if (counts[0] % 2 == 0 && counts[1] % 2 == 0 && counts[2] % 2 == 0)
      m(idx) = dfact[counts[0]] * dfact[counts[1]] * dfact[counts[2]] / denom;
    // odometer over row-major multi-indices, last letter fastest
    for (int p = k - 1; p >= 0; --p) {
      --counts[digits[p]];
      if (digits[p] < 2) {
        ++digits[p];
        ++counts[digits[p]];
        break;
      }
      digits[p] = 0;
      ++counts[0];
    }
  }
  return m;
}

AverageSignatureResult average_quadrature(const LieGroupModel& model, int depth, int nodes) {
  if (depth < 0) throw ConfigError("depth must be >= 0");
  if (nodes < 1) throw ConfigError("nodes must be >= 1");
  if (is_circle(model)) {
    // the density is even in theta, so odd moments vanish and even ones fold onto [0, pi]
    const auto rule = gauss_legendre<double>(nodes, 0.0, kPi);
    std::vector<double> coeff(depth + 1, 0.0);
    for (int k = 0; k <= depth; k += 2) {
      const double kf = factorial(k);
      coeff[k] = rule.integrate([k, kf](double t) { return std::pow(t, k) / kf; }) / kPi;
    }
    return one_dimensional(coeff, AverageMethod::quadrature);
  }
  if (is_su2(model)) {
    AverageSignatureResult res{TensorSeriesd(3, depth), AverageMethod::quadrature, "su2", 0, 0, {}, {}};
    res.tensor.level(0)(0) = 1.0;
    for (int k = 2; k <= depth; k += 2) res.tensor.level(k) = (su2_radial_moment(k, nodes) / factorial(k)) * sphere_moment_tensor(k);
    return res;
  }
  throw ConfigError("quadrature average is only available for circle and su2, not '" + model.kind() + "'");
}

namespace {

struct MomentSums {
  std::vector<Eigen::VectorXd> sum;
  std::vector<Eigen::VectorXd> sumsq;
};

}  // namespace

AverageSignatureResult average_monte_carlo(const LieGroupModel& model, int depth, const MonteCarloOptions& opts) {
  if (depth < 0) throw ConfigError("depth must be >= 0");
  if (opts.samples < 1) throw ConfigError("samples must be >= 1");
  const int n = model.dim();
  TensorSeriesd shape(n, depth);  // budget check before spawning workers

  auto partials = map_chunks<MomentSums>(opts.samples, opts.chunk_size, opts.threads,
                                         [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                                           RngStream rng(opts.seed, chunk);
                                           TensorSeriesd sig(n, depth);
                                           MomentSums acc;
                                           for (int k = 0; k <= depth; ++k) {
                                             acc.sum.push_back(Eigen::VectorXd::Zero(sig.level(k).size()));
                                             acc.sumsq.push_back(Eigen::VectorXd::Zero(sig.level(k).size()));
                                           }
                                           for (std::uint64_t i = begin; i < end; ++i) {
                                             exp_tensor_into(sample_log(model, rng), sig);
                                             for (int k = 0; k <= depth; ++k) {
                                               acc.sum[k] += sig.level(k);
                                               acc.sumsq[k] += sig.level(k).cwiseAbs2();
                                             }
                                           }
                                           return acc;
                                         });

  AverageSignatureResult res{TensorSeriesd(n, depth), AverageMethod::monte_carlo, model.kind(), opts.samples, opts.seed, {}, {}};
  const double count = static_cast<double>(opts.samples);
  res.coefficient_stderr = TensorSeriesd(n, depth);
  for (int k = 0; k <= depth; ++k) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(shape.level(k).size());
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(shape.level(k).size());
    for (const auto& p : partials) {
      sum += p.sum[k];
      sumsq += p.sumsq[k];
    }
    res.tensor.level(k) = sum / count;
    double se2 = 0.0;
    if (opts.samples > 1) {
      const Eigen::VectorXd var = ((sumsq - sum.cwiseAbs2() / count) / (count - 1.0)).cwiseMax(0.0);
      se2 = var.sum() / count;
      res.coefficient_stderr->level(k) = (var / count).cwiseSqrt();
    }
    res.stderr_per_level.push_back(std::sqrt(se2));
  }
  return res;
}

AverageSignatureResult product_average_shuffle(const AverageSignatureResult& a, const AverageSignatureResult& b,
                                               int depth) {
  if (depth < 0) throw ConfigError("depth must be >= 0");
  if (a.tensor.depth() < depth || b.tensor.depth() < depth)
    throw ShapeError("product_average_shuffle: factor averages are truncated below depth " + std::to_string(depth));
  const int n1 = a.tensor.dim(), n2 = b.tensor.dim();
  // k! A_k and j! B_j, shuffled, then level N scaled by 1/N!
  auto weighted = [depth](const TensorSeriesd& x) {
    TensorSeriesd y = with_depth(x, depth);
    for (int k = 0; k <= depth; ++k) y.level(k) *= factorial(k);
    return y;
  };
  TensorSeriesd c = shuffle_product(embed(weighted(a.tensor), n1 + n2, 0), embed(weighted(b.tensor), n1 + n2, n1));
  for (int k = 0; k <= depth; ++k) c.level(k) /= factorial(k);
  return {std::move(c), AverageMethod::product_shuffle, "product:" + a.group + "," + b.group, 0, 0, {}, {}};
}

AverageSignatureResult average_product_shuffle(const LieGroupModel& model, int depth, int nodes) {
  const auto f = model.factors();
  if (f.empty()) {
    auto res = is_circle(model) ? average_closed_form(model, depth) : average_quadrature(model, depth, nodes);
    return res;
  }
  auto res = product_average_shuffle(average_product_shuffle(*f[0], depth, nodes),
                                     average_product_shuffle(*f[1], depth, nodes), depth);
  res.group = model.kind();
  return res;
}

}  // namespace liesig
