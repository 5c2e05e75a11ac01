#ifndef LIESIG_QUADRATURE_HPP
#define LIESIG_QUADRATURE_HPP

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace liesig {

template <typename Scalar>
struct QuadratureRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  template <typename F>
  Scalar integrate(F&& f) const {
    Scalar s(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights(i) * f(nodes(i));
    return s;
  }
};

/// Gauss-Legendre rule with `count` nodes on [a, b]; exact for polynomials of
/// degree < 2 * count.  Nodes come from Newton's method on P_count.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int count, Scalar a, Scalar b) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  using std::abs;
  using std::cos;
  QuadratureRule<Scalar> rule{Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(count),
                              Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(count)};
  const Scalar half = (b - a) / 2, mid = (b + a) / 2;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (int i = 0; i < (count + 1) / 2; ++i) {
    Scalar x = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(count) + Scalar(0.5)));
    Scalar dp(0);
    for (int it = 0; it < 100; ++it) {
      Scalar p0(1), p1 = x;
      for (int k = 2; k <= count; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = Scalar(1);
      dp = Scalar(count) * (x * p1 - p0) / (x * x - 1);
      const Scalar dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= std::numeric_limits<Scalar>::epsilon() * 4) {
        // refresh derivative at the converged node
        p0 = Scalar(1);
        p1 = x;
        for (int k = 2; k <= count; ++k) {
          const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
          p0 = p1;
          p1 = p2;
        }
        if (count == 1) p0 = Scalar(1);
        dp = Scalar(count) * (x * p1 - p0) / (x * x - 1);
        break;
      }
    }
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes(i) = mid - half * x;
    rule.nodes(count - 1 - i) = mid + half * x;
    rule.weights(i) = rule.weights(count - 1 - i) = half * w;
  }
  return rule;
}

}  // namespace liesig

#endif
