#ifndef LIESIG_AVERAGE_SIGNATURE_HPP
#define LIESIG_AVERAGE_SIGNATURE_HPP

// Average signature of a compact Lie group: the Haar average of the geodesic
// signatures exp_tensor(log g).  Odd levels vanish because Haar measure is
// invariant under g -> g^-1, i.e. v -> -v.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liesig/group_models.hpp"
#include "liesig/tensor_series.hpp"

namespace liesig {

enum class AverageMethod { closed_form, quadrature, monte_carlo, product_shuffle };

std::string to_string(AverageMethod m);
AverageMethod parse_average_method(const std::string& s);

struct AverageSignatureResult {
  TensorSeriesd tensor;
  AverageMethod method = AverageMethod::closed_form;
  std::string group;
  std::uint64_t samples = 0;  // Monte Carlo only
  std::uint64_t seed = 0;     // Monte Carlo only
  /// Per level: norm of the coordinate-wise standard errors (Monte Carlo only).
  std::vector<double> stderr_per_level;
  /// Coordinate-wise standard errors (Monte Carlo only).
  std::optional<TensorSeriesd> coefficient_stderr;
};

/// Exact average for the circle and for iterated circle products.
AverageSignatureResult average_closed_form(const LieGroupModel& model, int depth);

/// Gauss-Legendre quadrature; circle or su2.
AverageSignatureResult average_quadrature(const LieGroupModel& model, int depth, int nodes);

struct MonteCarloOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::uint64_t chunk_size = 1u << 16;
};

/// Mean of exp_tensor(log g_i) over Haar draws; bitwise independent of the
/// thread count for fixed seed and chunk size.
AverageSignatureResult average_monte_carlo(const LieGroupModel& model, int depth, const MonteCarloOptions& opts);

/// Average of G1 x G2 from the factors' averages:
///   A_N = sum_k k!(N-k)!/N! * (A_k(G1) shuffle A_{N-k}(G2)),
/// with G1 letters first.  Both inputs need depth >= N.
AverageSignatureResult product_average_shuffle(const AverageSignatureResult& a, const AverageSignatureResult& b,
                                               int depth);

/// Recursive product route: factors of a product are averaged with the best
/// deterministic method (closed form for circles, quadrature for su2).
AverageSignatureResult average_product_shuffle(const LieGroupModel& model, int depth, int nodes);

/// (2/pi) * integral_0^pi r^k sin^2 r dr by Gauss-Legendre.
double su2_radial_moment(int k, int nodes);

/// Normalized spherical moment tensor M_k = E[v^{(x)k}] for v uniform on S^2,
/// as a flat level of length 3^k.
Eigen::VectorXd sphere_moment_tensor(int k);

}  // namespace liesig

#endif
