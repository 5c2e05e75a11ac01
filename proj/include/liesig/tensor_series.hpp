#ifndef LIESIG_TENSOR_SERIES_HPP
#define LIESIG_TENSOR_SERIES_HPP

// Truncated tensor series over R^n: the graded sequence of tensors
// x = (x^0, x^1, ..., x^N) with x^k in (R^n)^{(x)k}.  Every level is a dense
// Eigen vector of length n^k in row-major multi-index order, i.e. the word
// (i_1, ..., i_k) sits at offset sum_j i_j * n^(k-j).  Letters are 0-based.
//
// Products drop every level above the common depth N.

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "liesig/errors.hpp"

namespace liesig {

using Word = std::vector<int>;

inline std::atomic<std::size_t>& coefficient_budget_storage() {
  static std::atomic<std::size_t> budget{100'000'000};
  return budget;
}

/// Largest number of coefficients a single series may hold.
inline std::size_t coefficient_budget() { return coefficient_budget_storage().load(); }
inline void set_coefficient_budget(std::size_t budget) { coefficient_budget_storage().store(budget); }

/// n^k, saturating at SIZE_MAX.
inline std::size_t saturating_pow(std::size_t n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (n != 0 && r > std::numeric_limits<std::size_t>::max() / n) return std::numeric_limits<std::size_t>::max();
    r *= n;
  }
  return r;
}

/// sum_{k=0}^{N} n^k, saturating.
inline std::size_t series_coefficient_count(int n, int depth) {
  std::size_t total = 0;
  for (int k = 0; k <= depth; ++k) {
    std::size_t lvl = saturating_pow(static_cast<std::size_t>(n), k);
    if (lvl > std::numeric_limits<std::size_t>::max() - total) return std::numeric_limits<std::size_t>::max();
    total += lvl;
  }
  return total;
}

template <typename Scalar>
class TensorSeries {
 public:
  using Level = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TensorSeries(int dim, int depth) : dim_(dim), depth_(depth) {
    if (dim < 1) throw ShapeError("tensor series dimension must be >= 1");
    if (depth < 0) throw ShapeError("tensor series depth must be >= 0");
    const std::size_t total = series_coefficient_count(dim, depth);
    if (total > coefficient_budget())
      throw BudgetExceeded("tensor series with n=" + std::to_string(dim) + ", N=" + std::to_string(depth) + " needs " +
                           std::to_string(total) + " coefficients, budget is " + std::to_string(coefficient_budget()));
    levels_.reserve(depth + 1);
    for (int k = 0; k <= depth; ++k) levels_.push_back(Level::Zero(static_cast<Eigen::Index>(saturating_pow(dim, k))));
  }

  int dim() const { return dim_; }
  int depth() const { return depth_; }

  const Level& level(int k) const { return levels_.at(k); }
  Level& level(int k) { return levels_.at(k); }

  std::size_t coefficient_count() const { return series_coefficient_count(dim_, depth_); }

  /// Offset of a word inside its level.
  Eigen::Index offset(std::span<const int> word) const {
    if (static_cast<int>(word.size()) > depth_) throw ShapeError("word longer than series depth");
    Eigen::Index idx = 0;
    for (int letter : word) {
      if (letter < 0 || letter >= dim_) throw ShapeError("word letter out of range");
      idx = idx * dim_ + letter;
    }
    return idx;
  }

  Scalar& operator[](std::span<const int> word) { return levels_[word.size()](offset(word)); }
  Scalar operator[](std::span<const int> word) const { return levels_[word.size()](offset(word)); }

  bool all_finite() const {
    for (const auto& l : levels_)
      if (!l.allFinite()) return false;
    return true;
  }

  TensorSeries& operator+=(const TensorSeries& o) {
    check_compatible(o);
    for (int k = 0; k <= depth_; ++k) levels_[k] += o.levels_[k];
    return *this;
  }
  TensorSeries& operator-=(const TensorSeries& o) {
    check_compatible(o);
    for (int k = 0; k <= depth_; ++k) levels_[k] -= o.levels_[k];
    return *this;
  }
  TensorSeries& operator*=(Scalar s) {
    for (auto& l : levels_) l *= s;
    return *this;
  }

  void check_compatible(const TensorSeries& o) const {
    if (o.dim_ != dim_ || o.depth_ != depth_)
      throw ShapeError("tensor series shape mismatch: (n=" + std::to_string(dim_) + ", N=" + std::to_string(depth_) +
                       ") vs (n=" + std::to_string(o.dim_) + ", N=" + std::to_string(o.depth_) + ")");
  }

 private:
  int dim_;
  int depth_;
  std::vector<Level> levels_;
};

using TensorSeriesd = TensorSeries<double>;

template <typename Scalar>
TensorSeries<Scalar> operator+(TensorSeries<Scalar> a, const TensorSeries<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
TensorSeries<Scalar> operator-(TensorSeries<Scalar> a, const TensorSeries<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
TensorSeries<Scalar> operator*(Scalar s, TensorSeries<Scalar> a) {
  return a *= s;
}

/// The grouplike identity: 1 at level 0, zero elsewhere.
template <typename Scalar = double>
TensorSeries<Scalar> unit_series(int n, int depth) {
  if (n < 1) throw ShapeError("unit_series: dimension must be >= 1");
  TensorSeries<Scalar> x(n, depth);
  x.level(0)(0) = Scalar(1);
  return x;
}

/// The series with a single 1 at the given word.
template <typename Scalar = double>
TensorSeries<Scalar> basis_series(const Word& word, int n, int depth) {
  TensorSeries<Scalar> x(n, depth);
  x[word] = Scalar(1);
  return x;
}

/// Chen product: level k of the result is sum_{i+j=k} a^i (x) b^j.
template <typename Scalar>
TensorSeries<Scalar> concat_product(const TensorSeries<Scalar>& a, const TensorSeries<Scalar>& b) {
  a.check_compatible(b);
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  TensorSeries<Scalar> out(a.dim(), a.depth());
  for (int k = 0; k <= a.depth(); ++k) {
    auto& dst = out.level(k);
    for (int i = 0; i <= k; ++i) {
      const auto& ai = a.level(i);
      const auto& bj = b.level(k - i);
      // word (u, w) with |u| = i lives at off(u) * n^j + off(w): column-major
      // (n^j x n^i) view of the destination is b^j * (a^i)^T.
      Eigen::Map<Mat> view(dst.data(), bj.size(), ai.size());
      view.noalias() += bj * ai.transpose();
    }
  }
  return out;
}

namespace detail {

// Output offset of each listed word (given by its offset within its own
// level) once its letters are written into the given output slots.
inline void place_words(int n, const std::vector<Eigen::Index>& words, const std::vector<int>& slots,
                        const std::vector<std::size_t>& weight, std::vector<std::size_t>& out) {
  const int len = static_cast<int>(slots.size());
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::size_t rem = static_cast<std::size_t>(words[w]), off = 0;
    for (int p = len - 1; p >= 0; --p) {
      off += (rem % n) * weight[slots[p]];
      rem /= n;
    }
    out[w] = off;
  }
}

}  // namespace detail

/// Shuffle product, the bilinear extension of the word shuffle: each pair of
/// words contributes every interleaving that preserves both letter orders.
template <typename Scalar>
TensorSeries<Scalar> shuffle_product(const TensorSeries<Scalar>& a, const TensorSeries<Scalar>& b) {
  a.check_compatible(b);
  const int n = a.dim();
  TensorSeries<Scalar> out(n, a.depth());
  auto nonzeros = [](const auto& lvl) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < lvl.size(); ++i)
      if (lvl(i) != Scalar(0)) idx.push_back(i);
    return idx;
  };
  std::vector<std::vector<Eigen::Index>> nz_a, nz_b;
  for (int k = 0; k <= a.depth(); ++k) {
    nz_a.push_back(nonzeros(a.level(k)));
    nz_b.push_back(nonzeros(b.level(k)));
  }
  for (int total = 0; total <= a.depth(); ++total) {
    auto& dst = out.level(total);
    std::vector<std::size_t> weight(total);
    for (int p = 0; p < total; ++p) weight[p] = saturating_pow(n, total - 1 - p);
    for (int i = 0; i <= total; ++i) {
      const int j = total - i;
      if (nz_a[i].empty() || nz_b[j].empty()) continue;
      const auto& ai = a.level(i);
      const auto& bj = b.level(j);
      std::vector<std::size_t> offs_a(nz_a[i].size()), offs_b(nz_b[j].size());
      std::vector<int> slots_a, slots_b;
      // enumerate the i-subsets of {0..total-1} holding the letters of a
      std::vector<bool> mask(total, false);
      std::fill(mask.begin(), mask.begin() + i, true);
      do {
        slots_a.clear();
        slots_b.clear();
        for (int p = 0; p < total; ++p) (mask[p] ? slots_a : slots_b).push_back(p);
        detail::place_words(n, nz_a[i], slots_a, weight, offs_a);
        detail::place_words(n, nz_b[j], slots_b, weight, offs_b);
        for (std::size_t x = 0; x < offs_a.size(); ++x) {
          const Scalar av = ai(nz_a[i][x]);
          for (std::size_t y = 0; y < offs_b.size(); ++y)
            dst(static_cast<Eigen::Index>(offs_a[x] + offs_b[y])) += av * bj(nz_b[j][y]);
        }
      } while (std::prev_permutation(mask.begin(), mask.end()));
    }
  }
  return out;
}

/// Tensorial exponential: level k is v^{(x)k} / k!.
template <typename Scalar, typename Derived>
TensorSeries<Scalar> exp_tensor_as(const Eigen::MatrixBase<Derived>& v, int depth) {
  if (!v.allFinite()) throw NumericalFailure("exp_tensor: non-finite input vector");
  const auto n = static_cast<int>(v.size());
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  TensorSeries<Scalar> x(n, depth);
  x.level(0)(0) = Scalar(1);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vs = v.template cast<Scalar>();
  for (int k = 1; k <= depth; ++k) {
    const auto& prev = x.level(k - 1);
    Eigen::Map<Mat> view(x.level(k).data(), n, prev.size());
    view.noalias() = vs * prev.transpose() / Scalar(k);
  }
  return x;
}

template <typename Derived>
TensorSeries<typename Derived::Scalar> exp_tensor(const Eigen::MatrixBase<Derived>& v, int depth) {
  return exp_tensor_as<typename Derived::Scalar>(v, depth);
}

/// Overwrites `out` with exp_tensor(v, out.depth()) without reallocating.
template <typename Scalar, typename Derived>
void exp_tensor_into(const Eigen::MatrixBase<Derived>& v, TensorSeries<Scalar>& out) {
  if (v.size() != out.dim()) throw ShapeError("exp_tensor_into: vector length differs from series dimension");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  out.level(0)(0) = Scalar(1);
  for (int k = 1; k <= out.depth(); ++k) {
    const auto& prev = out.level(k - 1);
    Eigen::Map<Mat> view(out.level(k).data(), out.dim(), prev.size());
    view.noalias() = v.template cast<Scalar>() * prev.transpose() / Scalar(k);
  }
}

/// Coefficient of the word in x.
template <typename Scalar>
Scalar pair(const Word& word, const TensorSeries<Scalar>& x) {
  return x[word];
}

/// Inner product in the orthonormal word basis.
template <typename Scalar>
Scalar inner_product(const TensorSeries<Scalar>& a, const TensorSeries<Scalar>& b) {
  a.check_compatible(b);
  Scalar s(0);
  for (int k = 0; k <= a.depth(); ++k) s += a.level(k).dot(b.level(k));
  return s;
}

template <typename Scalar>
Scalar hilbert_norm(const TensorSeries<Scalar>& x) {
  Scalar s(0);
  for (int k = 0; k <= x.depth(); ++k) s += x.level(k).squaredNorm();
  return std::sqrt(s);
}

template <typename Scalar>
Scalar hilbert_distance(const TensorSeries<Scalar>& a, const TensorSeries<Scalar>& b) {
  return hilbert_norm(a - b);
}

/// Contracted positions (0,1), (2,3), ... of an even level: the offsets of
/// all words of the form (j1 j1 j2 j2 ... jm jm).
inline std::vector<std::size_t> diagonal_pair_offsets(int n, int k) {
  std::vector<std::size_t> offs{0};
  for (int p = 0; p < k / 2; ++p) {
    const std::size_t weight = saturating_pow(n, k - 2 - 2 * p) * static_cast<std::size_t>(n + 1);
    std::vector<std::size_t> next;
    next.reserve(offs.size() * n);
    for (std::size_t base : offs)
      for (int l = 0; l < n; ++l) next.push_back(base + l * weight);
    offs.swap(next);
  }
  return offs;
}

/// Trace of level k under the canonical pairing of adjacent slots.
/// Odd levels have trace 0; level 0 returns its coefficient.
template <typename Scalar>
Scalar trace_level(const TensorSeries<Scalar>& x, int k) {
  if (k < 0 || k > x.depth()) throw ShapeError("trace_level: level " + std::to_string(k) + " outside depth");
  if (k % 2 == 1) return Scalar(0);
  const auto& lvl = x.level(k);
  Scalar s(0);
  for (std::size_t off : diagonal_pair_offsets(x.dim(), k)) s += lvl(static_cast<Eigen::Index>(off));
  return s;
}

/// Re-expresses x over R^total, sending letter i to i + offset.
template <typename Scalar>
TensorSeries<Scalar> embed(const TensorSeries<Scalar>& x, int total_dim, int offset) {
  if (offset < 0 || offset + x.dim() > total_dim) throw ShapeError("embed: target dimension too small");
  TensorSeries<Scalar> out(total_dim, x.depth());
  for (int k = 0; k <= x.depth(); ++k) {
    const auto& src = x.level(k);
    auto& dst = out.level(k);
    for (Eigen::Index idx = 0; idx < src.size(); ++idx) {
      if (src(idx) == Scalar(0)) continue;
      std::size_t rem = static_cast<std::size_t>(idx), target = 0, weight = 1;
      for (int p = 0; p < k; ++p) {
        target += (rem % x.dim() + offset) * weight;
        rem /= x.dim();
        weight *= total_dim;
      }
      dst(static_cast<Eigen::Index>(target)) = src(idx);
    }
  }
  return out;
}

/// Same coefficients at a different depth (extra levels zero, missing levels dropped).
template <typename Scalar>
TensorSeries<Scalar> with_depth(const TensorSeries<Scalar>& x, int depth) {
  TensorSeries<Scalar> out(x.dim(), depth);
  for (int k = 0; k <= std::min(depth, x.depth()); ++k) out.level(k) = x.level(k);
  return out;
}

}  // namespace liesig

#endif
