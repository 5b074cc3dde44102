#pragma once

// Finitely supported sequences over the canonical basis (e_n) of l^p and the
// metrics used to define open balls around them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ufhc/errors.hpp"

namespace ufhc {

using Index = std::uint64_t;

struct Entry {
  Index index = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Element of span{e_n}. Indices are strictly increasing and no stored
// coefficient is zero.
class SparseVector {
 public:
  SparseVector() = default;

  // Accepts entries in any order; duplicate indices are summed and zero
  // coefficients dropped.
  static SparseVector from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SparseVector out;
    out.entries_.reserve(entries.size());
    for (const auto& e : entries) {
      if (!std::isfinite(e.value)) {
        throw DomainError("non-finite coefficient at index " + std::to_string(e.index));
      }
      if (!out.entries_.empty() && out.entries_.back().index == e.index) {
        out.entries_.back().value += e.value;
      } else {
        out.entries_.push_back(e);
      }
    }
    out.drop_zeros();
    return out;
  }

  // Entries must already be strictly increasing in index. Zeros are dropped.
  static SparseVector from_sorted(std::vector<Entry> entries) {
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i - 1].index >= entries[i].index) {
        throw DomainError("sparse vector indices must be strictly increasing");
      }
    }
    SparseVector out;
    out.entries_ = std::move(entries);
    out.drop_zeros();
    return out;
  }

  static SparseVector basis(Index k, double coefficient = 1.0) {
    return from_sorted({Entry{k, coefficient}});
  }

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  std::optional<Index> max_index() const noexcept {
    if (entries_.empty()) return std::nullopt;
    return entries_.back().index;
  }

  double at(Index k) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, Index i) { return e.index < i; });
    return (it != entries_.end() && it->index == k) ? it->value : 0.0;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
    return m;
  }

  SparseVector scaled(double c) const {
    std::vector<Entry> out(entries_);
    for (auto& e : out) e.value *= c;
    return from_sorted(std::move(out));
  }

  // Same support and every coefficient within `tol` (absolute).
  bool approx_equal(const SparseVector& other, double tol = 1e-12) const noexcept {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].index != other.entries_[i].index) return false;
      if (std::abs(entries_[i].value - other.entries_[i].value) > tol) return false;
    }
    return true;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  void drop_zeros() {
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
  }

  std::vector<Entry> entries_;
};

// x + c*y
inline SparseVector add_scaled(const SparseVector& x, double c, const SparseVector& y) {
  const auto xs = x.entries();
  const auto ys = y.entries();
  std::vector<Entry> out;
  out.reserve(xs.size() + ys.size());
  std::size_t i = 0, j = 0;
  while (i < xs.size() || j < ys.size()) {
    if (j == ys.size() || (i < xs.size() && xs[i].index < ys[j].index)) {
      out.push_back(xs[i++]);
    } else if (i == xs.size() || ys[j].index < xs[i].index) {
      out.push_back({ys[j].index, c * ys[j].value});
      ++j;
    } else {
      out.push_back({xs[i].index, xs[i].value + c * ys[j].value});
      ++i;
      ++j;
    }
  }
  return SparseVector::from_sorted(std::move(out));
}

inline SparseVector operator+(const SparseVector& x, const SparseVector& y) {
  return add_scaled(x, 1.0, y);
}

inline SparseVector operator-(const SparseVector& x, const SparseVector& y) {
  return add_scaled(x, -1.0, y);
}

namespace detail {

// (sum |v_i|^p)^(1/p) over a range of coefficients, scaled by the largest
// magnitude so that neither overflow nor underflow occurs for moderate p.
template <typename Range>
double lp_of(const Range& values, double p) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

struct CoefficientView {
  std::span<const Entry> entries;
  std::optional<Index> window;

  struct iterator {
    const Entry* ptr;
    double operator*() const { return ptr->value; }
    iterator& operator++() {
      ++ptr;
      return *this;
    }
    bool operator!=(const iterator& o) const { return ptr != o.ptr; }
  };

  iterator begin() const { return {entries.data()}; }
  iterator end() const {
    if (!window) return {entries.data() + entries.size()};
    auto it = std::lower_bound(entries.begin(), entries.end(), *window,
                               [](const Entry& e, Index i) { return e.index < i; });
    return {entries.data() + (it - entries.begin())};
  }
};

}  // namespace detail

inline double p_norm(const SparseVector& x, double p) {
  if (!(p >= 1.0)) throw DomainError("l^p norm requires p >= 1");
  return detail::lp_of(detail::CoefficientView{x.entries(), std::nullopt}, p);
}

// p_k(x) = scale * (sum_{i < window} |x_i|^exponent)^(1/exponent); an absent
// window means all coordinates, an infinite exponent means the sup norm.
struct Seminorm {
  double exponent = 2.0;
  std::optional<Index> window;
  double scale = 1.0;

  double operator()(const SparseVector& x) const {
    return scale * detail::lp_of(detail::CoefficientView{x.entries(), window}, exponent);
  }

  friend bool operator==(const Seminorm&, const Seminorm&) = default;
};

struct LpNorm {
  double p = 2.0;
  friend bool operator==(const LpNorm&, const LpNorm&) = default;
};

// ||x|| = sum_{k>=1} 2^-k min(1, p_k(x)); seminorms past the end of the list
// repeat the last one.
struct FNormLadder {
  std::vector<Seminorm> seminorms;
  friend bool operator==(const FNormLadder&, const FNormLadder&) = default;
};

using SpaceMetric = std::variant<LpNorm, FNormLadder>;

inline void validate(const SpaceMetric& metric) {
  if (const auto* lp = std::get_if<LpNorm>(&metric)) {
    if (!(lp->p >= 1.0)) throw DomainError("l^p metric requires p >= 1");
    return;
  }
  const auto& ladder = std::get<FNormLadder>(metric);
  if (ladder.seminorms.empty()) throw DomainError("F-norm ladder needs at least one seminorm");
  // The last seminorm repeats forever, so it alone decides whether the
  // ladder separates points.
  if (ladder.seminorms.back().window) throw DomainError("last seminorm of an F-norm ladder must be unwindowed");
  for (const auto& s : ladder.seminorms) {
    if (!(s.exponent >= 1.0)) throw DomainError("seminorm exponent must be >= 1");
    if (!(s.scale > 0.0) || !std::isfinite(s.scale)) {
      throw DomainError("seminorm scale must be positive and finite");
    }
  }
}

inline double f_norm(const SparseVector& x, const FNormLadder& ladder) {
  if (ladder.seminorms.empty()) throw DomainError("F-norm ladder needs at least one seminorm");
  const auto K = ladder.seminorms.size();
  // Summed from the tail inward: with equal terms every partial sum is an
  // exact power-of-two multiple, so an all-equal ladder returns min(1, p(x))
  // without rounding.
  double acc = std::ldexp(std::min(1.0, ladder.seminorms.back()(x)), -static_cast<int>(K));
  for (std::size_t k = K; k >= 1; --k) {
    acc += std::ldexp(std::min(1.0, ladder.seminorms[k - 1](x)), -static_cast<int>(k));
  }
  return acc;
}

inline double f_norm(const SparseVector& x, const SpaceMetric& metric) {
  const auto* ladder = std::get_if<FNormLadder>(&metric);
  if (!ladder) throw DomainError("f_norm requires an F-norm ladder metric");
  return f_norm(x, *ladder);
}

inline double norm(const SparseVector& x, const SpaceMetric& metric) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LpNorm>) {
          return p_norm(x, m.p);
        } else {
          return f_norm(x, m);
        }
      },
      metric);
}

inline double distance(const SparseVector& x, const SparseVector& y, const SpaceMetric& metric) {
  return norm(x - y, metric);
}

// Smallest C with ||v|| <= C * ||v||_p for every v, where ||.|| is the metric.
// Exists for l^p itself (C = 1) and for ladders whose seminorm exponents are
// all >= p.
inline double lp_domination_constant(const SpaceMetric& metric, double p) {
  if (const auto* lp = std::get_if<LpNorm>(&metric)) {
    if (lp->p != p) throw DomainError("metric exponent differs from the sequence space exponent");
    return 1.0;
  }
  const auto& ladder = std::get<FNormLadder>(metric);
  double c = 0.0;
  const auto K = ladder.seminorms.size();
  for (std::size_t k = 1; k <= K; ++k) {
    const auto& s = ladder.seminorms[k - 1];
    if (s.exponent < p) {
      throw DomainError("F-norm seminorm exponent below p is not dominated by the l^p norm");
    }
    c += std::ldexp(s.scale, -static_cast<int>(k));
  }
  c += std::ldexp(ladder.seminorms.back().scale, -static_cast<int>(K));
  return c;
}

class OpenBall {
 public:
  OpenBall(SparseVector center, double radius, SpaceMetric metric)
      : center_(std::move(center)), radius_(radius), metric_(std::move(metric)) {
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
      throw DomainError("ball radius must be positive and finite");
    }
    validate(metric_);
  }

  const SparseVector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const SpaceMetric& metric() const noexcept { return metric_; }

  friend bool operator==(const OpenBall&, const OpenBall&) = default;

 private:
  SparseVector center_;
  double radius_;
  SpaceMetric metric_;
};

inline bool in_ball(const SparseVector& x, const OpenBall& ball) {
  return distance(x, ball.center(), ball.metric()) < ball.radius();
}

}  // namespace ufhc
