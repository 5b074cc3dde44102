#pragma once

// Visiting-time sets N_lambda(x, V) = { n : T^n(lambda) x in V } and their
// finite-horizon densities #(A ∩ [0, n]) / (n + 1), kept as exact rationals.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ufhc/errors.hpp"
#include "ufhc/sequence_space.hpp"
#include "ufhc/weight_family.hpp"

namespace ufhc {

// Nonnegative rational num/den, den > 0. Not normalized; comparisons and
// equality are by value.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  Rational reduced() const noexcept {
    const auto g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
  }

  friend std::strong_ordering operator<=>(const Rational& l, const Rational& r) noexcept {
    using wide = unsigned __int128;
    return static_cast<wide>(l.num) * r.den <=> static_cast<wide>(r.num) * l.den;
  }
  friend bool operator==(const Rational& l, const Rational& r) noexcept {
    return (l <=> r) == std::strong_ordering::equal;
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

class VisitProfile {
 public:
  VisitProfile() = default;

  VisitProfile(std::vector<Index> times, Index horizon) : times_(std::move(times)), horizon_(horizon) {
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (times_[i - 1] >= times_[i]) throw DomainError("visit times must be strictly increasing");
    }
    if (!times_.empty() && times_.back() > horizon_) {
      throw DomainError("visit time beyond the profile horizon");
    }
  }

  const std::vector<Index>& times() const noexcept { return times_; }
  Index horizon() const noexcept { return horizon_; }

  // #(times ∩ [0, n])
  std::uint64_t count_through(Index n) const {
    return static_cast<std::uint64_t>(std::upper_bound(times_.begin(), times_.end(), n) - times_.begin());
  }

  friend bool operator==(const VisitProfile&, const VisitProfile&) = default;

 private:
  std::vector<Index> times_;
  Index horizon_ = 0;
};

struct DensityReport {
  Rational best_density;
  Index achieved_at = 0;
  Rational threshold;
  bool passed = false;
};

// Exhaustive scan of n = 0..horizon. Once n exceeds the largest index of x the
// orbit is identically zero, so the remaining verdict is a single test.
inline VisitProfile visiting_times(const WeightFamily& fam, double lambda, const SparseVector& x,
                                   const OpenBall& V, Index horizon) {
  std::vector<Index> times;
  const Index dead_after = x.max_index() ? *x.max_index() + 1 : 0;
  const Index live_end = std::min(horizon, dead_after == 0 ? 0 : dead_after - 1);
  Index n = 0;
  if (dead_after > 0) {
    for (; n <= live_end; ++n) {
      if (in_ball(shift_power_apply(fam, lambda, n, x), V)) times.push_back(n);
    }
  }
  if (n <= horizon && in_ball(SparseVector{}, V)) {
    for (; n <= horizon; ++n) times.push_back(n);
  }
  return VisitProfile(std::move(times), horizon);
}

// Evaluates the orbit only at the strictly increasing `schedule`; the profile
// undercounts the full visiting-time set on [0, horizon].
inline VisitProfile visiting_times(const WeightFamily& fam, double lambda, const SparseVector& x,
                                   const OpenBall& V, const std::vector<Index>& schedule, Index horizon) {
  std::vector<Index> times;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i - 1] >= schedule[i]) throw DomainError("schedule must be strictly increasing");
    if (schedule[i] > horizon) throw DomainError("scheduled time beyond the profile horizon");
    if (in_ball(shift_power_apply(fam, lambda, schedule[i], x), V)) times.push_back(schedule[i]);
  }
  return VisitProfile(std::move(times), horizon);
}

inline Rational finite_density(const VisitProfile& profile, Index n) {
  if (n > profile.horizon()) throw DomainError("density requested beyond the profile horizon");
  return Rational{profile.count_through(n), n + 1};
}

// max_{M <= n <= horizon} #(times ∩ [0, n]) / (n + 1) with the smallest
// maximizer. Between visits the count is flat while n + 1 grows, so only M and
// the visit times at or after M can attain the maximum.
inline DensityReport best_density_from(const VisitProfile& profile, Index M, Rational threshold = {0, 1}) {
  if (M > profile.horizon()) throw DomainError("density start M beyond the profile horizon");
  DensityReport report;
  report.threshold = threshold;
  report.achieved_at = M;
  report.best_density = finite_density(profile, M);
  const auto& times = profile.times();
  auto it = std::upper_bound(times.begin(), times.end(), M);
  std::uint64_t count = report.best_density.num;
  for (; it != times.end(); ++it) {
    ++count;
    const Rational candidate{count, *it + 1};
    if (candidate > report.best_density) {
      report.best_density = candidate;
      report.achieved_at = *it;
    }
  }
  report.passed = report.best_density > threshold;
  return report;
}

}  // namespace ufhc
