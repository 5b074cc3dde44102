#pragma once

// Constructive block assembly of a common vector z for a weighted-shift family
// on a compact parameter interval K = [a, b]:
//
//   z = x + sum_{t=1}^{tau} sum_{l=0}^{l_t} S_{l_t + l s0}(lambda_t) y
//
// with l_t = c^t, c = max(N0, 2 + s0, M), and a subdivision a = lambda_0 <
// ... < lambda_tau = b whose steps are bounded by d_{c^{t+1}}. Every
// inequality the construction needs is certified through the analytic tail
// majorants of weight_family.hpp.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ufhc/criterion.hpp"
#include "ufhc/density.hpp"
#include "ufhc/errors.hpp"
#include "ufhc/sequence_space.hpp"
#include "ufhc/weight_family.hpp"

namespace ufhc {

struct BudgetSummary {
  Index tau = 0;
  Index l_tau = 0;
  // sum_t (l_t + 1): visits scheduled per sweep over all blocks
  Index scheduled_checks = 0;
  // support of z: |supp x| + |supp y| * scheduled_checks
  Index support_size = 0;
  // l_tau (1 + s0)
  Index max_time = 0;
  // scheduled_checks * support_size, an upper bound on coefficient
  // evaluations for one grid parameter per block
  double coefficient_ops = 0.0;
};

struct ConstructionPlan {
  ConstructionPlan(WeightFamily fam, CompactInterval k, double p_, OpenBall u, OpenBall v, Index m)
      : family(std::move(fam)), K(k), p(p_), U(std::move(u)), V(std::move(v)), M(m) {}

  WeightFamily family;
  CompactInterval K;
  double p = 2.0;
  OpenBall U;
  OpenBall V;
  Index M = 1;

  Index J = 0;    // largest support index of the target center y
  Index J_x = 0;  // largest support index of the start center x (0 if x = 0)
  double eta = 0.0;
  Index s0 = 0;
  Index N0 = 0;
  Index c = 0;
  Index tau = 0;
  std::vector<double> lambda_points;  // lambda_0 = a, ..., lambda_tau = b
  std::vector<Index> l_schedule;      // l_1, ..., l_tau
  Rational delta;                     // 1 / (2 + s0)
  BudgetSummary budget;
  std::vector<Verdict> verdicts;

  double d(Index n) const;
  Index block_start(Index t) const { return l_schedule.at(t - 1); }
  double block_parameter(Index t) const { return lambda_points.at(t); }
};

// Largest eta such that |xi| <= eta implies ||xi y_nu e_nu|| <= eps / |supp y|
// for every support index nu of y.
inline double compute_eta(const SparseVector& y, double eps, const SpaceMetric& metric) {
  if (y.is_zero()) throw DomainError("target center y = 0 leaves nothing to approximate");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double target = eps / static_cast<double>(y.support_size());
  if (std::holds_alternative<LpNorm>(metric)) return target / y.max_abs();

  const auto& ladder = std::get<FNormLadder>(metric);
  double eta = std::numeric_limits<double>::infinity();
  for (const auto& e : y.entries()) {
    const auto unit = SparseVector::basis(e.index, std::abs(e.value));
    auto fits = [&](double xi) { return f_norm(unit.scaled(xi), ladder) <= target; };
    // The F-norm of xi*v is nondecreasing in xi; bisect its last admissible value.
    double lo = 0.0, hi = 1.0;
    while (fits(hi) && hi < 0x1p60) {
      lo = hi;
      hi *= 2.0;
    }
    if (fits(hi)) {
      eta = std::min(eta, hi);
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid == lo || mid == hi) break;
      (fits(mid) ? lo : hi) = mid;
    }
    eta = std::min(eta, lo);
  }
  return eta;
}

// d_n = eta / sum_{i=1}^{n+J} L_i(K); +inf when every L_i vanishes.
inline double compute_d(const WeightFamily& fam, const CompactInterval& K, Index J, double eta, Index n) {
  if (n == 0) throw DomainError("d_n is indexed from n = 1");
  const double total = lipschitz_prefix_sum(fam, K, detail::checked_add(n, J));
  if (total == 0.0) return std::numeric_limits<double>::infinity();
  return eta / total;
}

inline double ConstructionPlan::d(Index n) const { return compute_d(family, K, J, eta, n); }

namespace detail {

// Certified bound on || sum_{n in F} S_n(mu_n) y || over all finite F within
// {s, s+1, ...} and all mu_n in K, measured in `metric`.
inline double block_tail_bound(const WeightFamily& fam, const CompactInterval& K, double p,
                               const SparseVector& y, const SpaceMetric& metric, Index s) {
  const double dom = lp_domination_constant(metric, p);
  double total = 0.0;
  for (const auto& e : y.entries()) {
    total += std::abs(e.value) * inverse_tail_bound(fam, K.a, e.index, s, p);
  }
  return dom * total;
}

// Least n >= lo with pred(n), for a predicate that stays true once true.
inline Index least_satisfying(Index lo, Index limit, const std::function<bool(Index)>& pred,
                              const char* what) {
  if (pred(lo)) return lo;
  Index bad = lo;
  Index step = 1;
  Index good = 0;
  while (true) {
    if (bad > limit || step > limit - bad) {
      throw BudgetExceeded(std::string(what) + " search exceeded limit " + std::to_string(limit), 0, 0);
    }
    const Index probe = bad + step;
    if (pred(probe)) {
      good = probe;
      break;
    }
    bad = probe;
    step *= 2;
  }
  while (good - bad > 1) {
    const Index mid = bad + (good - bad) / 2;
    (pred(mid) ? good : bad) = mid;
  }
  return good;
}

inline constexpr Index kDefaultSearchLimit = Index{1} << 40;

}  // namespace detail

// Least s0 >= max(1, J + 1) with the certified block tail of y below eps/4.
// The first clause makes every backward term of earlier approximations vanish
// identically for shifts; the second controls every forward term.
inline Index compute_gap_s0(const WeightFamily& fam, const CompactInterval& K, double p, const SparseVector& y,
                            double eps, const SpaceMetric& metric, Index limit = detail::kDefaultSearchLimit) {
  if (y.is_zero()) throw DomainError("target center y = 0");
  const Index lo = *y.max_index() + 1;
  return detail::least_satisfying(
      lo, limit, [&](Index s) { return detail::block_tail_bound(fam, K, p, y, metric, s) < eps / 4.0; },
      "gap s0");
}

// Least N0 >= max(1, J_x + 1) with the certified block tail of y below r. The
// first clause makes B^n x vanish for every n >= N0.
inline Index compute_start_N0(const WeightFamily& fam, const CompactInterval& K, double p, const SparseVector& x,
                              const SparseVector& y, double r, const SpaceMetric& metric,
                              Index limit = detail::kDefaultSearchLimit) {
  if (y.is_zero()) throw DomainError("target center y = 0");
  const Index lo = x.max_index() ? *x.max_index() + 1 : 1;
  return detail::least_satisfying(
      lo, limit, [&](Index n) { return detail::block_tail_bound(fam, K, p, y, metric, n) < r; }, "start N0");
}

struct PlanOptions {
  Index budget_cap = 1'000'000;
  CriterionOptions criterion;
};

inline constexpr Index kMaxBudgetCap = (Index{1} << 32) - 1;

namespace detail {

inline bool applicable(const std::vector<Verdict>& verdicts, const CompactInterval& K) {
  for (const auto& v : verdicts) {
    // A degenerate interval needs no subdivision, so divergence of the
    // block series is not required there.
    if (v.condition == condition::kLipschitzBlockDivergence && K.degenerate()) continue;
    if (!v.holds()) return false;
  }
  return true;
}

inline Index checked_mul(Index a, Index b) {
  if (a != 0 && b > std::numeric_limits<Index>::max() / a) throw DomainError("schedule overflow");
  return a * b;
}

}  // namespace detail

inline ConstructionPlan plan(const WeightFamily& fam, const CompactInterval& K, double p, const OpenBall& U,
                             const OpenBall& V, Index M, const PlanOptions& opts = {}) {
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  if (M == 0) throw DomainError("M must be positive");
  if (opts.budget_cap == 0 || opts.budget_cap > kMaxBudgetCap) {
    throw DomainError("budget cap must lie in [1, 2^32)");
  }
  if (!(U.metric() == V.metric())) throw DomainError("U and V must use the same metric");
  const auto dom = parameter_domain(fam, p);
  if (!dom.contains(K.a) || !dom.contains(K.b)) {
    throw DomainError("compact interval lies outside the parameter domain of family " + fam.name());
  }
  const SparseVector& x = U.center();
  const SparseVector& y = V.center();
  if (y.is_zero()) throw DomainError("target center y = 0");

  ConstructionPlan pl(fam, K, p, U, V, M);
  pl.verdicts = check_shift_criterion(fam, K, p, opts.criterion);
  if (!detail::applicable(pl.verdicts, K)) {
    throw NotApplicable("criterion hypotheses do not hold on K for family " + fam.name(), pl.verdicts);
  }

  const SpaceMetric& metric = V.metric();
  const Index cap = opts.budget_cap;
  pl.J = *y.max_index();
  pl.J_x = x.max_index().value_or(0);
  pl.eta = compute_eta(y, V.radius() / 4.0, metric);
  try {
    pl.s0 = compute_gap_s0(fam, K, p, y, V.radius(), metric, cap);
    pl.N0 = compute_start_N0(fam, K, p, x, y, U.radius(), metric, cap);
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(std::string(e.what()) + " (budget cap)", 0, 0);
  }
  pl.c = std::max({pl.N0, 2 + pl.s0, M});
  pl.delta = Rational{1, 2 + pl.s0};

  // Subdivision: lambda_t = lambda_{t-1} + d_{c^{t+1}} until b is within one
  // step. Aborts once the scheduled work sum_t (l_t + 1) exceeds the cap.
  pl.lambda_points.push_back(K.a);
  Index l_t = 1;
  Index scheduled = 0;
  for (Index t = 1;; ++t) {
    l_t = detail::checked_mul(l_t, pl.c);
    scheduled += l_t + 1;
    if (l_t > cap || scheduled > cap) {
      throw BudgetExceeded("scheduled visits exceed budget cap " + std::to_string(cap) + " at block " +
                               std::to_string(t) + " (l_t = " + std::to_string(l_t) + ")",
                           t, l_t);
    }
    pl.l_schedule.push_back(l_t);
    const double step = pl.d(detail::checked_mul(l_t, pl.c));
    const double prev = pl.lambda_points.back();
    if (K.b - prev <= step) {
      pl.lambda_points.push_back(K.b);
      pl.tau = t;
      break;
    }
    double next = prev + step;
    while (next - prev > step) next = std::nextafter(next, prev);
    pl.lambda_points.push_back(next);
  }

  const Index l_tau = pl.l_schedule.back();
  pl.budget.tau = pl.tau;
  pl.budget.l_tau = l_tau;
  pl.budget.scheduled_checks = scheduled;
  pl.budget.support_size = x.support_size() + y.support_size() * scheduled;
  pl.budget.max_time = detail::checked_mul(l_tau, 1 + pl.s0);
  pl.budget.coefficient_ops =
      static_cast<double>(pl.budget.scheduled_checks) * static_cast<double>(pl.budget.support_size);

  // The smallest coefficient of z must stay a normal double.
  for (const auto& e : y.entries()) {
    const double lp = log_weight_product(fam, e.index + 1, e.index + pl.budget.max_time, K.b);
    if (std::log(std::abs(e.value)) - lp < std::log(std::numeric_limits<double>::min())) {
      throw BudgetExceeded("block coefficients would underflow double precision", pl.tau, l_tau);
    }
  }
  return pl;
}

inline BudgetSummary budget_estimate(const WeightFamily& fam, const CompactInterval& K, double p,
                                     const OpenBall& U, const OpenBall& V, Index M, const PlanOptions& opts = {}) {
  return plan(fam, K, p, U, V, M, opts).budget;
}

// Assembles z. Block supports are pairwise disjoint and lie beyond supp x, so
// entries are emitted already in increasing index order.
inline SparseVector build(const ConstructionPlan& pl) {
  const SparseVector& x = pl.U.center();
  const SparseVector& y = pl.V.center();
  std::vector<Entry> entries(x.entries().begin(), x.entries().end());
  entries.reserve(pl.budget.support_size);
  for (Index t = 1; t <= pl.tau; ++t) {
    const Index lt = pl.block_start(t);
    const double lambda_t = pl.block_parameter(t);
    for (Index l = 0; l <= lt; ++l) {
      const Index n = lt + l * pl.s0;
      for (const auto& e : y.entries()) {
        const double lp = log_weight_product(pl.family, e.index + 1, e.index + n, lambda_t);
        const double coeff = e.value * std::exp(-lp);
        if (!(std::abs(coeff) >= std::numeric_limits<double>::min()) || !std::isfinite(coeff)) {
          throw BudgetExceeded("block coefficient left the normal double range at index " +
                                   std::to_string(e.index + n),
                               pl.tau, pl.budget.l_tau);
        }
        entries.push_back({e.index + n, coeff});
      }
    }
  }
  auto z = SparseVector::from_sorted(std::move(entries));
  if (!(distance(z, x, pl.U.metric()) < pl.U.radius())) {
    throw std::logic_error("assembled vector left U; tail majorant is not an upper bound");
  }
  return z;
}

}  // namespace ufhc
