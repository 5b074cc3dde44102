#pragma once

// Applicability checks for the common upper-frequent-hypercyclicity criterion
// on weighted backward shifts over l^p. Each condition produces a Verdict with
// a closed-form witness; convergence and divergence are always decided by a
// closed-form test on the sequence descriptors, never by extrapolating partial
// sums. Numerical partial sums are attached as corroboration only.

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ufhc/errors.hpp"
#include "ufhc/weight_family.hpp"

namespace ufhc {

enum class Status { kHolds, kFails, kInconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kHolds:
      return "holds";
    case Status::kFails:
      return "fails";
    case Status::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

struct Verdict {
  std::string condition;
  Status status = Status::kInconclusive;
  std::string witness;
  std::map<std::string, double> values;

  bool holds() const noexcept { return status == Status::kHolds; }
};

// Condition identifiers.
namespace condition {
inline constexpr const char* kMonotoneWeights = "monotone_weights";
inline constexpr const char* kInverseProductsSummable = "inverse_products_summable";
inline constexpr const char* kLogLipschitz = "log_lipschitz";
inline constexpr const char* kLipschitzBlockDivergence = "lipschitz_block_divergence";
inline constexpr const char* kLipschitzSummable = "lipschitz_summable";
inline constexpr const char* kABoundedPositive = "a_bounded_positive";
inline constexpr const char* kBSummable = "b_summable";
inline constexpr const char* kAProductsSummable = "a_products_summable";
}  // namespace condition

// The planner refused a configuration because the criterion does not apply.
class NotApplicable : public Error {
 public:
  NotApplicable(std::string what, std::vector<Verdict> verdicts)
      : Error(std::move(what)), verdicts_(std::move(verdicts)) {}

  const std::vector<Verdict>& verdicts() const noexcept { return verdicts_; }

 private:
  std::vector<Verdict> verdicts_;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Convergence of sum_n (a_1 ... a_n)^(-p) for a positive descriptor.
inline Verdict a_products_verdict(const SequenceDescriptor& a, double p) {
  using K = SequenceDescriptor::Kind;
  Verdict v{condition::kAProductsSummable, Status::kInconclusive, "", {}};
  double base = a.scale();
  int growth = 0;  // -1 products decay, 0 geometric in base, +1 superexponential
  if (a.kind() == K::kGeometric && a.ratio() != 1.0) growth = a.ratio() > 1.0 ? 1 : -1;
  if (a.kind() == K::kPower && a.exponent() != 0.0) growth = a.exponent() > 0.0 ? 1 : -1;
  if (growth > 0) {
    v.status = Status::kHolds;
    v.witness = "log(a_1...a_n) grows superlinearly in n (a_n = " + a.formula() +
                "), so the terms decay faster than any geometric sequence";
  } else if (growth < 0) {
    v.status = Status::kFails;
    v.witness = "a_n = " + a.formula() + " tends to 0, the products vanish and the terms blow up";
  } else if (base > 1.0) {
    const double q = std::pow(base, -p);
    v.status = Status::kHolds;
    v.witness = "geometric series with ratio a^-p = " + fmt(q) + ", sum = q/(1-q)";
    v.values["ratio"] = q;
    v.values["sum"] = q / (1.0 - q);
  } else {
    v.status = Status::kFails;
    v.witness = "constant a = " + fmt(base) + " <= 1 keeps every term >= 1";
    v.values["ratio"] = std::pow(base, -p);
  }
  return v;
}

inline double corroborating_partial_sum(const WeightFamily& fam, double a, double p, Index terms) {
  double log_prod = 0.0;
  double sum = 0.0;
  for (Index nu = 1; nu <= terms; ++nu) {
    log_prod += log_weight(fam, nu, a);
    sum += std::exp(-p * log_prod);
  }
  return sum;
}

inline Verdict monotone_verdict(const WeightFamily& fam, const CompactInterval& K, Index n_probe) {
  Verdict v{condition::kMonotoneWeights, Status::kHolds, "", {}};
  const auto tail = fam.asymptotic();
  if (std::holds_alternative<RatioPower>(tail)) {
    v.witness = "d/dlambda log w_n = log((n+1)/n) > 0";
  } else if (std::holds_alternative<ConstantMultiple>(tail)) {
    v.witness = "d/dlambda log w_n = 1/lambda > 0 on (0, inf)";
  } else {
    v.witness = "d/dlambda log w_n = b_n = " + std::get<ExpFamily>(tail).b.formula() + " >= 0";
  }
  if (fam.is_tabulated()) v.witness += "; tabulated head has b >= 0";

  // Grid cross-check of the symbolic certificate.
  constexpr int kGrid = 9;
  const Index probe = std::max<Index>(1, n_probe);
  for (Index n = 1; n <= probe; ++n) {
    double prev = weight_at(fam, n, K.a);
    for (int g = 1; g < kGrid && !K.degenerate(); ++g) {
      const double lambda = K.a + (K.b - K.a) * g / (kGrid - 1);
      const double cur = weight_at(fam, n, lambda);
      if (cur < prev) {
        v.status = Status::kFails;
        v.witness = "grid probe found w_n decreasing at n = " + std::to_string(n);
        v.values["violating_n"] = static_cast<double>(n);
        return v;
      }
      prev = cur;
    }
  }
  v.values["probed_n"] = static_cast<double>(probe);
  return v;
}

inline Verdict inverse_products_verdict(const WeightFamily& fam, const CompactInterval& K, double p,
                                        Index n_probe) {
  Verdict v{condition::kInverseProductsSummable, Status::kInconclusive, "", {}};
  const double a = K.a;
  v.values["lambda"] = a;
  const auto tail = fam.asymptotic();
  if (std::holds_alternative<RatioPower>(tail)) {
    const double alpha = a * p;
    v.values["exponent"] = alpha;
    v.status = alpha > 1.0 ? Status::kHolds : Status::kFails;
    v.witness = "w_1...w_nu = (nu+1)^lambda, series sum (nu+1)^-(lambda p) with lambda p = " + fmt(alpha) +
                (alpha > 1.0 ? " > 1 converges" : " <= 1 diverges");
  } else if (std::holds_alternative<ConstantMultiple>(tail)) {
    const double q = std::pow(a, -p);
    v.values["ratio"] = q;
    v.status = a > 1.0 ? Status::kHolds : Status::kFails;
    v.witness = "geometric series with ratio lambda^-p = " + fmt(q) + (a > 1.0 ? " < 1" : " >= 1");
  } else {
    const auto& e = std::get<ExpFamily>(tail);
    if (e.b.summable()) {
      // exp(lambda sum b_i) stays between two positive constants.
      const Verdict av = a_products_verdict(e.a, p);
      v.status = av.status;
      v.witness = "sum b_n converges, so convergence is that of sum (a_1...a_nu)^-p: " + av.witness;
    } else {
      const double a_lim = e.a.limit();
      const double b_lim = e.b.limit();
      const double log_w = std::log(a_lim) + (a == 0.0 ? 0.0 : a * b_lim);
      v.values["log_limit_weight"] = log_w;
      if (log_w > 0.0) {
        v.status = Status::kHolds;
        v.witness = "w_n(lambda) tends to a limit > 1: ratio test";
      } else if (log_w < 0.0) {
        v.status = Status::kFails;
        v.witness = "w_n(lambda) tends to a limit < 1: terms do not vanish";
      } else {
        v.witness = "limit weight equals 1 (or is indeterminate); no closed-form test";
      }
    }
  }
  if (fam.is_tabulated()) v.witness += "; finite tabulated head does not affect convergence";
  if (v.status == Status::kHolds) {
    try {
      v.values["certified_norm_bound"] = inverse_tail_bound(fam, a, 0, 1, p);
    } catch (const NonSummable&) {
      v.witness += " (no certified majorant at n = 1; the planner will reject this K)";
    }
  }
  v.values["partial_sum_probe"] = corroborating_partial_sum(fam, a, p, n_probe);
  v.values["probe_terms"] = static_cast<double>(n_probe);
  return v;
}

inline Verdict log_lipschitz_verdict(const WeightFamily& fam, const CompactInterval& K) {
  Verdict v{condition::kLogLipschitz, Status::kHolds, "", {}};
  const auto tail = fam.asymptotic();
  if (std::holds_alternative<RatioPower>(tail)) {
    v.witness = "L_n(K) = log((n+1)/n), independent of K";
  } else if (std::holds_alternative<ConstantMultiple>(tail)) {
    v.witness = "L_n(K) = 1/a = " + fmt(1.0 / K.a) + " (mean value theorem for log on K)";
  } else {
    v.witness = "L_n(K) = b_n = " + std::get<ExpFamily>(tail).b.formula() + " (log w_n affine in lambda)";
  }
  if (fam.is_tabulated()) v.witness += "; head entries use their own b";
  v.values["L_1"] = lipschitz_constant(fam, K, 1);
  return v;
}

// Closed-form verdict for divergence of sum_t (sum_{i<=s^t} L_i)^-1 for every
// s >= 2, with per-s evidence.
inline Verdict block_divergence_verdict(const WeightFamily& fam, const CompactInterval& K,
                                        const std::vector<Index>& s_list) {
  using SK = SequenceDescriptor::Kind;
  Verdict v{condition::kLipschitzBlockDivergence, Status::kInconclusive, "", {}};
  const auto tail = fam.asymptotic();
  const double head_b = [&] {
    double s = 0.0;
    if (const auto* t = std::get_if<Tabulated>(&fam.kind())) {
      for (const auto& h : t->head) s += h.b;
    }
    return s;
  }();

  // Per-s closed-form evidence: either a lower bound on the t-th term
  // (divergent cases) or the value of a convergent majorant.
  auto per_s = [&](auto&& fn) {
    for (Index s : s_list) {
      if (s < 2) throw DomainError("block divergence base s must be >= 2");
      fn(static_cast<double>(s));
    }
  };

  if (std::holds_alternative<RatioPower>(tail)) {
    v.status = Status::kHolds;
    v.witness =
        "sum_{i<=s^t} L_i = log(s^t + 1) <= t log s + log 2, so the terms dominate a harmonic series";
    per_s([&](double s) { v.values["term_lower_bound_coefficient_s" + fmt(s)] = 1.0 / std::log(s); });
  } else if (std::holds_alternative<ConstantMultiple>(tail)) {
    v.status = Status::kFails;
    v.witness = "sum_{i<=s^t} L_i = s^t / a, so sum_t a s^-t = a/(s-1) converges";
    per_s([&](double s) { v.values["series_sum_s" + fmt(s)] = K.a / (s - 1.0); });
  } else {
    const auto& b = std::get<ExpFamily>(tail).b;
    const double bsum = b.series_sum();
    if (!std::isnan(bsum)) {
      v.status = Status::kHolds;
      if (bsum + head_b == 0.0) {
        v.witness = "b_n = 0: log w_n is constant in lambda and any positive summable L_n is admissible";
      } else {
        v.witness = "sum_i L_i <= " + fmt(bsum + head_b) + " < inf, so every term is >= its reciprocal";
        v.values["lipschitz_total"] = bsum + head_b;
      }
    } else if (b.kind() == SK::kPower && b.exponent() == -1.0) {
      v.status = Status::kHolds;
      v.witness = "L_i = c/i, sum_{i<=s^t} L_i <= c (t log s + 1): harmonic comparison";
      per_s([&](double s) { v.values["term_lower_bound_coefficient_s" + fmt(s)] = 1.0 / (b.scale() * std::log(s)); });
    } else {
      // Constant, geometric with ratio >= 1, or power with exponent > -1:
      // the partial sums grow at least like s^(t*kappa) with kappa > 0.
      v.status = Status::kFails;
      double kappa = 1.0;
      if (b.kind() == SK::kPower) kappa = b.exponent() + 1.0;
      v.witness = "sum_{i<=s^t} L_i grows at least like s^(" + fmt(kappa) +
                  " t), so the reciprocal series is dominated by a convergent geometric series";
      per_s([&](double s) { v.values["geometric_ratio_s" + fmt(s)] = std::pow(s, -kappa); });
    }
  }
  if (fam.is_tabulated()) v.witness += "; tabulated head adds the finite constant " + fmt(head_b);
  return v;
}

}  // namespace detail

struct CriterionOptions {
  std::vector<Index> s_list{2, 3, 10};
  Index n_probe = 1000;
};

// The four hypotheses of the weighted-shift criterion on K for l^p:
// monotone weights, summable inverse products at lambda = a, log-Lipschitz
// weights, and divergence of sum_t (sum_{i<=s^t} L_i(K))^-1.
inline std::vector<Verdict> check_shift_criterion(const WeightFamily& fam, const CompactInterval& K, double p,
                                                  const CriterionOptions& opts = {}) {
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  require_interval_defined(fam, K);
  std::vector<Verdict> out;
  out.push_back(detail::monotone_verdict(fam, K, opts.n_probe));
  out.push_back(detail::inverse_products_verdict(fam, K, p, opts.n_probe));
  out.push_back(detail::log_lipschitz_verdict(fam, K));
  out.push_back(detail::block_divergence_verdict(fam, K, opts.s_list));
  return out;
}

// Summability of the Lipschitz constants, the stronger sufficient condition.
inline Verdict check_summable_lipschitz(const WeightFamily& fam, const CompactInterval& K, double p) {
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  require_interval_defined(fam, K);
  Verdict v{condition::kLipschitzSummable, Status::kInconclusive, "", {}};
  const auto tail = fam.asymptotic();
  if (std::holds_alternative<RatioPower>(tail)) {
    v.status = Status::kFails;
    v.witness = "sum_{n<=m} log((n+1)/n) = log(m+1) -> inf (telescoping)";
    v.values["partial_sum_1e5"] = std::log1p(1e5);
  } else if (std::holds_alternative<ConstantMultiple>(tail)) {
    v.status = Status::kFails;
    v.witness = "L_n = 1/a is constant, sum diverges";
  } else {
    const auto& b = std::get<ExpFamily>(tail).b;
    const double s = b.series_sum();
    if (std::isnan(s)) {
      v.status = Status::kFails;
      v.witness = "sum b_n diverges for b_n = " + b.formula();
    } else {
      v.status = Status::kHolds;
      v.witness = "sum b_n = " + detail::fmt(s) + " for b_n = " + b.formula();
      v.values["sum"] = s;
    }
  }
  if (fam.is_tabulated()) v.witness += "; finite tabulated head does not affect convergence";
  return v;
}

// Conditions on an exponential family w_n = a_n exp(lambda b_n): a bounded and
// positive, sum b_n < inf, sum (a_1...a_n)^-p < inf.
inline std::vector<Verdict> check_exp_family_conditions(const WeightFamily& fam, double p) {
  using SK = SequenceDescriptor::Kind;
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  const auto* e = std::get_if<ExpFamily>(&fam.kind());
  if (!e) throw DomainError("exponential-family conditions require an exp_family descriptor");
  std::vector<Verdict> out;

  Verdict bounded{condition::kABoundedPositive, Status::kHolds, "", {}};
  const double a_sup = e->a.sup_from(1);
  if (std::isinf(a_sup)) {
    bounded.status = Status::kFails;
    bounded.witness = "a_n = " + e->a.formula() + " is unbounded";
  } else {
    bounded.witness = "0 < a_n <= " + detail::fmt(a_sup) + " for a_n = " + e->a.formula();
    bounded.values["sup"] = a_sup;
    if (e->a.kind() != SK::kConstant) bounded.values["inf"] = e->a.inf_from(1);
  }
  out.push_back(bounded);

  Verdict bsum{condition::kBSummable, Status::kHolds, "", {}};
  const double s = e->b.series_sum();
  if (std::isnan(s)) {
    bsum.status = Status::kFails;
    bsum.witness = "sum b_n diverges for b_n = " + e->b.formula();
  } else {
    bsum.witness = "sum b_n = " + detail::fmt(s);
    bsum.values["sum"] = s;
  }
  out.push_back(bsum);

  out.push_back(detail::a_products_verdict(e->a, p));
  return out;
}

}  // namespace ufhc
