#pragma once

// Parametric weight families lambda -> (w_n(lambda))_{n>=1}, the weighted
// backward shift B_w(lambda) and its forward right inverse F(lambda), and the
// Lipschitz and tail-bound machinery that the planner relies on.
//
// Every weight product is accumulated as a sum of logarithms and exponentiated
// once. Products such as (nu+1)^lambda over millions of factors leave the
// double range long before their ratios do.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ufhc/errors.hpp"
#include "ufhc/sequence_space.hpp"

namespace ufhc {

namespace detail {

inline constexpr Index kDirectSumLength = 4096;

// sum_{i=from}^{to} i^e
inline double power_range_sum(double e, Index from, Index to) {
  if (to < from) return 0.0;
  const Index direct_end = (to - from < kDirectSumLength) ? to : from + kDirectSumLength - 1;
  double s = 0.0;
  for (Index i = from; i <= direct_end; ++i) s += std::pow(static_cast<double>(i), e);
  if (direct_end == to) return s;
  // Euler-Maclaurin on [A, B] with A > 4096; the remainder after the third
  // derivative term is below 1e-20 relative for any moderate exponent.
  const double A = static_cast<double>(direct_end + 1);
  const double B = static_cast<double>(to);
  const double h = B - A;
  double integral;
  if (e == -1.0) {
    integral = std::log1p(h / A);
  } else {
    integral = std::pow(A, e + 1.0) * std::expm1((e + 1.0) * std::log1p(h / A)) / (e + 1.0);
  }
  auto f = [e](double x) { return std::pow(x, e); };
  auto f1 = [e](double x) { return e * std::pow(x, e - 1.0); };
  auto f3 = [e](double x) { return e * (e - 1.0) * (e - 2.0) * std::pow(x, e - 3.0); };
  s += integral + 0.5 * (f(A) + f(B)) + (f1(B) - f1(A)) / 12.0 - (f3(B) - f3(A)) / 720.0;
  return s;
}

// sum_{i=from}^{to} log i
inline double log_range_sum(Index from, Index to) {
  if (to < from) return 0.0;
  const Index direct_end = (to - from < kDirectSumLength) ? to : from + kDirectSumLength - 1;
  double s = 0.0;
  for (Index i = from; i <= direct_end; ++i) s += std::log(static_cast<double>(i));
  if (direct_end == to) return s;
  const double A = static_cast<double>(direct_end + 1);
  const double B = static_cast<double>(to);
  const double h = B - A;
  // (B log B - B) - (A log A - A) without cancellation.
  const double integral = A * std::log1p(h / A) + h * std::log(B) - h;
  s += integral + 0.5 * (std::log(A) + std::log(B)) + (1.0 / B - 1.0 / A) / 12.0 -
       (2.0 / (B * B * B) - 2.0 / (A * A * A)) / 720.0;
  return s;
}

inline Index checked_add(Index a, Index b) {
  if (a > std::numeric_limits<Index>::max() - b) throw DomainError("index overflow");
  return a + b;
}

}  // namespace detail

// Closed-form nonnegative sequence n -> s_n, n >= 1:
//   constant:  s_n = scale
//   geometric: s_n = scale * ratio^n
//   power:     s_n = scale * n^exponent
class SequenceDescriptor {
 public:
  enum class Kind { kConstant, kGeometric, kPower };

  static SequenceDescriptor constant(double value) { return {Kind::kConstant, value, 0.0}; }
  static SequenceDescriptor geometric(double ratio, double scale = 1.0) {
    return {Kind::kGeometric, scale, ratio};
  }
  static SequenceDescriptor power(double exponent, double scale = 1.0) {
    return {Kind::kPower, scale, exponent};
  }

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  double ratio() const noexcept { return param_; }
  double exponent() const noexcept { return param_; }

  double at(Index n) const {
    switch (kind_) {
      case Kind::kConstant:
        return scale_;
      case Kind::kGeometric:
        return scale_ * std::pow(param_, static_cast<double>(n));
      case Kind::kPower:
        return scale_ * std::pow(static_cast<double>(n), param_);
    }
    return 0.0;
  }

  // lim_{n->inf} s_n (possibly +inf). Every descriptor is monotone in n.
  double limit() const {
    if (scale_ == 0.0) return 0.0;
    switch (kind_) {
      case Kind::kConstant:
        return scale_;
      case Kind::kGeometric:
        if (param_ < 1.0) return 0.0;
        if (param_ == 1.0) return scale_;
        return std::numeric_limits<double>::infinity();
      case Kind::kPower:
        if (param_ < 0.0) return 0.0;
        if (param_ == 0.0) return scale_;
        return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  double inf_from(Index j) const { return std::min(at(j), limit()); }
  double sup_from(Index j) const { return std::max(at(j), limit()); }

  bool nonincreasing() const noexcept {
    if (scale_ == 0.0 || kind_ == Kind::kConstant) return true;
    return kind_ == Kind::kGeometric ? param_ <= 1.0 : param_ <= 0.0;
  }

  // sum_{i=from}^{to} s_i; empty when to < from.
  double sum(Index from, Index to) const {
    if (to < from || scale_ == 0.0) return 0.0;
    const double count = static_cast<double>(to - from + 1);
    switch (kind_) {
      case Kind::kConstant:
        return scale_ * count;
      case Kind::kGeometric: {
        if (param_ == 1.0) return scale_ * count;
        const double lr = std::log(param_);
        // scale * r^from * (1 - r^count) / (1 - r)
        return scale_ * std::exp(static_cast<double>(from) * lr) * (-std::expm1(count * lr)) /
               (1.0 - param_);
      }
      case Kind::kPower:
        return scale_ * detail::power_range_sum(param_, from, to);
    }
    return 0.0;
  }

  // sum_{i=from}^{to} log s_i; requires a positive sequence.
  double log_sum(Index from, Index to) const {
    if (to < from) return 0.0;
    const double count = static_cast<double>(to - from + 1);
    const double base = count * std::log(scale_);
    switch (kind_) {
      case Kind::kConstant:
        return base;
      case Kind::kGeometric:
        return base + std::log(param_) * 0.5 * (static_cast<double>(from) + static_cast<double>(to)) * count;
      case Kind::kPower:
        return base + param_ * detail::log_range_sum(from, to);
    }
    return 0.0;
  }

  // sum_{n>=1} s_n when it converges by closed form; NaN when it diverges.
  double series_sum() const {
    if (scale_ == 0.0) return 0.0;
    switch (kind_) {
      case Kind::kConstant:
        return std::numeric_limits<double>::quiet_NaN();
      case Kind::kGeometric:
        return param_ < 1.0 ? scale_ * param_ / (1.0 - param_) : std::numeric_limits<double>::quiet_NaN();
      case Kind::kPower:
        return param_ < -1.0 ? scale_ * std::riemann_zeta(-param_) : std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
  }

  bool summable() const { return !std::isnan(series_sum()); }

  std::string formula() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case Kind::kConstant:
        os << scale_;
        break;
      case Kind::kGeometric:
        os << scale_ << "*" << param_ << "^n";
        break;
      case Kind::kPower:
        os << scale_ << "*n^" << param_;
        break;
    }
    return os.str();
  }

  friend bool operator==(const SequenceDescriptor&, const SequenceDescriptor&) = default;

 private:
  SequenceDescriptor(Kind kind, double scale, double param) : kind_(kind), scale_(scale), param_(param) {
    if (!std::isfinite(scale_) || !std::isfinite(param_)) {
      throw DomainError("sequence descriptor parameters must be finite");
    }
    if (scale_ < 0.0) throw DomainError("sequence descriptor scale must be nonnegative");
    if (kind_ == Kind::kGeometric && !(param_ > 0.0)) {
      throw DomainError("geometric ratio must be positive");
    }
  }

  Kind kind_;
  double scale_;
  double param_;
};

// w_n(lambda) = ((n+1)/n)^lambda
struct RatioPower {
  friend bool operator==(const RatioPower&, const RatioPower&) = default;
};

// w_n(lambda) = a_n exp(lambda b_n), a_n > 0, b_n >= 0
struct ExpFamily {
  SequenceDescriptor a;
  SequenceDescriptor b;
  friend bool operator==(const ExpFamily&, const ExpFamily&) = default;
};

// w_n(lambda) = lambda
struct ConstantMultiple {
  friend bool operator==(const ConstantMultiple&, const ConstantMultiple&) = default;
};

using ParametricFamily = std::variant<RatioPower, ExpFamily, ConstantMultiple>;

// One explicit weight w_n(lambda) = a exp(lambda b).
struct HeadWeight {
  double a = 1.0;
  double b = 0.0;
  friend bool operator==(const HeadWeight&, const HeadWeight&) = default;
};

// Explicit weights for n = 1..head.size(), then the parametric tail evaluated
// at the same index n.
struct Tabulated {
  std::vector<HeadWeight> head;
  ParametricFamily tail;
  friend bool operator==(const Tabulated&, const Tabulated&) = default;
};

// Open-below parameter interval (lower, +inf) or closed-below [lower, +inf).
struct ParameterDomain {
  double lower = -std::numeric_limits<double>::infinity();
  bool lower_open = true;

  bool contains(double lambda) const noexcept {
    if (!std::isfinite(lambda)) return false;
    return lower_open ? lambda > lower : lambda >= lower;
  }
};

struct CompactInterval {
  double a = 0.0;
  double b = 0.0;

  CompactInterval() = default;
  CompactInterval(double lo, double hi) : a(lo), b(hi) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
      throw DomainError("compact interval requires finite a <= b");
    }
  }

  bool degenerate() const noexcept { return a == b; }
  bool contains(double lambda) const noexcept { return lambda >= a && lambda <= b; }
  friend bool operator==(const CompactInterval&, const CompactInterval&) = default;
};

class WeightFamily {
 public:
  using Kind = std::variant<RatioPower, ExpFamily, ConstantMultiple, Tabulated>;

  WeightFamily(Kind kind) : kind_(std::move(kind)) { validate(); }  // NOLINT(google-explicit-constructor)
  WeightFamily(ParametricFamily p)                                  // NOLINT(google-explicit-constructor)
      : kind_(std::visit([](auto&& f) -> Kind { return f; }, std::move(p))) {
    validate();
  }

  const Kind& kind() const noexcept { return kind_; }

  bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(kind_); }

  // The parametric part that governs all asymptotic behaviour.
  ParametricFamily asymptotic() const {
    return std::visit(
        [](const auto& f) -> ParametricFamily {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Tabulated>) {
            return f.tail;
          } else {
            return f;
          }
        },
        kind_);
  }

  std::size_t head_size() const noexcept {
    if (const auto* t = std::get_if<Tabulated>(&kind_)) return t->head.size();
    return 0;
  }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, RatioPower>) return "ratio_power";
          if constexpr (std::is_same_v<F, ExpFamily>) return "exp_family";
          if constexpr (std::is_same_v<F, ConstantMultiple>) return "constant_multiple";
          if constexpr (std::is_same_v<F, Tabulated>) return "tabulated";
          return "";
        },
        kind_);
  }

  friend bool operator==(const WeightFamily&, const WeightFamily&) = default;

 private:
  void validate() const {
    auto check_exp = [](const ExpFamily& e) {
      if (!(e.a.scale() > 0.0)) throw DomainError("exp family requires positive a_n");
    };
    if (const auto* e = std::get_if<ExpFamily>(&kind_)) check_exp(*e);
    if (const auto* t = std::get_if<Tabulated>(&kind_)) {
      if (const auto* e = std::get_if<ExpFamily>(&t->tail)) check_exp(*e);
      for (const auto& h : t->head) {
        if (!(h.a > 0.0) || !std::isfinite(h.a)) throw DomainError("tabulated head weights need a > 0");
        if (!(h.b >= 0.0) || !std::isfinite(h.b)) throw DomainError("tabulated head weights need b >= 0");
      }
    }
  }

  Kind kind_;
};

// Parameters at which every weight is a well-defined positive number.
inline ParameterDomain definition_domain(const WeightFamily& fam) {
  const auto tail = fam.asymptotic();
  if (std::holds_alternative<ConstantMultiple>(tail)) return {0.0, true};
  return {};
}

// Parameters at which the family is a hypercyclicity candidate on l^p:
// (1/p, inf) for the ratio-power family, (1, inf) for constant multiples,
// the whole line for exponential families.
inline ParameterDomain parameter_domain(const WeightFamily& fam, double p) {
  const auto tail = fam.asymptotic();
  if (std::holds_alternative<RatioPower>(tail)) return {1.0 / p, true};
  if (std::holds_alternative<ConstantMultiple>(tail)) return {1.0, true};
  return {};
}

namespace detail {

inline void require_defined(const WeightFamily& fam, double lambda) {
  if (!definition_domain(fam).contains(lambda)) {
    std::ostringstream os;
    os.precision(17);
    os << "parameter " << lambda << " outside the domain of family " << fam.name();
    throw DomainError(os.str());
  }
}

inline double parametric_log_weight(const ParametricFamily& f, Index n, double lambda) {
  return std::visit(
      [&](const auto& k) -> double {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          return lambda * std::log1p(1.0 / static_cast<double>(n));
        } else if constexpr (std::is_same_v<F, ExpFamily>) {
          return std::log(k.a.at(n)) + lambda * k.b.at(n);
        } else {
          return std::log(lambda);
        }
      },
      f);
}

// sum_{i=from}^{to} log w_i(lambda) for a parametric family, closed form.
inline double parametric_log_product(const ParametricFamily& f, Index from, Index to, double lambda) {
  if (to < from) return 0.0;
  return std::visit(
      [&](const auto& k) -> double {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          // lambda * log((to+1)/from), written to stay accurate for short ranges
          const double span = static_cast<double>(to - from + 1);
          return lambda * std::log1p(span / static_cast<double>(from));
        } else if constexpr (std::is_same_v<F, ExpFamily>) {
          const double bsum = lambda == 0.0 ? 0.0 : lambda * k.b.sum(from, to);
          return k.a.log_sum(from, to) + bsum;
        } else {
          return static_cast<double>(to - from + 1) * std::log(lambda);
        }
      },
      f);
}

inline double parametric_lipschitz(const ParametricFamily& f, const CompactInterval& K, Index n) {
  return std::visit(
      [&](const auto& k) -> double {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          return std::log1p(1.0 / static_cast<double>(n));
        } else if constexpr (std::is_same_v<F, ExpFamily>) {
          return k.b.at(n);
        } else {
          return 1.0 / K.a;
        }
      },
      f);
}

// sum_{i=1}^{m} L_i(K) for a parametric family.
inline double parametric_lipschitz_prefix(const ParametricFamily& f, const CompactInterval& K, Index m) {
  return std::visit(
      [&](const auto& k) -> double {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          return std::log1p(static_cast<double>(m));
        } else if constexpr (std::is_same_v<F, ExpFamily>) {
          return k.b.sum(1, m);
        } else {
          return static_cast<double>(m) / K.a;
        }
      },
      f);
}

}  // namespace detail

inline double log_weight(const WeightFamily& fam, Index n, double lambda) {
  if (n == 0) throw DomainError("weights are indexed from n = 1");
  if (const auto* t = std::get_if<Tabulated>(&fam.kind())) {
    if (n <= t->head.size()) {
      const auto& h = t->head[n - 1];
      return std::log(h.a) + lambda * h.b;
    }
    return detail::parametric_log_weight(t->tail, n, lambda);
  }
  return detail::parametric_log_weight(fam.asymptotic(), n, lambda);
}

inline double weight_at(const WeightFamily& fam, Index n, double lambda) {
  detail::require_defined(fam, lambda);
  if (n == 0) throw DomainError("weights are indexed from n = 1");
  if (const auto* t = std::get_if<Tabulated>(&fam.kind()); t && n <= t->head.size()) {
    const auto& h = t->head[n - 1];
    return h.a * std::exp(lambda * h.b);
  }
  return std::visit(
      [&](const auto& k) -> double {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          const double nd = static_cast<double>(n);
          return std::pow((nd + 1.0) / nd, lambda);
        } else if constexpr (std::is_same_v<F, ExpFamily>) {
          return k.a.at(n) * std::exp(lambda * k.b.at(n));
        } else {
          return lambda;
        }
      },
      fam.asymptotic());
}

// sum_{i=from}^{to} log w_i(lambda); the empty range to = from - 1 gives 0.
inline double log_weight_product(const WeightFamily& fam, Index from, Index to, double lambda) {
  detail::require_defined(fam, lambda);
  if (from == 0) throw DomainError("weights are indexed from n = 1");
  if (to + 1 < from) throw DomainError("log_weight_product range end below from - 1");
  if (to < from) return 0.0;
  if (const auto* t = std::get_if<Tabulated>(&fam.kind())) {
    const Index H = t->head.size();
    double s = 0.0;
    for (Index i = from; i <= std::min(to, H); ++i) {
      s += std::log(t->head[i - 1].a) + lambda * t->head[i - 1].b;
    }
    if (to > H) s += detail::parametric_log_product(t->tail, std::max(from, H + 1), to, lambda);
    return s;
  }
  return detail::parametric_log_product(fam.asymptotic(), from, to, lambda);
}

// B^m_{w(lambda)} x: e_nu -> w_{nu-m+1}...w_nu e_{nu-m}, or 0 when nu < m.
inline SparseVector shift_power_apply(const WeightFamily& fam, double lambda, Index m, const SparseVector& x) {
  detail::require_defined(fam, lambda);
  if (m == 0) return x;
  std::vector<Entry> out;
  for (const auto& e : x.entries()) {
    if (e.index < m) continue;
    const double lp = log_weight_product(fam, e.index - m + 1, e.index, lambda);
    out.push_back({e.index - m, e.value * std::exp(lp)});
  }
  return SparseVector::from_sorted(std::move(out));
}

// F^n(lambda) x = S_n(lambda) x: e_nu -> e_{nu+n} / (w_{nu+1}...w_{nu+n}).
inline SparseVector right_inverse_power_apply(const WeightFamily& fam, double lambda, Index n,
                                              const SparseVector& x) {
  detail::require_defined(fam, lambda);
  if (n == 0) return x;
  std::vector<Entry> out;
  out.reserve(x.support_size());
  for (const auto& e : x.entries()) {
    const Index target = detail::checked_add(e.index, n);
    const double lp = log_weight_product(fam, e.index + 1, target, lambda);
    out.push_back({target, e.value * std::exp(-lp)});
  }
  return SparseVector::from_sorted(std::move(out));
}

inline void require_interval_defined(const WeightFamily& fam, const CompactInterval& K) {
  const auto dom = definition_domain(fam);
  if (!dom.contains(K.a) || !dom.contains(K.b)) {
    throw DomainError("compact interval lies outside the domain of family " + fam.name());
  }
}

// L_n(K) with |log w_n(lambda) - log w_n(mu)| <= L_n(K) |lambda - mu| on K.
inline double lipschitz_constant(const WeightFamily& fam, const CompactInterval& K, Index n) {
  require_interval_defined(fam, K);
  if (n == 0) throw DomainError("weights are indexed from n = 1");
  if (const auto* t = std::get_if<Tabulated>(&fam.kind()); t && n <= t->head.size()) {
    return t->head[n - 1].b;
  }
  return detail::parametric_lipschitz(fam.asymptotic(), K, n);
}

// sum_{i=1}^{m} L_i(K)
inline double lipschitz_prefix_sum(const WeightFamily& fam, const CompactInterval& K, Index m) {
  require_interval_defined(fam, K);
  if (const auto* t = std::get_if<Tabulated>(&fam.kind())) {
    const Index H = t->head.size();
    double s = 0.0;
    for (Index i = 1; i <= std::min(m, H); ++i) s += t->head[i - 1].b;
    if (m > H) {
      s += detail::parametric_lipschitz_prefix(t->tail, K, m) -
           detail::parametric_lipschitz_prefix(t->tail, K, H);
    }
    return s;
  }
  return detail::parametric_lipschitz_prefix(fam.asymptotic(), K, m);
}

namespace detail {

inline constexpr Index kTailPartialTerms = 256;

// Upper bound on G(j) = sum_{k>=0} prod_{i=j}^{j+k} w_i(a)^{-p} from the
// parametric family's closed form alone (no partial summation).
inline double tail_majorant(const ParametricFamily& f, Index j, double a, double p) {
  return std::visit(
      [&](const auto& k) -> double {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          // prod = ((j+k+1)/j)^a, so G(j) = j^alpha sum_{m>=j+1} m^-alpha.
          // m^-alpha is convex, hence m^-alpha <= integral over [m-1/2, m+1/2]
          // and G(j) <= j^alpha (j+1/2)^(1-alpha) / (alpha-1).
          const double alpha = a * p;
          if (!(alpha > 1.0)) {
            throw NonSummable("sum (nu+1)^(a p) (nu+n+1)^(-a p) diverges: a*p <= 1", true);
          }
          const double jd = static_cast<double>(j);
          return (jd + 0.5) * std::exp(-alpha * std::log1p(0.5 / jd)) / (alpha - 1.0);
        } else if constexpr (std::is_same_v<F, ConstantMultiple>) {
          if (!(a > 1.0)) throw NonSummable("sum a^(-p n) diverges: a <= 1", true);
          const double q = std::exp(-p * std::log(a));
          return q / (1.0 - q);
        } else {
          // Geometric majorant with ratio q = (inf_{i>=j} w_i(a))^-p.
          // a * b_i is monotone in i, so its extremes over i >= j sit at j or
          // at the limit; a = 0 removes the b-dependence entirely.
          auto scaled_b = [a](double b_value) { return a == 0.0 ? 0.0 : a * b_value; };
          const double b_lo = k.b.inf_from(j);
          const double b_hi = k.b.sup_from(j);
          const double exponent_inf = a >= 0.0 ? scaled_b(b_lo) : scaled_b(b_hi);
          const double exponent_sup = a >= 0.0 ? scaled_b(b_hi) : scaled_b(b_lo);
          const double log_inf_w = std::log(k.a.inf_from(j)) + exponent_inf;
          const double log_q = -p * log_inf_w;
          if (!(log_q < 0.0)) {
            // Weights that never exceed 1 from j onward keep every term >= the
            // current one, so the series genuinely diverges.
            const double log_sup_w = std::log(k.a.sup_from(j)) + exponent_sup;
            throw NonSummable("no geometric majorant for the inverse weight products", log_sup_w <= 0.0);
          }
          return std::exp(log_q) / (-std::expm1(log_q));
        }
      },
      f);
}

// Upper bound on G(j), summing the first terms exactly (past any tabulated
// head) and closing with the analytic majorant.
inline double tail_series_bound(const WeightFamily& fam, Index j, double a, double p) {
  const auto tail = fam.asymptotic();
  Index terms = std::holds_alternative<ConstantMultiple>(tail) ? 0 : kTailPartialTerms;
  const Index H = fam.head_size();
  if (j + terms <= H) terms = H - j + 1;
  double log_prod = 0.0;
  double sum = 0.0;
  for (Index k = 0; k < terms; ++k) {
    log_prod += log_weight(fam, j + k, a);
    sum += std::exp(-p * log_prod);
  }
  return sum + std::exp(-p * log_prod) * tail_majorant(tail, j + terms, a, p);
}

}  // namespace detail

// Certified upper bound on || sum_{n>=s} e_{nu+n} / (w_{nu+1}(a)...w_{nu+n}(a)) ||_p.
// Throws NonSummable when no analytic majorant converges.
inline double inverse_tail_bound(const WeightFamily& fam, double a, Index nu, Index s, double p) {
  detail::require_defined(fam, a);
  if (s == 0) throw DomainError("tail start s must be positive");
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  const Index first = detail::checked_add(nu, s);
  const double log_prefix = log_weight_product(fam, nu + 1, first - 1, a);
  const double g = detail::tail_series_bound(fam, first, a, p);
  const double log_sum = -p * log_prefix + std::log(g);
  return std::exp(log_sum / p);
}

}  // namespace ufhc
