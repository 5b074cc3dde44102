#pragma once

// JSON and CSV encodings for every artifact the pipeline reads or writes.
// Decoders collect field-level errors (with a JSON-pointer-like path) and
// raise a single ConfigError at the end.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ufhc/constructor.hpp"
#include "ufhc/criterion.hpp"
#include "ufhc/density.hpp"
#include "ufhc/errors.hpp"
#include "ufhc/sequence_space.hpp"
#include "ufhc/verifier.hpp"
#include "ufhc/weight_family.hpp"

namespace ufhc {

using json = nlohmann::json;

// ---------------------------------------------------------------- encoders

inline json to_json(const SparseVector& x) {
  json out = json::array();
  for (const auto& e : x.entries()) out.push_back(json::array({e.index, e.value}));
  return out;
}

inline json to_json(const SequenceDescriptor& s) {
  using K = SequenceDescriptor::Kind;
  switch (s.kind()) {
    case K::kConstant:
      return {{"kind", "constant"}, {"value", s.scale()}};
    case K::kGeometric:
      return {{"kind", "geometric"}, {"ratio", s.ratio()}, {"scale", s.scale()}};
    case K::kPower:
      return {{"kind", "power"}, {"exponent", s.exponent()}, {"scale", s.scale()}};
  }
  return {};
}

inline json to_json(const ParametricFamily& f) {
  return std::visit(
      [](const auto& k) -> json {
        using F = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<F, RatioPower>) {
          return {{"kind", "ratio_power"}, {"params", json::object()}};
        } else if constexpr (std::is_same_v<F, ExpFamily>) {
          return {{"kind", "exp_family"}, {"params", {{"a", to_json(k.a)}, {"b", to_json(k.b)}}}};
        } else {
          return {{"kind", "constant_multiple"}, {"params", json::object()}};
        }
      },
      f);
}

inline json to_json(const WeightFamily& fam) {
  if (const auto* t = std::get_if<Tabulated>(&fam.kind())) {
    json head = json::array();
    for (const auto& h : t->head) head.push_back({{"a", h.a}, {"b", h.b}});
    return {{"kind", "tabulated"}, {"params", {{"head", head}, {"tail", to_json(t->tail)}}}};
  }
  return to_json(fam.asymptotic());
}

inline json to_json(const SpaceMetric& m) {
  if (const auto* lp = std::get_if<LpNorm>(&m)) return {{"kind", "lp"}, {"p", lp->p}};
  json semis = json::array();
  for (const auto& s : std::get<FNormLadder>(m).seminorms) {
    json j{{"scale", s.scale}};
    j["exponent"] = std::isinf(s.exponent) ? json("inf") : json(s.exponent);
    j["window"] = s.window ? json(*s.window) : json(nullptr);
    semis.push_back(j);
  }
  return {{"kind", "fnorm"}, {"seminorms", semis}};
}

inline json to_json(const CompactInterval& K) { return json::array({K.a, K.b}); }

inline json to_json(const OpenBall& B) { return {{"center", to_json(B.center())}, {"radius", B.radius()}}; }

inline json to_json(const Rational& q) { return {{"num", q.num}, {"den", q.den}}; }

inline json to_json(const Verdict& v) {
  json values = json::object();
  for (const auto& [k, x] : v.values) values[k] = std::isfinite(x) ? json(x) : json(nullptr);
  return {{"condition", v.condition}, {"status", to_string(v.status)}, {"witness", v.witness}, {"values", values}};
}

inline json to_json(const std::vector<Verdict>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

inline json to_json(const BudgetSummary& b) {
  return {{"tau", b.tau},
          {"l_tau", b.l_tau},
          {"scheduled_checks", b.scheduled_checks},
          {"support_size", b.support_size},
          {"max_time", b.max_time},
          {"coefficient_ops", b.coefficient_ops}};
}

inline json to_json(const ConstructionPlan& pl) {
  return {{"family", to_json(pl.family)},
          {"K", to_json(pl.K)},
          {"p", pl.p},
          {"metric", to_json(pl.U.metric())},
          {"U", to_json(pl.U)},
          {"V", to_json(pl.V)},
          {"M", pl.M},
          {"J", pl.J},
          {"J_x", pl.J_x},
          {"eta", pl.eta},
          {"s0", pl.s0},
          {"N0", pl.N0},
          {"c", pl.c},
          {"tau", pl.tau},
          {"lambda_points", pl.lambda_points},
          {"l_schedule", pl.l_schedule},
          {"delta", to_json(pl.delta)},
          {"d_description", "d_n = eta / sum_{i=1}^{n+J} L_i(K)"},
          {"budget", to_json(pl.budget)},
          {"verdicts", to_json(pl.verdicts)}};
}

inline json to_json(const DensityReport& d) {
  return {{"best_density", to_json(d.best_density)},
          {"best_density_value", d.best_density.to_double()},
          {"achieved_at", d.achieved_at},
          {"threshold", to_json(d.threshold)},
          {"passed", d.passed}};
}

inline json to_json(const Certificate& c) {
  json results = json::array();
  for (const auto& r : c.results) {
    results.push_back({{"lambda", r.lambda},
                       {"block", r.block},
                       {"membership", r.membership},
                       {"checked_times", r.checked},
                       {"passed_times", r.passed_visits},
                       {"horizon", r.horizon},
                       {"density", to_json(r.density)},
                       {"passed", r.passed()}});
  }
  return {{"label", c.label},
          {"policy", to_string(c.policy)},
          {"delta", to_json(c.delta)},
          {"grid_size", c.grid.size()},
          {"grid_resolution", c.grid_resolution},
          {"degenerate", c.degenerate},
          {"overall", c.overall},
          {"grid", c.grid},
          {"results", results}};
}

namespace detail {

inline std::string exact(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

}  // namespace detail

// lambda,t,checked_times,passed_times,best_density_num,best_density_den
inline std::string certificate_csv(const Certificate& c) {
  std::ostringstream os;
  os << "lambda,t,checked_times,passed_times,best_density_num,best_density_den\n";
  for (const auto& r : c.results) {
    os << detail::exact(r.lambda) << ',' << r.block << ',' << r.checked << ',' << r.passed_visits << ','
       << r.density.best_density.num << ',' << r.density.best_density.den << '\n';
  }
  return os.str();
}

// lambda,n,count,density for every n in [0, horizon] at which the count changes
// plus the horizon itself.
inline std::string profile_csv(double lambda, const VisitProfile& profile) {
  std::ostringstream os;
  os << "lambda,n,count,density\n";
  auto row = [&](Index n) {
    const auto q = finite_density(profile, n);
    os << detail::exact(lambda) << ',' << n << ',' << q.num << ',' << detail::exact(q.to_double()) << '\n';
  };
  for (Index t : profile.times()) row(t);
  if (profile.times().empty() || profile.times().back() != profile.horizon()) row(profile.horizon());
  return os.str();
}

// ---------------------------------------------------------------- decoders

class Decoder {
 public:
  void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }
  bool ok() const noexcept { return errors_.empty(); }
  const std::vector<std::string>& errors() const noexcept { return errors_; }

  void throw_if_failed() const {
    if (!errors_.empty()) throw ConfigError(errors_);
  }

  const json* field(const json& obj, const std::string& key, const std::string& path, bool required = true) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + "/" + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& v, const std::string& path) {
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
    const json* v = field(obj, key, path);
    return v ? number(*v, path + "/" + key) : std::nullopt;
  }

  std::optional<Index> index(const json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(path, "expected a nonnegative integer");
      return std::nullopt;
    }
    return v.get<Index>();
  }

  std::optional<Index> index(const json& obj, const std::string& key, const std::string& path) {
    const json* v = field(obj, key, path);
    return v ? index(*v, path + "/" + key) : std::nullopt;
  }

  // Runs `make`, recording library validation errors at `path`.
  template <typename Fn>
  auto guarded(const std::string& path, Fn&& make) -> std::optional<decltype(make())> {
    try {
      return make();
    } catch (const Error& e) {
      fail(path, e.what());
      return std::nullopt;
    }
  }

 private:
  std::vector<std::string> errors_;
};

inline std::optional<SparseVector> decode_vector(const json& v, const std::string& path, Decoder& d) {
  if (!v.is_array()) {
    d.fail(path, "expected an array of [index, coefficient] pairs");
    return std::nullopt;
  }
  std::vector<Entry> entries;
  bool good = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string ep = path + "/" + std::to_string(i);
    if (!v[i].is_array() || v[i].size() != 2) {
      d.fail(ep, "expected [index, coefficient]");
      good = false;
      continue;
    }
    const auto idx = d.index(v[i][0], ep + "/0");
    const auto c = d.number(v[i][1], ep + "/1");
    if (!idx || !c) {
      good = false;
      continue;
    }
    entries.push_back({*idx, *c});
  }
  if (!good) return std::nullopt;
  return d.guarded(path, [&] { return SparseVector::from_entries(std::move(entries)); });
}

inline std::optional<SequenceDescriptor> decode_sequence(const json& v, const std::string& path, Decoder& d) {
  const json* kind = d.field(v, "kind", path);
  if (!kind) return std::nullopt;
  const std::string k = kind->is_string() ? kind->get<std::string>() : "";
  auto scale = [&]() -> std::optional<double> {
    const json* s = d.field(v, "scale", path, false);
    return s ? d.number(*s, path + "/scale") : std::optional<double>(1.0);
  };
  if (k == "constant") {
    const auto value = d.number(v, "value", path);
    if (!value) return std::nullopt;
    return d.guarded(path, [&] { return SequenceDescriptor::constant(*value); });
  }
  if (k == "geometric") {
    const auto r = d.number(v, "ratio", path);
    const auto s = scale();
    if (!r || !s) return std::nullopt;
    return d.guarded(path, [&] { return SequenceDescriptor::geometric(*r, *s); });
  }
  if (k == "power") {
    const auto e = d.number(v, "exponent", path);
    const auto s = scale();
    if (!e || !s) return std::nullopt;
    return d.guarded(path, [&] { return SequenceDescriptor::power(*e, *s); });
  }
  d.fail(path + "/kind", "expected one of constant, geometric, power");
  return std::nullopt;
}

inline std::optional<ParametricFamily> decode_parametric(const json& v, const std::string& path, Decoder& d) {
  const json* kind = d.field(v, "kind", path);
  if (!kind) return std::nullopt;
  const std::string k = kind->is_string() ? kind->get<std::string>() : "";
  if (k == "ratio_power") return ParametricFamily{RatioPower{}};
  if (k == "constant_multiple") return ParametricFamily{ConstantMultiple{}};
  if (k == "exp_family") {
    const json* params = d.field(v, "params", path);
    if (!params) return std::nullopt;
    const json* a = d.field(*params, "a", path + "/params");
    const json* b = d.field(*params, "b", path + "/params");
    std::optional<SequenceDescriptor> as, bs;
    if (a) as = decode_sequence(*a, path + "/params/a", d);
    if (b) bs = decode_sequence(*b, path + "/params/b", d);
    if (!as || !bs) return std::nullopt;
    return ParametricFamily{ExpFamily{*as, *bs}};
  }
  d.fail(path + "/kind", "expected one of ratio_power, exp_family, constant_multiple, tabulated");
  return std::nullopt;
}

inline std::optional<WeightFamily> decode_family(const json& v, const std::string& path, Decoder& d) {
  const json* kind = d.field(v, "kind", path);
  if (!kind) return std::nullopt;
  if (kind->is_string() && *kind == "tabulated") {
    const json* params = d.field(v, "params", path);
    if (!params) return std::nullopt;
    const std::string pp = path + "/params";
    const json* head = d.field(*params, "head", pp);
    const json* tail = d.field(*params, "tail", pp);
    Tabulated tab;
    bool good = head && tail;
    if (head) {
      if (!head->is_array()) {
        d.fail(pp + "/head", "expected an array");
        good = false;
      } else {
        for (std::size_t i = 0; i < head->size(); ++i) {
          const std::string hp = pp + "/head/" + std::to_string(i);
          const auto a = d.number((*head)[i], "a", hp);
          const auto b = d.number((*head)[i], "b", hp);
          if (!a || !b) {
            good = false;
            continue;
          }
          tab.head.push_back({*a, *b});
        }
      }
    }
    std::optional<ParametricFamily> tf;
    if (tail) tf = decode_parametric(*tail, pp + "/tail", d);
    if (!good || !tf) return std::nullopt;
    tab.tail = *tf;
    return d.guarded(path, [&] { return WeightFamily(WeightFamily::Kind{std::move(tab)}); });
  }
  auto pf = decode_parametric(v, path, d);
  if (!pf) return std::nullopt;
  return d.guarded(path, [&] { return WeightFamily(*pf); });
}

// A missing lp exponent falls back to `default_p`.
inline std::optional<SpaceMetric> decode_metric(const json& v, const std::string& path, double default_p,
                                                Decoder& d) {
  const json* kind = d.field(v, "kind", path);
  if (!kind) return std::nullopt;
  const std::string k = kind->is_string() ? kind->get<std::string>() : "";
  if (k == "lp") {
    double p = default_p;
    if (const json* pj = d.field(v, "p", path, false)) {
      const auto pv = d.number(*pj, path + "/p");
      if (!pv) return std::nullopt;
      p = *pv;
    }
    SpaceMetric m = LpNorm{p};
    return d.guarded(path, [&] {
      validate(m);
      return m;
    });
  }
  if (k == "fnorm") {
    const json* semis = d.field(v, "seminorms", path);
    if (!semis) return std::nullopt;
    if (!semis->is_array()) {
      d.fail(path + "/seminorms", "expected an array");
      return std::nullopt;
    }
    FNormLadder ladder;
    bool good = true;
    for (std::size_t i = 0; i < semis->size(); ++i) {
      const std::string sp = path + "/seminorms/" + std::to_string(i);
      const auto& s = (*semis)[i];
      Seminorm sn;
      if (const json* e = d.field(s, "exponent", sp, false)) {
        const auto ev = d.number(*e, sp + "/exponent");
        if (!ev) good = false;
        else sn.exponent = *ev;
      }
      if (const json* w = d.field(s, "window", sp, false); w && !w->is_null()) {
        const auto wv = d.index(*w, sp + "/window");
        if (!wv) good = false;
        else sn.window = *wv;
      }
      if (const json* sc = d.field(s, "scale", sp, false)) {
        const auto sv = d.number(*sc, sp + "/scale");
        if (!sv) good = false;
        else sn.scale = *sv;
      }
      ladder.seminorms.push_back(sn);
    }
    if (!good) return std::nullopt;
    SpaceMetric m = std::move(ladder);
    return d.guarded(path, [&] {
      validate(m);
      return m;
    });
  }
  d.fail(path + "/kind", "expected lp or fnorm");
  return std::nullopt;
}

inline std::optional<CompactInterval> decode_interval(const json& v, const std::string& path, Decoder& d) {
  if (!v.is_array() || v.size() != 2) {
    d.fail(path, "expected [a, b]");
    return std::nullopt;
  }
  const auto a = d.number(v[0], path + "/0");
  const auto b = d.number(v[1], path + "/1");
  if (!a || !b) return std::nullopt;
  return d.guarded(path, [&] { return CompactInterval(*a, *b); });
}

struct BallSpec {
  SparseVector center;
  double radius = 0.0;
};

inline std::optional<BallSpec> decode_ball(const json& v, const std::string& path, Decoder& d) {
  const json* c = d.field(v, "center", path);
  const auto r = d.number(v, "radius", path);
  std::optional<SparseVector> center;
  if (c) center = decode_vector(*c, path + "/center", d);
  if (!center || !r) return std::nullopt;
  if (!(*r > 0.0) || !std::isfinite(*r)) {
    d.fail(path + "/radius", "must be positive and finite");
    return std::nullopt;
  }
  return BallSpec{*center, *r};
}

inline std::vector<Index> decode_index_array(const json& v, const std::string& path, Decoder& d) {
  std::vector<Index> out;
  if (!v.is_array()) {
    d.fail(path, "expected an array");
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (auto x = d.index(v[i], path + "/" + std::to_string(i))) out.push_back(*x);
  }
  return out;
}

inline std::vector<double> decode_number_array(const json& v, const std::string& path, Decoder& d) {
  std::vector<double> out;
  if (!v.is_array()) {
    d.fail(path, "expected an array");
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (auto x = d.number(v[i], path + "/" + std::to_string(i))) out.push_back(*x);
  }
  return out;
}

inline Verdict decode_verdict(const json& v) {
  Verdict out;
  out.condition = v.at("condition").get<std::string>();
  const auto s = v.at("status").get<std::string>();
  out.status = s == "holds" ? Status::kHolds : s == "fails" ? Status::kFails : Status::kInconclusive;
  out.witness = v.at("witness").get<std::string>();
  for (const auto& [k, x] : v.at("values").items()) {
    out.values[k] = x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>();
  }
  return out;
}

inline SparseVector parse_vector(const json& v) {
  Decoder d;
  auto x = decode_vector(v, "", d);
  d.throw_if_failed();
  return *x;
}

// Restores a plan written by to_json(ConstructionPlan) without recomputing any
// parameter, so verification is reproducible from the file alone.
inline ConstructionPlan parse_plan(const json& j) {
  Decoder d;
  const auto num = [&](const char* k) { return d.number(j, k, ""); };
  const auto idx = [&](const char* k) { return d.index(j, k, ""); };
  std::optional<WeightFamily> fam;
  std::optional<CompactInterval> K;
  std::optional<BallSpec> U, V;
  std::optional<SpaceMetric> metric;
  const auto p = num("p");
  if (const json* f = d.field(j, "family", "")) fam = decode_family(*f, "/family", d);
  if (const json* k = d.field(j, "K", "")) K = decode_interval(*k, "/K", d);
  if (const json* u = d.field(j, "U", "")) U = decode_ball(*u, "/U", d);
  if (const json* v = d.field(j, "V", "")) V = decode_ball(*v, "/V", d);
  if (const json* m = d.field(j, "metric", "")) metric = decode_metric(*m, "/metric", p.value_or(2.0), d);
  const auto M = idx("M"), J = idx("J"), J_x = idx("J_x"), s0 = idx("s0"), N0 = idx("N0"), c = idx("c"),
             tau = idx("tau");
  const auto eta = num("eta");
  std::vector<double> lambdas;
  std::vector<Index> schedule;
  if (const json* lp = d.field(j, "lambda_points", "")) lambdas = decode_number_array(*lp, "/lambda_points", d);
  if (const json* ls = d.field(j, "l_schedule", "")) schedule = decode_index_array(*ls, "/l_schedule", d);
  d.throw_if_failed();

  auto pl = [&] {
    try {
      return ConstructionPlan(*fam, *K, *p, OpenBall(U->center, U->radius, *metric),
                              OpenBall(V->center, V->radius, *metric), *M);
    } catch (const Error& e) {
      throw ConfigError({std::string("plan: ") + e.what()});
    }
  }();
  pl.J = *J;
  pl.J_x = *J_x;
  pl.eta = *eta;
  pl.s0 = *s0;
  pl.N0 = *N0;
  pl.c = *c;
  pl.tau = *tau;
  pl.lambda_points = std::move(lambdas);
  pl.l_schedule = std::move(schedule);
  pl.delta = Rational{1, 2 + pl.s0};

  std::vector<std::string> errs;
  if (pl.tau == 0 || pl.l_schedule.size() != pl.tau) errs.push_back("/l_schedule: length must equal tau >= 1");
  if (pl.lambda_points.size() != pl.tau + 1) errs.push_back("/lambda_points: length must equal tau + 1");
  if (pl.M == 0) errs.push_back("/M: must be positive");
  if (!errs.empty()) throw ConfigError(errs);

  if (auto bit = j.find("budget"); bit != j.end() && bit->is_object()) {
    const json* b = &*bit;
    pl.budget.tau = b->value("tau", pl.tau);
    pl.budget.l_tau = b->value("l_tau", Index{0});
    pl.budget.scheduled_checks = b->value("scheduled_checks", Index{0});
    pl.budget.support_size = b->value("support_size", Index{0});
    pl.budget.max_time = b->value("max_time", Index{0});
    pl.budget.coefficient_ops = b->value("coefficient_ops", 0.0);
  }
  if (auto it = j.find("verdicts"); it != j.end() && it->is_array()) {
    for (const auto& v : *it) pl.verdicts.push_back(decode_verdict(v));
  }
  return pl;
}

}  // namespace ufhc
