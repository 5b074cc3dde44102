#pragma once

// Experiment configuration: one JSON document describing a family, the
// interval K, the balls U and V, and the budget and verification knobs.
//
//   {
//     "family": {"kind": "ratio_power"},
//     "p": 2,
//     "K": [1.0, 1.0],
//     "U": {"center": [], "radius": 1},
//     "V": {"center": [[0, 1.0]], "radius": 0.5},
//     "M": 1,
//     "metric": {"kind": "lp"},
//     "budget_cap": 1000000,
//     "grid_per_block": 20,
//     "horizon_policy": "scheduled",
//     "output": {"dir": "out"}
//   }

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ufhc/constructor.hpp"
#include "ufhc/errors.hpp"
#include "ufhc/serialization.hpp"
#include "ufhc/verifier.hpp"

namespace ufhc {

struct ExperimentConfig {
  WeightFamily family{WeightFamily::Kind{RatioPower{}}};
  double p = 2.0;
  CompactInterval K{1.0, 1.0};
  SparseVector x;
  double r = 1.0;
  SparseVector y = SparseVector::basis(0);
  double eps = 0.5;
  SpaceMetric metric = LpNorm{2.0};
  Index M = 1;
  Index budget_cap = 1'000'000;
  Index grid_per_block = 20;
  HorizonPolicy policy = HorizonPolicy::kScheduled;
  std::string output_dir = "out";

  OpenBall U() const { return OpenBall(x, r, metric); }
  OpenBall V() const { return OpenBall(y, eps, metric); }
};

// Ladder used by `--metric fnorm` when the config names none: l^p seminorms
// on the first 4, 16, 64, 256 coordinates, then the full l^p norm.
inline FNormLadder default_fnorm_ladder(double p) {
  FNormLadder ladder;
  for (Index w : {4, 16, 64, 256}) ladder.seminorms.push_back({p, w, 1.0});
  ladder.seminorms.push_back({p, std::nullopt, 1.0});
  return ladder;
}

inline json to_json(const ExperimentConfig& c) {
  return {{"family", to_json(c.family)},
          {"p", c.p},
          {"K", to_json(c.K)},
          {"U", {{"center", to_json(c.x)}, {"radius", c.r}}},
          {"V", {{"center", to_json(c.y)}, {"radius", c.eps}}},
          {"M", c.M},
          {"metric", to_json(c.metric)},
          {"budget_cap", c.budget_cap},
          {"grid_per_block", c.grid_per_block},
          {"horizon_policy", to_string(c.policy)},
          {"output", {{"dir", c.output_dir}}}};
}

inline ExperimentConfig parse_config(const json& j) {
  Decoder d;
  ExperimentConfig cfg;
  if (!j.is_object()) {
    d.fail("", "config must be a JSON object");
    d.throw_if_failed();
  }
  if (const json* f = d.field(j, "family", "")) {
    if (auto fam = decode_family(*f, "/family", d)) cfg.family = *fam;
  }
  if (auto p = d.number(j, "p", "")) {
    if (*p >= 1.0 && std::isfinite(*p)) cfg.p = *p;
    else d.fail("/p", "must be a finite number >= 1");
  }
  if (const json* k = d.field(j, "K", "")) {
    if (auto K = decode_interval(*k, "/K", d)) cfg.K = *K;
  }
  if (const json* u = d.field(j, "U", "")) {
    if (auto b = decode_ball(*u, "/U", d)) {
      cfg.x = b->center;
      cfg.r = b->radius;
    }
  }
  if (const json* v = d.field(j, "V", "")) {
    if (auto b = decode_ball(*v, "/V", d)) {
      cfg.y = b->center;
      cfg.eps = b->radius;
      if (cfg.y.is_zero()) d.fail("/V/center", "target center must be nonzero");
    }
  }
  if (auto M = d.index(j, "M", "")) {
    if (*M >= 1) cfg.M = *M;
    else d.fail("/M", "must be >= 1");
  }
  cfg.metric = LpNorm{cfg.p};
  if (const json* m = d.field(j, "metric", "", false)) {
    if (auto metric = decode_metric(*m, "/metric", cfg.p, d)) {
      cfg.metric = *metric;
      if (const auto* lp = std::get_if<LpNorm>(&cfg.metric); lp && lp->p != cfg.p) {
        d.fail("/metric/p", "l^p metric exponent must equal p");
      }
    }
  }
  if (const json* b = d.field(j, "budget_cap", "", false)) {
    if (auto cap = d.index(*b, "/budget_cap")) {
      if (*cap >= 1 && *cap <= kMaxBudgetCap) cfg.budget_cap = *cap;
      else d.fail("/budget_cap", "must lie in [1, 2^32)");
    }
  }
  if (const json* g = d.field(j, "grid_per_block", "", false)) {
    if (auto n = d.index(*g, "/grid_per_block")) {
      if (*n >= 1) cfg.grid_per_block = *n;
      else d.fail("/grid_per_block", "must be >= 1");
    }
  }
  if (const json* h = d.field(j, "horizon_policy", "", false)) {
    if (*h == "scheduled") cfg.policy = HorizonPolicy::kScheduled;
    else if (*h == "exhaustive") cfg.policy = HorizonPolicy::kExhaustive;
    else d.fail("/horizon_policy", "expected scheduled or exhaustive");
  }
  if (const json* o = d.field(j, "output", "", false)) {
    if (const json* dir = d.field(*o, "dir", "/output", false)) {
      if (dir->is_string()) cfg.output_dir = dir->get<std::string>();
      else d.fail("/output/dir", "expected a string");
    }
  }
  d.throw_if_failed();
  return cfg;
}

// Malformed JSON surfaces as a ConfigError as well.
inline ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  return parse_config(j);
}

// FNV-1a over the canonical (key-sorted, compact) serialization.
inline std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ufhc
