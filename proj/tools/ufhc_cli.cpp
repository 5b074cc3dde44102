// ufhc: batch front-end for the common-vector laboratory.
//
//   ufhc check     CONFIG               criterion verdicts
//   ufhc plan      CONFIG               construction plan
//   ufhc construct CONFIG | --plan F    common vector z
//   ufhc verify    --plan F [--z F]     grid certificate
//   ufhc run       CONFIG               full pipeline into an output directory
//
// JSON goes to stdout (or --out); a short human summary goes to stderr.
// Exit codes: 0 pass, 1 internal, 2 certificate failure, 3 not applicable,
// 4 budget, 5 config error, 6 non-summable tail.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ufhc/ufhc.hpp"

namespace {

using ufhc::json;
namespace fs = std::filesystem;

struct Overrides {
  std::optional<ufhc::Index> cap;
  std::optional<ufhc::Index> grid;
  std::optional<std::string> metric;
  std::optional<std::string> policy;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--cap", o.cap, "budget cap on scheduled visit checks")->check(CLI::Range(1ULL, (1ULL << 32) - 1));
  cmd->add_option("--grid", o.grid, "lambda grid points per block")->check(CLI::PositiveNumber);
  cmd->add_option("--metric", o.metric, "space metric")->check(CLI::IsMember({"lp", "fnorm"}));
  cmd->add_option("--policy", o.policy, "density horizon policy")->check(CLI::IsMember({"scheduled", "exhaustive"}));
}

ufhc::HorizonPolicy parse_policy(const std::string& s) {
  return s == "exhaustive" ? ufhc::HorizonPolicy::kExhaustive : ufhc::HorizonPolicy::kScheduled;
}

ufhc::ExperimentConfig load_config(const std::string& path, const Overrides& o) {
  auto cfg = ufhc::parse_config(ufhc::read_text(path));
  if (o.cap) cfg.budget_cap = *o.cap;
  if (o.grid) cfg.grid_per_block = *o.grid;
  if (o.policy) cfg.policy = parse_policy(*o.policy);
  if (o.metric) {
    if (*o.metric == "lp") {
      cfg.metric = ufhc::LpNorm{cfg.p};
    } else if (!std::holds_alternative<ufhc::FNormLadder>(cfg.metric)) {
      cfg.metric = ufhc::default_fnorm_ladder(cfg.p);
    }
  }
  return cfg;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    ufhc::write_json(out, j);
  }
}

void summarize_verdicts(const std::vector<ufhc::Verdict>& vs) {
  for (const auto& v : vs) {
    std::fprintf(stderr, "  %-28s %-12s %s\n", v.condition.c_str(), ufhc::to_string(v.status), v.witness.c_str());
  }
}

void summarize_plan(const ufhc::ConstructionPlan& pl) {
  std::fprintf(stderr, "  eta=%.6g s0=%llu N0=%llu c=%llu tau=%llu l_tau=%llu delta=%s checks=%llu\n", pl.eta,
               static_cast<unsigned long long>(pl.s0), static_cast<unsigned long long>(pl.N0),
               static_cast<unsigned long long>(pl.c), static_cast<unsigned long long>(pl.tau),
               static_cast<unsigned long long>(pl.budget.l_tau), pl.delta.str().c_str(),
               static_cast<unsigned long long>(pl.budget.scheduled_checks));
}

void summarize_certificate(const ufhc::Certificate& c) {
  std::fprintf(stderr, "  %-22s %-6s %-12s %-16s %s\n", "lambda", "block", "visits", "best density", "ok");
  for (const auto& r : c.results) {
    std::fprintf(stderr, "  %-22.17g %-6llu %5llu/%-6llu %-16s %s\n", r.lambda,
                 static_cast<unsigned long long>(r.block), static_cast<unsigned long long>(r.passed_visits),
                 static_cast<unsigned long long>(r.checked), r.density.best_density.str().c_str(),
                 r.passed() ? "yes" : "NO");
  }
  std::fprintf(stderr, "  overall: %s (%s, delta %s, %zu grid points)\n", c.overall ? "pass" : "FAIL",
               c.label.c_str(), c.delta.str().c_str(), c.grid.size());
}

ufhc::ConstructionPlan plan_from(const ufhc::ExperimentConfig& cfg) {
  ufhc::PlanOptions opts;
  opts.budget_cap = cfg.budget_cap;
  return ufhc::plan(cfg.family, cfg.K, cfg.p, cfg.U(), cfg.V(), cfg.M, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common upper-frequent-hypercyclicity laboratory for weighted backward shifts"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress the human summary on stderr");

  std::string config_path, plan_path, z_path, out_path, csv_path;
  Overrides ov;

  auto* check = app.add_subcommand("check", "evaluate the criterion hypotheses");
  check->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  check->add_option("--out", out_path, "write verdicts JSON here");

  auto* plan = app.add_subcommand("plan", "compute the construction plan");
  plan->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  plan->add_option("--out", out_path, "write plan JSON here");
  add_overrides(plan, ov);

  auto* construct = app.add_subcommand("construct", "build the common vector z");
  construct->add_option("config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  construct->add_option("--plan", plan_path, "plan JSON instead of a config")->check(CLI::ExistingFile);
  construct->add_option("--out", out_path, "write z JSON here");
  add_overrides(construct, ov);

  auto* verify = app.add_subcommand("verify", "verify z on a lambda grid");
  verify->add_option("--plan", plan_path, "plan JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--z", z_path, "z JSON (rebuilt from the plan when omitted)")->check(CLI::ExistingFile);
  verify->add_option("--out", out_path, "write certificate JSON here");
  verify->add_option("--csv", csv_path, "write the certificate CSV companion here");
  verify->add_option("--grid", ov.grid, "lambda grid points per block")->check(CLI::PositiveNumber);
  verify->add_option("--policy", ov.policy, "density horizon policy")
      ->check(CLI::IsMember({"scheduled", "exhaustive"}));

  auto* run = app.add_subcommand("run", "check, plan, build and verify");
  run->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_path, "artifact directory (defaults to the config's output.dir)");
  add_overrides(run, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ufhc::exit_code::kConfig;
  }

  try {
    if (*check) {
      const auto cfg = load_config(config_path, ov);
      const auto vs = ufhc::check_shift_criterion(cfg.family, cfg.K, cfg.p);
      json j{{"criterion", ufhc::to_json(vs)},
             {"summable_lipschitz", ufhc::to_json(ufhc::check_summable_lipschitz(cfg.family, cfg.K, cfg.p))}};
      if (std::holds_alternative<ufhc::ExpFamily>(cfg.family.kind())) {
        j["exp_family_conditions"] = ufhc::to_json(ufhc::check_exp_family_conditions(cfg.family, cfg.p));
      }
      bool applicable = true;
      for (const auto& v : vs) applicable = applicable && v.holds();
      j["applicable"] = applicable;
      emit(j, out_path);
      if (!quiet) summarize_verdicts(vs);
      return applicable ? ufhc::exit_code::kPass : ufhc::exit_code::kNotApplicable;
    }
    if (*plan) {
      const auto pl = plan_from(load_config(config_path, ov));
      emit(ufhc::to_json(pl), out_path);
      if (!quiet) summarize_plan(pl);
      return ufhc::exit_code::kPass;
    }
    if (*construct) {
      if (config_path.empty() == plan_path.empty()) {
        throw ufhc::ConfigError({"construct needs exactly one of CONFIG or --plan"});
      }
      const auto pl = plan_path.empty() ? plan_from(load_config(config_path, ov))
                                        : ufhc::parse_plan(json::parse(ufhc::read_text(plan_path)));
      const auto z = ufhc::build(pl);
      emit(ufhc::to_json(z), out_path);
      if (!quiet) std::fprintf(stderr, "  |supp z| = %zu\n", z.support_size());
      return ufhc::exit_code::kPass;
    }
    if (*verify) {
      json pj;
      try {
        pj = json::parse(ufhc::read_text(plan_path));
      } catch (const json::parse_error& e) {
        throw ufhc::ConfigError({std::string("plan: ") + e.what()});
      }
      const auto pl = ufhc::parse_plan(pj);
      const auto z = z_path.empty() ? ufhc::build(pl) : ufhc::parse_vector(json::parse(ufhc::read_text(z_path)));
      const auto grid = ufhc::make_grid(pl, ov.grid.value_or(20));
      const auto cert =
          ufhc::verify_density_certificate(pl, z, grid, parse_policy(ov.policy.value_or("scheduled")));
      emit(ufhc::to_json(cert), out_path);
      if (!csv_path.empty()) ufhc::write_text(csv_path, ufhc::certificate_csv(cert));
      if (!quiet) summarize_certificate(cert);
      return cert.overall ? ufhc::exit_code::kPass : ufhc::exit_code::kCertificateFailure;
    }
    if (*run) {
      const auto cfg = load_config(config_path, ov);
      const fs::path dir = out_path.empty() ? fs::path(cfg.output_dir) : fs::path(out_path);
      const auto outcome = ufhc::run_pipeline(cfg, dir);
      json j{{"exit_code", outcome.exit_code}, {"message", outcome.message}, {"output_dir", dir.string()}};
      std::cout << j.dump(2) << "\n";
      if (!quiet) {
        summarize_verdicts(outcome.verdicts);
        if (outcome.plan) summarize_plan(*outcome.plan);
        if (outcome.certificate) summarize_certificate(*outcome.certificate);
        if (outcome.exit_code != 0) std::fprintf(stderr, "  %s\n", outcome.message.c_str());
      }
      return outcome.exit_code;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ufhc: %s\n", e.what());
    return ufhc::exit_code_for(e);
  }
  return ufhc::exit_code::kInternal;
}
