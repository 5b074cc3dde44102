#pragma once

// check -> plan -> build -> verify, writing every artifact plus a manifest.

#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ufhc/config.hpp"
#include "ufhc/constructor.hpp"
#include "ufhc/criterion.hpp"
#include "ufhc/errors.hpp"
#include "ufhc/serialization.hpp"
#include "ufhc/verifier.hpp"

namespace ufhc {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kInternal = 1;
inline constexpr int kCertificateFailure = 2;
inline constexpr int kNotApplicable = 3;
inline constexpr int kBudget = 4;
inline constexpr int kConfig = 5;
inline constexpr int kNonSummable = 6;
}  // namespace exit_code

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NotApplicable*>(&e)) return exit_code::kNotApplicable;
  if (dynamic_cast<const BudgetExceeded*>(&e)) return exit_code::kBudget;
  if (dynamic_cast<const NonSummable*>(&e)) return exit_code::kNonSummable;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return exit_code::kConfig;
  if (dynamic_cast<const json::exception*>(&e)) return exit_code::kConfig;
  return exit_code::kInternal;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read " + path.string()});
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunOutcome {
  int exit_code = exit_code::kInternal;
  std::string message;
  std::vector<Verdict> verdicts;
  std::optional<ConstructionPlan> plan;
  std::optional<SparseVector> z;
  std::optional<Certificate> certificate;
  std::vector<std::filesystem::path> written;
};

inline json derived_parameters(const ConstructionPlan& pl) {
  return {{"J", pl.J},     {"J_x", pl.J_x}, {"eta", pl.eta}, {"s0", pl.s0},
          {"N0", pl.N0},   {"c", pl.c},     {"tau", pl.tau}, {"delta", to_json(pl.delta)},
          {"budget", to_json(pl.budget)}};
}

inline RunOutcome run_pipeline(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                               const VerifyOptions& vopts = {}) {
  RunOutcome out;
  json manifest{{"config_hash", config_hash(cfg)},
                {"config", to_json(cfg)},
                {"metric", std::holds_alternative<LpNorm>(cfg.metric) ? "lp" : "fnorm"},
                {"horizon_policy", to_string(cfg.policy)}};
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    write_text(path, text);
    out.written.push_back(path);
  };
  try {
    out.verdicts = check_shift_criterion(cfg.family, cfg.K, cfg.p);
    emit("verdicts.json", to_json(out.verdicts).dump(2) + "\n");

    PlanOptions popts;
    popts.budget_cap = cfg.budget_cap;
    out.plan = plan(cfg.family, cfg.K, cfg.p, cfg.U(), cfg.V(), cfg.M, popts);
    emit("plan.json", to_json(*out.plan).dump(2) + "\n");
    manifest["derived"] = derived_parameters(*out.plan);

    out.z = build(*out.plan);
    emit("z.json", to_json(*out.z).dump() + "\n");

    const auto grid = make_grid(*out.plan, cfg.grid_per_block);
    out.certificate = verify_density_certificate(*out.plan, *out.z, grid, cfg.policy, vopts);
    emit("certificate.json", to_json(*out.certificate).dump(2) + "\n");
    emit("certificate.csv", certificate_csv(*out.certificate));

    out.exit_code = out.certificate->overall ? exit_code::kPass : exit_code::kCertificateFailure;
    out.message = out.certificate->overall ? "certificate passed" : "certificate failed";
  } catch (const std::exception& e) {
    out.exit_code = exit_code_for(e);
    out.message = e.what();
    if (const auto* b = dynamic_cast<const BudgetExceeded*>(&e)) {
      manifest["budget_rejection"] = {{"tau", b->tau()}, {"l_tau", b->l_tau()}};
    }
    if (const auto* na = dynamic_cast<const NotApplicable*>(&e)) {
      manifest["verdicts"] = to_json(na->verdicts());
    }
  }
  manifest["exit_code"] = out.exit_code;
  manifest["message"] = out.message;
  json files = json::array();
  for (const auto& p : out.written) files.push_back(p.filename().string());
  manifest["files"] = files;
  emit("manifest.json", manifest.dump(2) + "\n");
  return out;
}

}  // namespace ufhc
