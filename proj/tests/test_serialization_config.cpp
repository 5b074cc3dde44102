#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ufhc/config.hpp"
#include "ufhc/pipeline.hpp"

using namespace ufhc;
using SD = SequenceDescriptor;

namespace {

const char* kMinimal = R"({
  "family": {"kind": "constant_multiple"},
  "p": 2,
  "K": [2.0, 2.0],
  "U": {"center": [], "radius": 1.0},
  "V": {"center": [[0, 1.0]], "radius": 0.5},
  "M": 1
})";

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ufhc_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesMinimalAndFillsDefaults) {
  const auto cfg = parse_config(std::string(kMinimal));
  EXPECT_EQ(cfg.family.name(), "constant_multiple");
  EXPECT_EQ(cfg.K.a, 2.0);
  EXPECT_TRUE(cfg.x.is_zero());
  EXPECT_EQ(cfg.y.at(0), 1.0);
  EXPECT_EQ(cfg.budget_cap, 1'000'000u);
  EXPECT_EQ(cfg.grid_per_block, 20u);
  EXPECT_EQ(cfg.policy, HorizonPolicy::kScheduled);
  EXPECT_TRUE(std::holds_alternative<LpNorm>(cfg.metric));
}

TEST(Config, ReportsEveryBadFieldWithItsPath) {
  auto j = json::parse(kMinimal);
  j["p"] = 0.5;
  j["K"] = {3.0, 2.0};
  j["V"]["center"] = json::array();
  j["budget_cap"] = -4;
  j.erase("M");
  try {
    parse_config(j);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    std::string all;
    for (const auto& s : e.errors()) all += s + "\n";
    for (const char* path : {"/p", "/K", "/V/center", "/budget_cap", "/M"}) {
      EXPECT_NE(all.find(path), std::string::npos) << path << " not in\n" << all;
    }
  }
}

TEST(Config, MalformedJsonIsAConfigError) {
  EXPECT_THROW(parse_config(std::string("{\"family\": ")), ConfigError);
  EXPECT_THROW(parse_config(std::string("[1, 2]")), ConfigError);
}

TEST(Config, LpMetricMustMatchP) {
  auto j = json::parse(kMinimal);
  j["metric"] = {{"kind", "lp"}, {"p", 3}};
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, RoundTripAndStableHash) {
  auto cfg = parse_config(std::string(kMinimal));
  cfg.metric = default_fnorm_ladder(2.0);
  const auto again = parse_config(to_json(cfg));
  EXPECT_EQ(to_json(again).dump(), to_json(cfg).dump());
  EXPECT_EQ(config_hash(again), config_hash(cfg));
  cfg.M = 2;
  EXPECT_NE(config_hash(again), config_hash(cfg));
}

TEST(Serialization, FamilyRoundTrips) {
  const std::vector<WeightFamily> fams{
      WeightFamily::Kind{RatioPower{}},
      WeightFamily::Kind{ConstantMultiple{}},
      WeightFamily::Kind{ExpFamily{SD::power(1.0, 2.0), SD::geometric(0.25, 3.0)}},
      WeightFamily::Kind{Tabulated{{{0.5, 0.0}, {4.0, 1.0}}, ExpFamily{SD::constant(2.0), SD::power(-2.0)}}}};
  for (const auto& f : fams) {
    Decoder d;
    const auto back = decode_family(to_json(f), "", d);
    ASSERT_TRUE(back.has_value()) << to_json(f).dump();
    EXPECT_EQ(to_json(*back).dump(), to_json(f).dump());
    for (Index n = 1; n <= 8; ++n) EXPECT_EQ(weight_at(*back, n, 1.25), weight_at(f, n, 1.25));
  }
}

TEST(Serialization, VectorAndMetricRoundTrips) {
  oracle::Gen g(61);
  for (int i = 0; i < 50; ++i) {
    const auto x = g.sparse(6, 40, 3.0);
    EXPECT_EQ(parse_vector(to_json(x)), x);
  }
  const SpaceMetric m = FNormLadder{{{1.5, Index{3}, 0.5}, {2.0, std::nullopt, 1.0}}};
  Decoder d;
  const auto back = decode_metric(to_json(m), "", 2.0, d);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(to_json(*back).dump(), to_json(m).dump());
}

TEST(Serialization, PlanRoundTripReproducesCertificate) {
  const WeightFamily fam = WeightFamily::Kind{RatioPower{}};
  const SpaceMetric l2 = LpNorm{2.0};
  const auto pl = plan(fam, CompactInterval(1.2, 1.2005), 2.0, OpenBall(SparseVector::basis(1, 0.1), 1.0, l2),
                       OpenBall(SparseVector::basis(0), 0.5, l2), 2);
  const auto back = parse_plan(json::parse(to_json(pl).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(pl).dump());
  const auto z1 = build(pl);
  const auto z2 = build(back);
  EXPECT_EQ(z1, z2);
  const auto grid = make_grid(pl, 6);
  EXPECT_EQ(to_json(verify_density_certificate(pl, z1, grid, HorizonPolicy::kScheduled)).dump(),
            to_json(verify_density_certificate(back, z2, grid, HorizonPolicy::kScheduled)).dump());
}

TEST(Serialization, CertificateCsvHasOneRowPerLambda) {
  const auto cfg = parse_config(std::string(kMinimal));
  const auto pl = plan(cfg.family, cfg.K, cfg.p, cfg.U(), cfg.V(), cfg.M);
  const auto cert = verify_density_certificate(pl, build(pl), {2.0}, HorizonPolicy::kScheduled);
  const auto csv = certificate_csv(cert);
  EXPECT_EQ(csv.rfind("lambda,t,checked_times,passed_times,best_density_num,best_density_den\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_NE(csv.find(",1,7,7,7,31"), std::string::npos) << csv;
}

TEST(Pipeline, DemoWritesAllArtifacts) {
  const auto dir = scratch("demo");
  const auto out = run_pipeline(parse_config(std::string(kMinimal)), dir);
  EXPECT_EQ(out.exit_code, exit_code::kPass) << out.message;
  for (const char* f :
       {"verdicts.json", "plan.json", "z.json", "certificate.json", "certificate.csv", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto manifest = json::parse(read_text(dir / "manifest.json"));
  EXPECT_EQ(manifest["exit_code"], 0);
  EXPECT_EQ(manifest["derived"]["c"], 6);
  EXPECT_EQ(manifest["config_hash"], config_hash(parse_config(std::string(kMinimal))));
  std::filesystem::remove_all(dir);
}

TEST(Pipeline, FailuresMapToExitCodes) {
  auto na = parse_config(std::string(kMinimal));
  na.K = CompactInterval(2.0, 3.0);
  const auto dir = scratch("na");
  auto out = run_pipeline(na, dir);
  EXPECT_EQ(out.exit_code, exit_code::kNotApplicable);
  EXPECT_TRUE(json::parse(read_text(dir / "manifest.json")).contains("verdicts"));

  auto wide = na;
  wide.family = WeightFamily::Kind{RatioPower{}};
  out = run_pipeline(wide, dir);
  EXPECT_EQ(out.exit_code, exit_code::kBudget);
  EXPECT_TRUE(json::parse(read_text(dir / "manifest.json")).contains("budget_rejection"));
  std::filesystem::remove_all(dir);
}
