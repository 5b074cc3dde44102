#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ufhc/criterion.hpp"

using namespace ufhc;
using SD = SequenceDescriptor;

namespace {

const WeightFamily kRatio = WeightFamily::Kind{RatioPower{}};
const WeightFamily kConst = WeightFamily::Kind{ConstantMultiple{}};
const WeightFamily kExp = WeightFamily::Kind{ExpFamily{SD::constant(2.0), SD::geometric(0.5)}};

const Verdict& find(const std::vector<Verdict>& vs, const std::string& id) {
  for (const auto& v : vs) {
    if (v.condition == id) return v;
  }
  throw std::runtime_error("missing verdict " + id);
}

// sum_{nu=1}^{terms} (w_1...w_nu)^-p by direct multiplication
double inverse_product_partial(const WeightFamily& fam, double a, double p, Index terms) {
  double prod = 1.0, sum = 0.0;
  for (Index nu = 1; nu <= terms; ++nu) {
    prod *= oracle::weight(fam, nu, a);
    sum += std::pow(prod, -p);
  }
  return sum;
}

// sum_{t=1}^{T} 1 / sum_{i<=s^t} L_i, with the inner sums taken directly
// while s^t stays small enough to enumerate.
double block_series_partial(const WeightFamily& fam, const CompactInterval& K, Index s, int T) {
  double total = 0.0;
  Index m = 1;
  double inner = 0.0;
  Index done = 0;
  for (int t = 1; t <= T; ++t) {
    m *= s;
    for (Index i = done + 1; i <= m; ++i) inner += lipschitz_constant(fam, K, i);
    done = m;
    total += 1.0 / inner;
  }
  return total;
}

}  // namespace

TEST(ShiftCriterion, RatioPowerAllHold) {
  const auto vs = check_shift_criterion(kRatio, CompactInterval(1.0, 1.1), 2.0);
  ASSERT_EQ(vs.size(), 4u);
  for (const auto& v : vs) {
    EXPECT_TRUE(v.holds()) << v.condition << ": " << v.witness;
    EXPECT_FALSE(v.witness.empty());
  }
}

TEST(ShiftCriterion, ConstantMultipleBlockDivergenceFails) {
  const CompactInterval K(2.0, 3.0);
  const auto vs = check_shift_criterion(kConst, K, 2.0);
  EXPECT_TRUE(find(vs, condition::kMonotoneWeights).holds());
  EXPECT_TRUE(find(vs, condition::kInverseProductsSummable).holds());
  EXPECT_TRUE(find(vs, condition::kLogLipschitz).holds());
  const auto& iv = find(vs, condition::kLipschitzBlockDivergence);
  EXPECT_EQ(iv.status, Status::kFails);
  EXPECT_NE(iv.witness.find("a/(s-1)"), std::string::npos);
  EXPECT_DOUBLE_EQ(iv.values.at("series_sum_s2"), 2.0);
}

TEST(ShiftCriterion, RatioPowerBelowThresholdFailsSummability) {
  const auto vs = check_shift_criterion(kRatio, CompactInterval(0.4, 0.45), 2.0);
  EXPECT_EQ(find(vs, condition::kInverseProductsSummable).status, Status::kFails);
}

TEST(ShiftCriterion, RejectsIntervalOutsideDomain) {
  EXPECT_THROW(check_shift_criterion(kConst, CompactInterval(-1.0, 2.0), 2.0), DomainError);
}

TEST(SummableLipschitz, Examples) {
  const CompactInterval K(1.0, 2.0);
  const auto e = check_summable_lipschitz(kExp, K, 2.0);
  EXPECT_TRUE(e.holds());
  EXPECT_NEAR(e.values.at("sum"), 1.0, 1e-15);
  EXPECT_EQ(check_summable_lipschitz(kRatio, K, 2.0).status, Status::kFails);
  const WeightFamily harmonic = WeightFamily::Kind{ExpFamily{SD::constant(2.0), SD::power(-1.0)}};
  EXPECT_EQ(check_summable_lipschitz(harmonic, K, 2.0).status, Status::kFails);
}

TEST(ExpFamilyConditions, Examples) {
  auto vs = check_exp_family_conditions(kExp, 2.0);
  ASSERT_EQ(vs.size(), 3u);
  for (const auto& v : vs) EXPECT_TRUE(v.holds()) << v.condition;
  EXPECT_NEAR(find(vs, condition::kAProductsSummable).values.at("sum"), 1.0 / 3.0, 1e-15);

  const WeightFamily ones = WeightFamily::Kind{ExpFamily{SD::constant(1.0), SD::geometric(0.5)}};
  vs = check_exp_family_conditions(ones, 2.0);
  EXPECT_EQ(find(vs, condition::kAProductsSummable).status, Status::kFails);

  const WeightFamily flat_b = WeightFamily::Kind{ExpFamily{SD::constant(2.0), SD::constant(1.0)}};
  vs = check_exp_family_conditions(flat_b, 2.0);
  EXPECT_EQ(find(vs, condition::kBSummable).status, Status::kFails);

  EXPECT_THROW(check_exp_family_conditions(kRatio, 2.0), DomainError);
}

TEST(CriterionProperty, SummableLipschitzImpliesBlockDivergence) {
  const CompactInterval K(0.5, 1.5);
  for (const auto& fam :
       {kExp, WeightFamily(WeightFamily::Kind{ExpFamily{SD::power(1.0, 2.0), SD::power(-3.0)}}),
        WeightFamily(WeightFamily::Kind{ExpFamily{SD::constant(3.0), SD::constant(0.0)}})}) {
    if (check_summable_lipschitz(fam, K, 2.0).holds()) {
      EXPECT_TRUE(find(check_shift_criterion(fam, K, 2.0), condition::kLipschitzBlockDivergence).holds());
    }
  }
}

TEST(CriterionProperty, ProbesAgreeWithVerdicts) {
  struct C {
    WeightFamily fam;
    CompactInterval K;
  };
  const std::vector<C> cases{{kRatio, {1.0, 1.1}}, {kRatio, {0.4, 0.45}}, {kConst, {2.0, 3.0}},
                             {kExp, {0.0, 1.0}}};
  for (const auto& c : cases) {
    const auto vs = check_shift_criterion(c.fam, c.K, 2.0);
    const auto& ii = find(vs, condition::kInverseProductsSummable);
    const double s1 = inverse_product_partial(c.fam, c.K.a, 2.0, 1000);
    const double s2 = inverse_product_partial(c.fam, c.K.a, 2.0, 100000);
    if (ii.holds()) {
      // Convergent: the certified bound caps every partial sum.
      EXPECT_LE(s2, std::pow(ii.values.at("certified_norm_bound"), 2.0) * (1 + 1e-12));
    } else {
      // Divergent at probe scale: partial sums keep growing visibly.
      EXPECT_GT(s2 - s1, 0.1);
    }
    const auto& iv = find(vs, condition::kLipschitzBlockDivergence);
    const double b10 = block_series_partial(c.fam, c.K, 2, 10);
    const double b16 = block_series_partial(c.fam, c.K, 2, 16);
    if (iv.holds()) {
      EXPECT_GT(b16 - b10, 6.0 * 0.5 / std::log(2.0) / 17.0);
    } else {
      EXPECT_LE(b16, iv.values.at("series_sum_s2") + 1e-12);
    }
  }
}

TEST(CriterionProperty, MonotoneVerdictCatchesNothingOnBuiltIns) {
  const WeightFamily tab = WeightFamily::Kind{Tabulated{{{0.5, 0.0}, {4.0, 1.0}}, RatioPower{}}};
  for (const auto& fam : {kRatio, kExp, tab}) {
    EXPECT_TRUE(find(check_shift_criterion(fam, CompactInterval(1.0, 2.0), 2.0), condition::kMonotoneWeights).holds());
  }
}
