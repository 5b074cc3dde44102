#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ufhc/sequence_space.hpp"

using namespace ufhc;

namespace {

SparseVector vec(std::vector<Entry> e) { return SparseVector::from_entries(std::move(e)); }

FNormLadder all_l2(std::size_t k) {
  FNormLadder l;
  for (std::size_t i = 0; i < k; ++i) l.seminorms.push_back({2.0, std::nullopt, 1.0});
  return l;
}

}  // namespace

TEST(SparseVector, KeepsIndicesSortedAndDropsZeros) {
  const auto x = vec({{7, 1.0}, {2, 0.0}, {3, 2.0}, {7, -1.0}, {3, 1.0}});
  ASSERT_EQ(x.support_size(), 1u);
  EXPECT_EQ(x.entries()[0].index, 3u);
  EXPECT_DOUBLE_EQ(x.entries()[0].value, 3.0);
  EXPECT_THROW(SparseVector::from_sorted({{3, 1.0}, {3, 2.0}}), DomainError);
  EXPECT_THROW(vec({{0, std::nan("")}}), DomainError);
}

TEST(PNorm, Examples) {
  EXPECT_EQ(p_norm(SparseVector{}, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(p_norm(vec({{0, 3.0}, {7, 4.0}}), 2.0), 5.0);
  EXPECT_DOUBLE_EQ(p_norm(vec({{0, 1.0}, {1, 1.0}, {2, 1.0}}), 1.0), 3.0);
  EXPECT_THROW(p_norm(SparseVector::basis(0), 0.5), DomainError);
}

TEST(FNorm, Examples) {
  const auto ladder = all_l2(3);
  EXPECT_EQ(f_norm(SparseVector{}, ladder), 0.0);
  EXPECT_EQ(f_norm(vec({{0, 3.0}, {7, 4.0}}), ladder), 1.0);
  EXPECT_EQ(f_norm(SparseVector::basis(0, 0.5), ladder), 0.5);
  EXPECT_THROW(f_norm(SparseVector{}, FNormLadder{}), DomainError);
}

TEST(FNorm, WindowedLadderMatchesDefinition) {
  // p_1 sees e_0 only, p_2 = full l^1, repeated.
  FNormLadder l{{{2.0, Index{1}, 1.0}, {1.0, std::nullopt, 0.5}}};
  const auto x = vec({{0, 0.25}, {5, 0.5}});
  const double expect = 0.5 * 0.25 + 0.25 * std::min(1.0, 0.5 * 0.75) + 0.25 * std::min(1.0, 0.5 * 0.75);
  EXPECT_NEAR(f_norm(x, l), expect, 1e-15);
}

TEST(AddScaled, Examples) {
  EXPECT_EQ(add_scaled(SparseVector::basis(0), 1.0, SparseVector::basis(1)), vec({{0, 1.0}, {1, 1.0}}));
  EXPECT_TRUE(add_scaled(SparseVector::basis(0), -1.0, SparseVector::basis(0)).is_zero());
  EXPECT_EQ(add_scaled(SparseVector::basis(3, 2.0), 0.5, SparseVector::basis(3, 2.0)), SparseVector::basis(3, 3.0));
}

TEST(InBall, Examples) {
  const auto y = vec({{0, 1.0}, {4, -2.0}});
  EXPECT_TRUE(in_ball(y, OpenBall(y, 1e-9, LpNorm{2.0})));
  EXPECT_FALSE(in_ball(y + SparseVector::basis(0, 0.5), OpenBall(y, 0.5, LpNorm{1.0})));
  EXPECT_FALSE(in_ball(SparseVector::basis(0), OpenBall(SparseVector{}, 0.5, LpNorm{2.0})));
  EXPECT_THROW(OpenBall(y, 0.0, LpNorm{2.0}), DomainError);
}

TEST(PNormProperty, TriangleInequality) {
  oracle::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    const auto x = g.sparse(20, 60, 10.0);
    const auto y = g.sparse(20, 60, 10.0);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      EXPECT_LE(p_norm(x + y, p), p_norm(x, p) + p_norm(y, p) + 1e-12);
    }
  }
}

TEST(AddScaledProperty, CommutativeAndAssociative) {
  oracle::Gen g(12);
  for (int i = 0; i < 300; ++i) {
    const auto x = g.sparse(15, 40);
    const auto y = g.sparse(15, 40);
    const auto z = g.sparse(15, 40);
    EXPECT_TRUE((x + y).approx_equal(y + x, 0.0));
    EXPECT_TRUE(((x + y) + z).approx_equal(x + (y + z), 1e-12));
  }
}

TEST(FNormProperty, ScalarMonotoneAndVanishing) {
  oracle::Gen g(13);
  FNormLadder ladder{{{2.0, Index{8}, 1.0}, {1.0, Index{32}, 3.0}, {2.0, std::nullopt, 0.5}}};
  for (int i = 0; i < 200; ++i) {
    const auto x = g.sparse(20, 60, 5.0);
    const double base = f_norm(x, ladder);
    double prev = base;
    for (int j = 1; j <= 30; ++j) {
      const double c = std::ldexp(1.0, -j);
      const double cur = f_norm(x.scaled(c), ladder);
      EXPECT_LE(cur, prev);
      prev = cur;
    }
    EXPECT_LT(prev, 1e-7);
  }
}

TEST(Metric, DominationConstant) {
  EXPECT_EQ(lp_domination_constant(LpNorm{2.0}, 2.0), 1.0);
  EXPECT_THROW(lp_domination_constant(LpNorm{1.0}, 2.0), DomainError);
  // sum 2^-k over a two-step ladder plus the repeated tail: 1/2 + 1/4 + 1/4
  EXPECT_EQ(lp_domination_constant(all_l2(2), 2.0), 1.0);
  EXPECT_THROW(lp_domination_constant(FNormLadder{{{1.0, std::nullopt, 1.0}}}, 2.0), DomainError);
}
