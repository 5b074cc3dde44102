#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ufhc/density.hpp"

using namespace ufhc;

namespace {

VisitProfile profile_of(const std::set<Index>& A, Index horizon) {
  return VisitProfile(std::vector<Index>(A.begin(), A.end()), horizon);
}

std::set<Index> evens(Index hi) {
  std::set<Index> s;
  for (Index i = 0; i <= hi; i += 2) s.insert(i);
  return s;
}

const WeightFamily kRatio = WeightFamily::Kind{RatioPower{}};

}  // namespace

TEST(VisitingTimes, Examples) {
  const OpenBall far(SparseVector::basis(0), 0.5, LpNorm{2.0});
  EXPECT_TRUE(visiting_times(kRatio, 2.0, SparseVector{}, far, 10).times().empty());

  const OpenBall near_zero(SparseVector{}, 0.1, LpNorm{2.0});
  EXPECT_EQ(visiting_times(kRatio, 2.0, SparseVector{}, near_zero, 7).times().size(), 8u);

  const OpenBall tiny(SparseVector{}, 0.01, LpNorm{2.0});
  const auto prof = visiting_times(kRatio, 2.0, SparseVector::basis(5), tiny, 10);
  EXPECT_EQ(prof.times(), (std::vector<Index>{6, 7, 8, 9, 10}));
}

TEST(VisitingTimes, ScheduleOnlyIsSubsetOfExhaustive) {
  const auto x = SparseVector::from_entries({{3, 1.0}, {8, 0.2}, {12, 0.05}});
  const OpenBall V(SparseVector::basis(0), 0.9, LpNorm{2.0});
  const auto full = visiting_times(kRatio, 1.5, x, V, 20);
  const auto sched = visiting_times(kRatio, 1.5, x, V, std::vector<Index>{1, 3, 5, 8, 12, 20}, 20);
  for (Index t : sched.times()) {
    EXPECT_TRUE(std::binary_search(full.times().begin(), full.times().end(), t));
  }
  for (Index t : {1, 3, 5, 8, 12, 20}) {
    const bool in_full = std::binary_search(full.times().begin(), full.times().end(), Index(t));
    const bool in_sched = std::binary_search(sched.times().begin(), sched.times().end(), Index(t));
    EXPECT_EQ(in_full, in_sched);
  }
}

TEST(FiniteDensity, Examples) {
  EXPECT_EQ(finite_density(profile_of(evens(9), 9), 9), (Rational{1, 2}));
  EXPECT_EQ(finite_density(profile_of({}, 20), 13).num, 0u);
  const std::set<Index> blocks{1, 4, 5, 6, 7};  // union of [4^k, 2*4^k)
  EXPECT_EQ(finite_density(profile_of(blocks, 7), 7), (Rational{5, 8}));
  EXPECT_THROW(finite_density(profile_of({}, 5), 6), DomainError);
}

TEST(BestDensity, Examples) {
  std::set<Index> all;
  for (Index i = 0; i <= 30; ++i) all.insert(i);
  auto r = best_density_from(profile_of(all, 30), 1);
  EXPECT_EQ(r.best_density, (Rational{1, 1}));
  EXPECT_EQ(r.achieved_at, 1u);

  r = best_density_from(profile_of(evens(99), 99), 10);
  EXPECT_EQ(r.best_density, (Rational{6, 11}));
  EXPECT_EQ(r.best_density.num, 6u);
  EXPECT_EQ(r.achieved_at, 10u);

  r = best_density_from(profile_of({}, 50), 3, Rational{1, 1000});
  EXPECT_EQ(r.best_density.num, 0u);
  EXPECT_FALSE(r.passed);
  EXPECT_THROW(best_density_from(profile_of({}, 5), 6), DomainError);
}

TEST(BestDensity, ThresholdIsStrict) {
  const auto r = best_density_from(profile_of(evens(9), 9), 9, Rational{1, 2});
  EXPECT_EQ(r.best_density, (Rational{1, 2}));
  EXPECT_FALSE(r.passed);
}

TEST(DensityProperty, MatchesBruteForceSetArithmetic) {
  oracle::Gen g(31);
  for (int i = 0; i < 500; ++i) {
    const auto A = g.subset(500, g.real(0.0, 1.0));
    const auto prof = profile_of(A, 500);
    for (Index n = 0; n <= 500; n += 1 + g.uint(0, 6)) {
      const auto [c, d] = oracle::density(A, n);
      const auto q = finite_density(prof, n);
      ASSERT_EQ(q.num, c);
      ASSERT_EQ(q.den, d);
    }
    const Index M = g.uint(0, 500);
    const auto want = oracle::best_density(A, M, 500);
    const auto got = best_density_from(prof, M);
    ASSERT_EQ(got.best_density.num, want.num);
    ASSERT_EQ(got.best_density.den, want.den);
    ASSERT_EQ(got.achieved_at, want.at);
  }
}

TEST(DensityProperty, SupersetNeverLowersBestDensity) {
  oracle::Gen g(32);
  for (int i = 0; i < 200; ++i) {
    auto A = g.subset(300, 0.2);
    const Index M = g.uint(0, 300);
    const auto before = best_density_from(profile_of(A, 300), M).best_density;
    for (int k = 0; k < 10; ++k) A.insert(g.uint(0, 300));
    EXPECT_GE(best_density_from(profile_of(A, 300), M).best_density, before);
  }
}

TEST(DensityProperty, EvensHitOneHalfAtOddHorizons) {
  const auto prof = profile_of(evens(401), 401);
  for (Index j = 1; j <= 200; ++j) EXPECT_EQ(finite_density(prof, 2 * j - 1), (Rational{1, 2}));
}

TEST(Rational, ExactComparisonNearOne) {
  const std::uint64_t big = (std::uint64_t{1} << 62) + 1;
  EXPECT_LT((Rational{big - 1, big}), (Rational{big, big + 1}));
  EXPECT_EQ((Rational{3, 9}), (Rational{1, 3}));
}
