#pragma once

// Empirical certificate for a built common vector z: membership in U, every
// scheduled visit T^{l_t + l s0}(lambda) z in V, and a finite-horizon visit
// density above delta = 1/(2 + s0), checked on a finite lambda-grid. A grid
// certificate is evidence, not a proof for every lambda in K.

#include <algorithm>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "ufhc/constructor.hpp"
#include "ufhc/density.hpp"
#include "ufhc/errors.hpp"
#include "ufhc/sequence_space.hpp"
#include "ufhc/weight_family.hpp"

namespace ufhc {

enum class HorizonPolicy { kScheduled, kExhaustive };

inline const char* to_string(HorizonPolicy p) { return p == HorizonPolicy::kScheduled ? "scheduled" : "exhaustive"; }

struct VisitCount {
  double lambda = 0.0;
  Index block = 0;
  Index checked = 0;
  Index passed = 0;
  std::vector<Index> landed;  // scheduled times whose orbit point lies in V

  bool all_passed() const noexcept { return checked == passed; }
};

struct LambdaResult {
  double lambda = 0.0;
  Index block = 0;
  bool membership = false;
  Index checked = 0;
  Index passed_visits = 0;
  Index horizon = 0;
  DensityReport density;

  bool passed() const noexcept { return membership && checked == passed_visits && density.passed; }
};

struct Certificate {
  std::vector<double> grid;
  std::vector<LambdaResult> results;
  Rational delta;
  HorizonPolicy policy = HorizonPolicy::kScheduled;
  bool overall = true;
  bool degenerate = false;  // empty grid: overall holds vacuously
  std::string label = "empirical";
  double grid_resolution = 0.0;  // widest gap between consecutive grid points
};

struct VerifyOptions {
  // Upper bound on horizon * |supp z| for a single exhaustive scan.
  double exhaustive_cap = 5e7;
  unsigned threads = 0;  // 0 = hardware concurrency
};

inline bool verify_membership(const SparseVector& z, const OpenBall& U) { return in_ball(z, U); }

// `per_block` evenly spaced points on every [lambda_{t-1}, lambda_t], endpoints
// included, sorted and deduplicated.
inline std::vector<double> make_grid(const ConstructionPlan& pl, Index per_block) {
  if (per_block == 0) throw DomainError("grid needs at least one point per block");
  std::vector<double> grid;
  for (Index t = 1; t <= pl.tau; ++t) {
    const double lo = pl.lambda_points[t - 1];
    const double hi = pl.lambda_points[t];
    grid.push_back(lo);
    for (Index i = 1; i + 1 < per_block; ++i) {
      grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(per_block - 1));
    }
    grid.push_back(hi);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Block t with lambda in [lambda_{t-1}, lambda_t]; a boundary point lambda_t
// belongs to block t.
inline Index block_of(const ConstructionPlan& pl, double lambda) {
  if (!pl.K.contains(lambda)) throw DomainError("grid parameter outside [a, b]");
  auto it = std::lower_bound(pl.lambda_points.begin() + 1, pl.lambda_points.end(), lambda);
  return static_cast<Index>(it - pl.lambda_points.begin());
}

inline std::vector<Index> scheduled_times(const ConstructionPlan& pl, Index t) {
  const Index lt = pl.block_start(t);
  std::vector<Index> times;
  times.reserve(lt + 1);
  for (Index l = 0; l <= lt; ++l) times.push_back(lt + l * pl.s0);
  return times;
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline void require_sorted_grid(const std::vector<double>& grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("lambda grid must be sorted");
}

}  // namespace detail

inline std::vector<VisitCount> verify_scheduled_visits(const ConstructionPlan& pl, const SparseVector& z,
                                                       const std::vector<double>& grid, unsigned threads = 0) {
  detail::require_sorted_grid(grid);
  std::vector<VisitCount> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i].block = block_of(pl, grid[i]);
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    auto& vc = out[i];
    vc.lambda = grid[i];
    const auto times = scheduled_times(pl, vc.block);
    const auto profile = visiting_times(pl.family, vc.lambda, z, pl.V, times, times.back());
    vc.checked = times.size();
    vc.passed = profile.times().size();
    vc.landed = profile.times();
  });
  return out;
}

inline Certificate verify_density_certificate(const ConstructionPlan& pl, const SparseVector& z,
                                              const std::vector<double>& grid, HorizonPolicy policy,
                                              const VerifyOptions& opts = {}) {
  detail::require_sorted_grid(grid);
  Certificate cert;
  cert.grid = grid;
  cert.delta = pl.delta;
  cert.policy = policy;
  cert.degenerate = grid.empty();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    cert.grid_resolution = std::max(cert.grid_resolution, grid[i] - grid[i - 1]);
  }
  const bool member = verify_membership(z, pl.U);
  const auto visits = verify_scheduled_visits(pl, z, grid, opts.threads);

  if (policy == HorizonPolicy::kExhaustive) {
    for (const auto& vc : visits) {
      const double cost = static_cast<double>(scheduled_times(pl, vc.block).back() + 1) *
                          static_cast<double>(z.support_size());
      if (cost > opts.exhaustive_cap) {
        throw BudgetExceeded("exhaustive scan exceeds its cap; use the scheduled policy", pl.tau,
                             pl.budget.l_tau);
      }
    }
  }

  cert.results.resize(grid.size());
  detail::parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    const auto& vc = visits[i];
    auto& r = cert.results[i];
    r.lambda = vc.lambda;
    r.block = vc.block;
    r.membership = member;
    r.checked = vc.checked;
    r.passed_visits = vc.passed;
    const Index lt = pl.block_start(vc.block);
    r.horizon = lt + lt * pl.s0;
    const VisitProfile profile = policy == HorizonPolicy::kScheduled
                                     ? VisitProfile(vc.landed, r.horizon)
                                     : visiting_times(pl.family, vc.lambda, z, pl.V, r.horizon);
    r.density = best_density_from(profile, pl.M, pl.delta);
  });
  cert.overall = std::all_of(cert.results.begin(), cert.results.end(),
                             [](const LambdaResult& r) { return r.passed(); });
  return cert;
}

}  // namespace ufhc
