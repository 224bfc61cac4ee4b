#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "scg/eigensolver.hpp"
#include "scg/iterate.hpp"
#include "scg/objectives.hpp"
#include "scg/schedules.hpp"

namespace scg {

enum class Selection { kRandom, kGreedy };

struct SolverConfig {
  int max_iters = 100;
  std::uint64_t seed = 0;
  Selection selection = Selection::kRandom;
  bool line_search = false;
  std::optional<double> stop_gap;         // stop once the traced duality gap falls below
  std::optional<double> compaction_tol;   // near-duplicate merge tolerance; unset = off
  int trace_every = 1;
  StepSchedule steps{};
  TolSchedule tol{};
  int ev_max_iters = 512;                 // per-call cap for the eigenvector solver
};

struct TraceRecord {
  int iter = 0;
  double elapsed_ms = 0.0;
  double objective = 0.0;
  double fw_gap = 0.0;
  int k = 0;            // decomposition size of X_t
  double eta = 0.0;     // scheduled step-size
  double eta_tilde = 0.0;  // step actually taken (effective step or line-search result)
  double xi = 0.0;
  int ev_iters = 0;
  bool ev_converged = true;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  SpectraIterate final_iterate;
};

// called with (t, X_t) at the top of every iteration; test hook
using IterateObserver = std::function<void(int, const SpectraIterate&)>;

// Standard conditional gradient: v_t from the leading eigenvector of -grad,
// global step X + eta (v vᵀ - X). Scheduled steps are clamped to [0, 1];
// line search replaces them when enabled.
RunTrace run_cg(const Objective& obj, const SolverConfig& cfg, const IterateObserver& observer = {});

// Randomized rank-one-regularized conditional gradient: sample a component by
// weight (or greedily), solve the rank-one-perturbed eigenvector problem
// -grad + eta_t beta x x ᵀ, and move mass eta_tilde from the sampled component
// to the new direction. Line search, when enabled, searches s in [0, a_it].
RunTrace run_ror_cg(const Objective& obj, const SolverConfig& cfg,
                    const IterateObserver& observer = {});

// Conditional gradient with away steps: picks the better of the forward
// direction (toward v vᵀ) and the away direction (away from the worst
// component), always with exact line search capped at the feasibility limit.
RunTrace run_away_cg(const Objective& obj, const SolverConfig& cfg,
                     const IterateObserver& observer = {});

struct RankOneDirection {
  Vec v;
  std::size_t component;  // direction v vᵀ - x_c x_cᵀ
};
struct GlobalDirection {
  Vec v;                  // direction v vᵀ - X
};
struct AwayDirection {
  std::size_t component;  // direction X - x_c x_cᵀ
};
using SearchDirection = std::variant<RankOneDirection, GlobalDirection, AwayDirection>;

// the stepped iterate X + s * D for the given direction
SpectraIterate apply_direction(const SpectraIterate& x, const SearchDirection& dir, double s);

// Exact minimizer of the quadratic-in-s restriction phi(s) = f(X + s D) over
// [0, s_max]: phi'(0) comes from a gradient inner product, phi''(0) from two
// extra evaluations. Guarantees phi(s*) <= phi(0).
double line_search(const Objective& obj, const SpectraIterate& x, const SymmetricOperator& grad,
                   const SearchDirection& dir, double s_max);

// Frank-Wolfe duality certificate (X - v vᵀ) • grad with v a 1e-8-accurate
// leading eigenvector of -grad; upper-bounds f(X) - f(X*) up to that tolerance.
double fw_gap(const Objective& obj, const SpectraIterate& x);
double fw_gap(const Objective& obj, const SpectraIterate& x, const SymmetricOperator& grad_at_x,
              Rng& rng, int ev_max_iters);

inline constexpr double kFwGapXi = 1e-8;

}  // namespace scg
