#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scg/objectives.hpp"
#include "scg/oracle.hpp"
#include "scg/rng.hpp"
#include "scg/solvers.hpp"

namespace scg::harness {

enum class ObjectiveKind { kQuadratic, kMatComp };
enum class SolverKind { kCg, kRorCg, kAwayCg, kPgdOracle };

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);
std::string to_string(ObjectiveKind kind);
ObjectiveKind objective_from_string(const std::string& name);

// "theorem", "power:P" (or "power"), "const:X"
TolSchedule parse_tol(const std::string& text);
// "random" or "greedy"
Selection parse_selection(const std::string& text);

struct SynthSpec {
  int d1 = 8;
  int d2 = 8;
  int rank = 2;
  int n = 32;
  double noise = 0.0;
};

struct ExperimentConfig {
  ObjectiveKind objective = ObjectiveKind::kQuadratic;
  std::vector<SolverKind> solvers = {SolverKind::kRorCg};
  std::optional<std::string> data_path;  // MovieLens-style tab-separated ratings
  SynthSpec synth{};                     // used when data_path is absent
  double theta = 1.0;
  double beta = 1.0;                     // matcomp smoothness override
  int iterations = 200;
  std::vector<std::uint64_t> seeds = {0};
  Selection selection = Selection::kRandom;
  bool line_search = false;
  TolSchedule tol{};
  double subsample = 1.0;                // keep probability per line, (0, 1]
  std::string out_dir = "out";
  int trace_every = 1;

  void validate() const;
};

// `user<TAB>item<TAB>rating<TAB>timestamp` with 1-indexed ids; returns a
// 0-indexed dataset with d1/d2 from the max observed ids. Duplicate
// (user, item) pairs are rejected with both line numbers; subsampling keeps
// each line with an independent coin from `rng`.
MatCompDataset parse_ratings(const std::string& path, double subsample, double theta, Rng& rng);

struct SynthMatComp {
  MatCompDataset dataset;
  DenseMatrix ground_truth;  // Z*, nuclear norm scaled to theta_target
};

// Rank-r ground truth ABᵀ with Gaussian factors, scaled so ||Z*||_* equals
// theta_target; n distinct uniformly drawn entries observed with N(0, noise²)
// additive noise.
SynthMatComp synth_matcomp(int d1, int d2, int rank, int n, double noise, double theta_target,
                           Rng& rng);

// target for the synthetic quadratic instance: rank-r, random orthonormal
// eigenbasis, eigenvalues in [0.5, 1.5)/sum
std::vector<RankOneTerm> synth_quadratic_target(int dim, int rank, Rng& rng);

// fixed CSV schema: iter,elapsed_ms,objective,fw_gap,k,eta,eta_tilde,xi,ev_iters
void write_trace_csv(const std::string& path, const RunTrace& trace);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

struct ExperimentResult {
  std::vector<std::string> trace_files;
  std::string summary_file;
};

// One trace CSV per (solver, seed) plus summary.csv with per-iteration median
// and mean objective across seeds. Runs execute as independent parallel tasks.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// JSON config file mirroring the CLI flags
ExperimentConfig load_config(const std::string& path);

}  // namespace scg::harness
