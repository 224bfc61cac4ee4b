#include "scg/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace scg::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDataStreamSalt = 0xDA7A5EEDull;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int uniform_index(Rng& rng, int bound) {
  return std::min(static_cast<int>(rng.uniform() * bound), bound - 1);
}

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kCg: return "cg";
    case SolverKind::kRorCg: return "ror-cg";
    case SolverKind::kAwayCg: return "away-cg";
    case SolverKind::kPgdOracle: return "pgd-oracle";
  }
  throw std::logic_error("unknown solver kind");
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "cg") return SolverKind::kCg;
  if (name == "ror-cg") return SolverKind::kRorCg;
  if (name == "away-cg") return SolverKind::kAwayCg;
  if (name == "pgd-oracle") return SolverKind::kPgdOracle;
  throw std::invalid_argument("unknown solver '" + name +
                              "' (expected cg, ror-cg, away-cg or pgd-oracle)");
}

std::string to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::kQuadratic ? "quadratic" : "matcomp";
}

ObjectiveKind objective_from_string(const std::string& name) {
  if (name == "quadratic") return ObjectiveKind::kQuadratic;
  if (name == "matcomp") return ObjectiveKind::kMatComp;
  throw std::invalid_argument("unknown objective '" + name + "' (expected quadratic or matcomp)");
}

void ExperimentConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
  if (!(theta > 0.0)) throw std::invalid_argument("config: theta must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be positive");
  if (!(subsample > 0.0 && subsample <= 1.0))
    throw std::invalid_argument("config: subsample must lie in (0, 1]");
  if (seeds.empty()) throw std::invalid_argument("config: at least one seed is required");
  if (solvers.empty()) throw std::invalid_argument("config: at least one solver is required");
  if (trace_every < 1) throw std::invalid_argument("config: trace_every must be >= 1");
  if (synth.d1 < 1 || synth.d2 < 1) throw std::invalid_argument("config: synth dims must be >= 1");
  if (synth.rank < 1 || synth.rank > std::min(synth.d1, synth.d2))
    throw std::invalid_argument("config: synth rank must lie in [1, min(d1, d2)]");
  if (synth.n < 0 || static_cast<long long>(synth.n) > static_cast<long long>(synth.d1) * synth.d2)
    throw std::invalid_argument("config: synth n must lie in [0, d1*d2]");
  if (synth.noise < 0.0) throw std::invalid_argument("config: synth noise must be >= 0");
}

MatCompDataset parse_ratings(const std::string& path, double subsample, double theta, Rng& rng) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ratings file: " + path);

  std::vector<Observation> kept;
  std::unordered_map<long long, int> first_line;  // (user, item) -> line number
  int max_user = 0, max_item = 0;
  int line_no = 0;
  bool any = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string user_s, item_s, rating_s, timestamp_s;
    if (!std::getline(fields, user_s, '\t') || !std::getline(fields, item_s, '\t') ||
        !std::getline(fields, rating_s, '\t') || !std::getline(fields, timestamp_s))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed line (expected user<TAB>item<TAB>rating<TAB>timestamp)");
    int user = 0, item = 0;
    double rating = 0.0;
    try {
      std::size_t pos = 0;
      user = std::stoi(user_s, &pos);
      if (pos != user_s.size()) throw std::invalid_argument("trailing");
      item = std::stoi(item_s, &pos);
      if (pos != item_s.size()) throw std::invalid_argument("trailing");
      rating = std::stod(rating_s, &pos);
      if (pos != rating_s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed line");
    }
    if (user < 1 || item < 1)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ids must be 1-indexed positive integers");
    any = true;
    max_user = std::max(max_user, user);
    max_item = std::max(max_item, item);

    const long long key = static_cast<long long>(user) * (1LL << 32) + item;
    auto [it, inserted] = first_line.emplace(key, line_no);
    if (!inserted)
      throw std::runtime_error(path + ": duplicate (user " + std::to_string(user) + ", item " +
                               std::to_string(item) + ") at lines " + std::to_string(it->second) +
                               " and " + std::to_string(line_no));

    const bool keep = rng.uniform() < subsample;
    if (keep) kept.push_back({user - 1, item - 1, rating});
  }
  if (!any) throw std::runtime_error("ratings file is empty: " + path);
  return MatCompDataset(max_user, max_item, std::move(kept), theta);
}

SynthMatComp synth_matcomp(int d1, int d2, int rank, int n, double noise, double theta_target,
                           Rng& rng) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("synth_matcomp: dims must be positive");
  if (rank < 1 || rank > std::min(d1, d2))
    throw std::invalid_argument("synth_matcomp: rank must lie in [1, min(d1, d2)]");
  if (static_cast<long long>(n) > static_cast<long long>(d1) * d2)
    throw std::invalid_argument("synth_matcomp: n exceeds d1*d2");
  if (!(theta_target > 0.0)) throw std::invalid_argument("synth_matcomp: theta must be positive");
  if (d1 > kDenseOracleCap || d2 > kDenseOracleCap)
    throw std::invalid_argument("synth_matcomp: desk-scale generator refuses beyond the oracle cap");

  DenseMatrix a(d1, rank), b(d2, rank);
  for (double& v : a.data()) v = rng.normal();
  for (double& v : b.data()) v = rng.normal();
  DenseMatrix z(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      double s = 0.0;
      for (int r = 0; r < rank; ++r) s += a(i, r) * b(j, r);
      z(i, j) = s;
    }

  const Vec sv = singular_values(z);
  double nuclear = 0.0;
  for (double s : sv) nuclear += s;
  if (nuclear < 1e-12) throw std::runtime_error("synth_matcomp: degenerate ground truth");
  for (double& v : z.data()) v *= theta_target / nuclear;

  const int total = d1 * d2;
  std::vector<int> cells(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) cells[static_cast<std::size_t>(i)] = i;
  std::vector<Observation> obs;
  obs.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const int pick = l + uniform_index(rng, total - l);
    std::swap(cells[static_cast<std::size_t>(l)], cells[static_cast<std::size_t>(pick)]);
    const int cell = cells[static_cast<std::size_t>(l)];
    const int i = cell / d2, j = cell % d2;
    obs.push_back({i, j, z(i, j) + (noise > 0.0 ? noise * rng.normal() : 0.0)});
  }
  return {MatCompDataset(d1, d2, std::move(obs), theta_target), std::move(z)};
}

std::vector<RankOneTerm> synth_quadratic_target(int dim, int rank, Rng& rng) {
  if (rank < 1 || rank > dim) throw std::invalid_argument("synth_quadratic_target: bad rank");
  Vec eigenvalues(static_cast<std::size_t>(rank));
  double sum = 0.0;
  for (double& v : eigenvalues) {
    v = 0.5 + rng.uniform();
    sum += v;
  }
  for (double& v : eigenvalues) v /= sum;

  std::vector<Vec> basis;
  while (static_cast<int>(basis.size()) < rank) {
    Vec q(static_cast<std::size_t>(dim));
    for (double& v : q) v = rng.normal();
    for (const Vec& prev : basis) axpy(-dot(prev, q), prev, q);
    const double n = norm(q);
    if (n < 1e-8) continue;
    scale(q, 1.0 / n);
    basis.push_back(std::move(q));
  }
  std::vector<RankOneTerm> target;
  for (int r = 0; r < rank; ++r)
    target.push_back({eigenvalues[static_cast<std::size_t>(r)], std::move(basis[static_cast<std::size_t>(r)])});
  return target;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << "iter,elapsed_ms,objective,fw_gap,k,eta,eta_tilde,xi,ev_iters\n";
  for (const TraceRecord& r : trace.records) {
    out << r.iter << ',' << format_number(r.elapsed_ms) << ',' << format_number(r.objective) << ','
        << format_number(r.fw_gap) << ',' << r.k << ',' << format_number(r.eta) << ','
        << format_number(r.eta_tilde) << ',' << format_number(r.xi) << ',' << r.ev_iters << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "iter,elapsed_ms,objective,fw_gap,k,eta,eta_tilde,xi,ev_iters")
    throw std::runtime_error("unexpected trace header in " + path);
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error("malformed trace row in " + path);
    TraceRecord r;
    r.iter = std::stoi(cells[0]);
    r.elapsed_ms = std::stod(cells[1]);
    r.objective = std::stod(cells[2]);
    r.fw_gap = std::stod(cells[3]);
    r.k = std::stoi(cells[4]);
    r.eta = std::stod(cells[5]);
    r.eta_tilde = std::stod(cells[6]);
    r.xi = std::stod(cells[7]);
    r.ev_iters = std::stoi(cells[8]);
    records.push_back(r);
  }
  return records;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);

  Rng data_rng(cfg.seeds.front() ^ kDataStreamSalt);
  std::unique_ptr<Objective> objective;
  if (cfg.objective == ObjectiveKind::kQuadratic) {
    objective = std::make_unique<QuadraticObjective>(
        cfg.synth.d1, synth_quadratic_target(cfg.synth.d1, cfg.synth.rank, data_rng));
  } else if (cfg.data_path) {
    objective = std::make_unique<MatCompObjective>(
        parse_ratings(*cfg.data_path, cfg.subsample, cfg.theta, data_rng), cfg.beta);
  } else {
    objective = std::make_unique<MatCompObjective>(
        synth_matcomp(cfg.synth.d1, cfg.synth.d2, cfg.synth.rank, cfg.synth.n, cfg.synth.noise,
                      cfg.theta, data_rng)
            .dataset,
        cfg.beta);
  }
  const Objective& obj = *objective;

  struct Task {
    SolverKind solver;
    std::uint64_t seed;
    std::string file;
  };
  std::vector<Task> tasks;
  for (SolverKind solver : cfg.solvers)
    for (std::uint64_t seed : cfg.seeds)
      tasks.push_back({solver, seed,
                       (fs::path(cfg.out_dir) /
                        (to_string(solver) + "_seed" + std::to_string(seed) + ".csv"))
                           .string()});

  auto run_task = [&](const Task& task) {
    SolverConfig sc;
    sc.max_iters = cfg.iterations;
    sc.seed = task.seed;
    sc.selection = cfg.selection;
    sc.line_search = cfg.line_search;
    sc.trace_every = cfg.trace_every;
    sc.tol = cfg.tol;
    RunTrace trace = [&]() {
      switch (task.solver) {
        case SolverKind::kCg: return run_cg(obj, sc);
        case SolverKind::kRorCg: return run_ror_cg(obj, sc);
        case SolverKind::kAwayCg: return run_away_cg(obj, sc);
        case SolverKind::kPgdOracle: return run_projected_gradient(obj, cfg.iterations);
      }
      throw std::logic_error("unknown solver kind");
    }();
    write_trace_csv(task.file, trace);
  };

  std::vector<std::future<void>> futures;
  futures.reserve(tasks.size());
  for (const Task& task : tasks)
    futures.push_back(std::async(std::launch::async, run_task, std::cref(task)));
  for (auto& f : futures) f.get();

  // summary recomputed from the files themselves
  const std::string summary_path = (fs::path(cfg.out_dir) / "summary.csv").string();
  std::ofstream summary(summary_path, std::ios::trunc);
  if (!summary) throw std::runtime_error("cannot write summary file: " + summary_path);
  summary << "iter,solver,median_objective,mean_objective\n";
  for (SolverKind solver : cfg.solvers) {
    std::map<int, std::vector<double>> by_iter;
    for (const Task& task : tasks) {
      if (task.solver != solver) continue;
      for (const TraceRecord& r : read_trace_csv(task.file)) by_iter[r.iter].push_back(r.objective);
    }
    for (const auto& [iter, values] : by_iter) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      summary << iter << ',' << to_string(solver) << ',' << format_number(median(values)) << ','
              << format_number(mean) << '\n';
    }
  }
  if (!summary) throw std::runtime_error("write failed: " + summary_path);

  ExperimentResult result;
  for (const Task& task : tasks) result.trace_files.push_back(task.file);
  result.summary_file = summary_path;
  return result;
}

TolSchedule parse_tol(const std::string& text) {
  if (text == "theorem") return TolSchedule::theorem();
  if (text == "power") return TolSchedule::fixed_power();
  if (text.rfind("power:", 0) == 0) return TolSchedule::fixed_power(std::stod(text.substr(6)));
  if (text.rfind("const:", 0) == 0) return TolSchedule::constant(std::stod(text.substr(6)));
  throw std::invalid_argument("unknown tol schedule '" + text +
                              "' (expected theorem, power:P or const:X)");
}

Selection parse_selection(const std::string& text) {
  if (text == "random") return Selection::kRandom;
  if (text == "greedy") return Selection::kGreedy;
  throw std::invalid_argument("unknown selection '" + text + "' (expected random or greedy)");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("objective")) cfg.objective = objective_from_string(j["objective"]);
    if (j.contains("solvers")) {
      cfg.solvers.clear();
      if (j["solvers"].is_string()) {
        std::istringstream list(j["solvers"].get<std::string>());
        std::string name;
        while (std::getline(list, name, ',')) cfg.solvers.push_back(solver_from_string(name));
      } else {
        for (const auto& s : j["solvers"]) cfg.solvers.push_back(solver_from_string(s));
      }
    }
    if (j.contains("data")) cfg.data_path = j["data"].get<std::string>();
    if (j.contains("synth")) {
      const auto& s = j["synth"];
      cfg.synth.d1 = s.value("d1", cfg.synth.d1);
      cfg.synth.d2 = s.value("d2", cfg.synth.d2);
      cfg.synth.rank = s.value("rank", cfg.synth.rank);
      cfg.synth.n = s.value("n", cfg.synth.n);
      cfg.synth.noise = s.value("noise", cfg.synth.noise);
    }
    cfg.theta = j.value("theta", cfg.theta);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.iterations = j.value("iterations", cfg.iterations);
    if (j.contains("seeds")) {
      cfg.seeds.clear();
      for (const auto& s : j["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    if (j.contains("selection")) cfg.selection = parse_selection(j["selection"]);
    if (j.contains("line_search")) {
      if (j["line_search"].is_boolean())
        cfg.line_search = j["line_search"].get<bool>();
      else
        cfg.line_search = j["line_search"].get<std::string>() == "on";
    }
    if (j.contains("tol")) cfg.tol = parse_tol(j["tol"].get<std::string>());
    cfg.subsample = j.value("subsample", cfg.subsample);
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    cfg.trace_every = j.value("trace_every", cfg.trace_every);
  } catch (const json::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
  return cfg;
}

}  // namespace scg::harness
