#include "scg/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scg {

namespace {

constexpr std::uint64_t kDiagStreamSalt = 0x9e3779b97f4a7c15ull;
constexpr int kRenormalizeEvery = 1000;

struct StepOutcome {
  double eta = 0.0;
  double step_used = 0.0;
  double xi = 0.0;
  int ev_iters = 0;
  bool ev_converged = true;
};

void check_config(const SolverConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("solver config: max_iters must be >= 1");
  if (cfg.trace_every < 1) throw std::invalid_argument("solver config: trace_every must be >= 1");
  if (cfg.ev_max_iters < 1) throw std::invalid_argument("solver config: ev_max_iters must be >= 1");
}

SpectraIterate initial_iterate(const Objective& obj, const SolverConfig& cfg, Rng& rng) {
  // X_1 = x_1 x_1ᵀ with x_1 an xi_0-accurate leading eigenvector of -grad at a
  // random rank-one warm start
  SpectraIterate warm = SpectraIterate::rank_one(rng.unit_vector(obj.dim()));
  const double xi0 = cfg.tol.xi_at(obj.params(), 0);
  EvResult ev = approx_leading_ev(obj.gradient(warm).scaled(-1.0), xi0, rng, cfg.ev_max_iters);
  return SpectraIterate::rank_one(std::move(ev.vector));
}

template <typename StepFn>
RunTrace run_loop(const Objective& obj, const SolverConfig& cfg, const IterateObserver& observer,
                  StepFn&& step) {
  check_config(cfg);
  Rng rng(cfg.seed);
  Rng diag_rng(cfg.seed ^ kDiagStreamSalt);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&start]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  SpectraIterate x = initial_iterate(obj, cfg, rng);
  std::vector<TraceRecord> records;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    if (observer) observer(t, x);
    auto [value, grad] = obj.value_grad(x);
    const int k = static_cast<int>(x.size());
    const bool traced = ((t - 1) % cfg.trace_every == 0) || t == cfg.max_iters;

    double gap = 0.0;
    if (traced) gap = fw_gap(obj, x, grad, diag_rng, cfg.ev_max_iters);
    if (traced && cfg.stop_gap && gap <= *cfg.stop_gap) {
      records.push_back({t, elapsed_ms(), value, gap, k, cfg.steps.eta_at(t), 0.0,
                         cfg.tol.xi_at(obj.params(), t), 0, true});
      return {std::move(records), std::move(x)};
    }

    StepOutcome out = step(t, x, grad, rng);
    if (traced)
      records.push_back({t, elapsed_ms(), value, gap, k, out.eta, out.step_used, out.xi,
                         out.ev_iters, out.ev_converged});

    if (t % kRenormalizeEvery == 0) x.renormalize();
    if (cfg.compaction_tol) x = compact(x, *cfg.compaction_tol);
  }
  return {std::move(records), std::move(x)};
}

}  // namespace

RunTrace run_cg(const Objective& obj, const SolverConfig& cfg, const IterateObserver& observer) {
  return run_loop(obj, cfg, observer,
                  [&](int t, SpectraIterate& x, const SymmetricOperator& grad, Rng& rng) {
                    const double eta = cfg.steps.eta_at(t);
                    const double xi = cfg.tol.xi_at(obj.params(), t);
                    EvResult ev = approx_leading_ev(grad.scaled(-1.0), xi, rng, cfg.ev_max_iters);
                    double s = std::min(eta, 1.0);
                    if (cfg.line_search)
                      s = line_search(obj, x, grad, GlobalDirection{ev.vector}, 1.0);
                    x = cg_global_step(x, std::move(ev.vector), s);
                    return StepOutcome{eta, s, xi, ev.iterations_used, ev.converged};
                  });
}

RunTrace run_ror_cg(const Objective& obj, const SolverConfig& cfg, const IterateObserver& observer) {
  const double beta = obj.params().beta;
  return run_loop(obj, cfg, observer,
                  [&](int t, SpectraIterate& x, const SymmetricOperator& grad, Rng& rng) {
                    const std::size_t i_t = cfg.selection == Selection::kGreedy
                                                ? greedy_component(x, grad)
                                                : sample_component(x, rng);
                    const double a_it = x.components()[i_t].weight;
                    const double eta = cfg.steps.eta_at(t);
                    const double xi = cfg.tol.xi_at(obj.params(), t);
                    const double effective = eta_tilde(a_it, eta);

                    SymmetricOperator perturbed =
                        regularized_negation(grad, eta * beta, x.components()[i_t].direction);
                    EvResult ev = approx_leading_ev(perturbed, xi, rng, cfg.ev_max_iters);

                    double s = effective;
                    if (cfg.line_search)
                      s = line_search(obj, x, grad, RankOneDirection{ev.vector, i_t}, a_it);
                    x = apply_rank_one_step(x, i_t, std::move(ev.vector), s);
                    return StepOutcome{eta, s, xi, ev.iterations_used, ev.converged};
                  });
}

RunTrace run_away_cg(const Objective& obj, const SolverConfig& cfg, const IterateObserver& observer) {
  return run_loop(
      obj, cfg, observer, [&](int t, SpectraIterate& x, const SymmetricOperator& grad, Rng& rng) {
        const double xi = cfg.tol.xi_at(obj.params(), t);
        EvResult ev = approx_leading_ev(grad.scaled(-1.0), xi, rng, cfg.ev_max_iters);

        const double x_dot_grad = obj.iterate_gradient_inner(x, grad);
        const double forward_inner = grad.quadratic_form(ev.vector) - x_dot_grad;
        bool use_away = false;
        std::size_t away_index = 0;
        if (x.size() >= 2) {
          away_index = greedy_component(x, grad);
          const double away_inner =
              x_dot_grad - grad.quadratic_form(x.components()[away_index].direction);
          use_away = away_inner < forward_inner;
        }

        double s;
        if (use_away) {
          const double a = x.components()[away_index].weight;
          s = line_search(obj, x, grad, AwayDirection{away_index}, a / (1.0 - a));
          x = apply_away_step(x, away_index, s);
        } else {
          s = line_search(obj, x, grad, GlobalDirection{ev.vector}, 1.0);
          x = cg_global_step(x, std::move(ev.vector), s);
        }
        return StepOutcome{cfg.steps.eta_at(t), s, xi, ev.iterations_used, ev.converged};
      });
}

SpectraIterate apply_direction(const SpectraIterate& x, const SearchDirection& dir, double s) {
  return std::visit(
      [&](const auto& d) -> SpectraIterate {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RankOneDirection>)
          return apply_rank_one_step(x, d.component, d.v, s);
        else if constexpr (std::is_same_v<T, GlobalDirection>)
          return cg_global_step(x, d.v, s);
        else
          return apply_away_step(x, d.component, s);
      },
      dir);
}

double line_search(const Objective& obj, const SpectraIterate& x, const SymmetricOperator& grad,
                   const SearchDirection& dir, double s_max) {
  if (!(s_max > 0.0)) throw std::invalid_argument("line_search requires s_max > 0");

  const double dphi0 = std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RankOneDirection>)
          return grad.quadratic_form(d.v) -
                 grad.quadratic_form(x.components()[d.component].direction);
        else if constexpr (std::is_same_v<T, GlobalDirection>)
          return grad.quadratic_form(d.v) - obj.iterate_gradient_inner(x, grad);
        else
          return obj.iterate_gradient_inner(x, grad) -
                 grad.quadratic_form(x.components()[d.component].direction);
      },
      dir);
  if (dphi0 >= 0.0) return 0.0;

  const double phi0 = obj.value(x);
  const double phi_end = obj.value(apply_direction(x, dir, s_max));
  const double curvature = 2.0 * (phi_end - phi0 - s_max * dphi0) / (s_max * s_max);

  double s;
  if (curvature <= 1e-14)
    s = s_max;
  else
    s = std::clamp(-dphi0 / curvature, 0.0, s_max);
  if (s <= 0.0) return 0.0;

  const double phi_s = (s == s_max) ? phi_end : obj.value(apply_direction(x, dir, s));
  return phi_s <= phi0 ? s : 0.0;
}

double fw_gap(const Objective& obj, const SpectraIterate& x, const SymmetricOperator& grad_at_x,
              Rng& rng, int ev_max_iters) {
  EvResult ev = approx_leading_ev(grad_at_x.scaled(-1.0), kFwGapXi, rng, ev_max_iters);
  return obj.iterate_gradient_inner(x, grad_at_x) - grad_at_x.quadratic_form(ev.vector);
}

double fw_gap(const Objective& obj, const SpectraIterate& x) {
  Rng rng(0x5CA1AB1Eull);
  SymmetricOperator grad = obj.gradient(x);
  return fw_gap(obj, x, grad, rng, 512);
}

}  // namespace scg
