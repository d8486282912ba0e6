#include "sdg/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "sdg/error.hpp"

namespace sdg {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::vector<int> dorfler_mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  double total = 0.0;
  for (double v : indicators) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "indicators must be finite and non-negative");
    }
    total += v;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::AllZeroIndicators, "all refinement indicators are zero");

  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return indicators[static_cast<std::size_t>(a)] > indicators[static_cast<std::size_t>(b)];
  });
  // Slack absorbs summation-order rounding so theta = 1 does not pull in zero indicators.
  const double target = theta * total - 1e-12 * total;
  std::vector<int> marked;
  double acc = 0.0;
  for (int id : order) {
    if (acc >= target) break;
    acc += indicators[static_cast<std::size_t>(id)];
    marked.push_back(id);
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

const char* to_string(RefinementMode mode) { return mode == RefinementMode::Uniform ? "uniform" : "adaptive"; }

void AmrConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  if (max_iterations < 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 0");
}

ConvergenceHistory amr_loop(const PolygonalMesh& initial, const ProblemSpec& problem, const ExactSolution* exact,
                            const AmrConfig& config, const IterationObserver& observer) {
  config.validate();
  problem.validate();
  ConvergenceHistory history;
  PolygonalMesh mesh = initial;
  const SpaceConfig space{config.order};

  for (int it = 0;; ++it) {
    const DofMaps dofs = build_dof_maps(mesh, problem, space);
    if (it > 0 && dofs.n_free() > config.max_dofs) break;
    if (it == 0 && dofs.n_free() > config.max_dofs) {
      throw Error(ErrorCode::InvalidArgument, "initial mesh already exceeds max_dofs");
    }

    IterationRecord rec;
    rec.iteration = it;
    rec.n_dofs = dofs.n_free();
    rec.n_elements = mesh.elements.size();
    const RegularityReport reg = check_regularity(mesh, config.floors);
    rec.rho_E = reg.rho_E;
    rec.rho_S = reg.rho_S;
    rec.regular = !reg.below_floor;

    auto t0 = std::chrono::steady_clock::now();
    const LinearSystem system = assemble_system(mesh, problem, dofs);
    SolveResult solved;
    try {
      solved = solve(system, config.solver);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem) throw;
      history.halted = true;
      history.halt_reason = e.what();
      break;
    }
    const DiscreteSolution sol = expand_solution(dofs, solved.x);
    rec.t_solve_ms = elapsed_ms(t0);
    rec.solver_residual = solved.report.relative_residual;

    t0 = std::chrono::steady_clock::now();
    const EstimatorBreakdown est = compute_estimator(mesh, problem, dofs, sol);
    rec.terms = est.terms;
    rec.eta = est.eta;
    rec.osc = est.osc;
    if (exact != nullptr) rec.error = true_error(mesh, problem, dofs, sol, *exact, est.eta);
    rec.t_estimate_ms = elapsed_ms(t0);

    std::vector<int> marked;
    const bool last = it >= config.max_iterations;
    if (!last) {
      if (config.mode == RefinementMode::Uniform) {
        marked.resize(mesh.elements.size());
        std::iota(marked.begin(), marked.end(), 0);
      } else {
        try {
          marked = dorfler_mark(est.element_indicators, config.theta);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::AllZeroIndicators) throw;
          history.halted = true;
          history.halt_reason = e.what();
        }
      }
    }
    rec.n_marked = marked.size();
    history.records.push_back(rec);
    if (observer) observer(IterationState{it, mesh, dofs, system, sol, est, marked});
    if (last || marked.empty()) break;
    mesh = refine(mesh, marked);
  }
  return history;
}

}  // namespace sdg
