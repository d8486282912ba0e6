#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdg/assembly.hpp"
#include "sdg/estimator.hpp"
#include "sdg/mesh.hpp"
#include "sdg/solver.hpp"

namespace sdg {

/// Minimal set of elements holding a theta-fraction of the total squared indicator.
/// Order: larger indicator first, ties by lower id. Returned ids are sorted ascending.
/// Throws AllZeroIndicators when the total vanishes, InvalidArgument on bad input.
std::vector<int> dorfler_mark(std::span<const double> indicators, double theta);

enum class RefinementMode { Adaptive, Uniform };

const char* to_string(RefinementMode mode);

struct AmrConfig {
  double theta = 0.5;
  RefinementMode mode = RefinementMode::Adaptive;
  std::size_t max_dofs = 200000;
  int max_iterations = 50;  // number of refinement steps
  int order = 1;
  SolverOptions solver;
  RegularityFloors floors;

  /// Throws InvalidArgument on theta outside (0, 1], order < 1 or negative limits.
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  std::size_t n_dofs = 0;
  std::array<double, 8> terms{};
  double eta = 0.0;
  double osc = 0.0;
  std::optional<ErrorReport> error;
  std::size_t n_elements = 0;
  std::size_t n_marked = 0;
  double rho_E = 0.0;
  double rho_S = 0.0;
  bool regular = true;
  double solver_residual = 0.0;
  double t_solve_ms = 0.0;     // assembly and solve
  double t_estimate_ms = 0.0;  // estimator, oscillation and true error
};

struct ConvergenceHistory {
  std::vector<IterationRecord> records;
  bool halted = false;         // stopped by a solver or marking failure
  std::string halt_reason;
};

/// Everything an observer may inspect after an iteration has been solved and estimated.
struct IterationState {
  int iteration = 0;
  const PolygonalMesh& mesh;
  const DofMaps& dofs;
  const LinearSystem& system;
  const DiscreteSolution& solution;
  const EstimatorBreakdown& estimate;
  const std::vector<int>& marked;  // empty once max_iterations is reached
};

using IterationObserver = std::function<void(const IterationState&)>;

/// Solve, estimate, mark, refine until max_iterations refinements or until the next
/// mesh would exceed max_dofs.
ConvergenceHistory amr_loop(const PolygonalMesh& initial, const ProblemSpec& problem, const ExactSolution* exact,
                            const AmrConfig& config, const IterationObserver& observer = {});

}  // namespace sdg
