#pragma once

#include <array>
#include <vector>

#include "sdg/assembly.hpp"

namespace sdg {

/// One localized estimator contribution (a squared quantity) shared equally
/// by up to four primal elements.
struct Contribution {
  int term = 0;  // 1..8
  double value = 0.0;
  std::array<int, 4> elements{-1, -1, -1, -1};
  int n_elements = 0;
};

struct EstimatorBreakdown {
  std::array<double, 8> squared{};  // sum of squares of each term family
  std::array<double, 8> terms{};    // T_i = sqrt(squared[i])
  double eta = 0.0;                 // sum of T_i
  double osc = 0.0;
  std::vector<Contribution> contributions;
  std::vector<double> element_indicators;  // squared, per primal element
  std::vector<double> fracture_edge_indicators;  // squared terms 5, 7, 8 per fracture slot
};

/// Residual estimator of the eight term families and its per-element localization.
EstimatorBreakdown compute_estimator(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                                     const DiscreteSolution& sol);

/// Per-element squared indicators. Volume and dual-edge terms go to the owning element;
/// primal-edge and fracture terms are split equally between adjacent elements; the
/// fracture vertex term is split equally among the elements adjacent to its two edges.
std::vector<double> localize(const EstimatorBreakdown& breakdown, const PolygonalMesh& mesh);

/// osc(f, f_G) with elementwise L2 projections onto P^k.
double data_oscillation(const PolygonalMesh& mesh, const ProblemSpec& problem, int order);

struct ErrorReport {
  double flux_q = 0.0;          // ||K^{-1/2}(u - u_h)||
  double interface_avg = 0.0;   // ||alpha^{-1/2}({e_p} - e_G)||_Gamma
  double interface_jump = 0.0;  // ||eta^{-1/2}[e_p]||_Gamma
  double grad = 0.0;            // ||K^{1/2} grad e_p|| (broken)
  double fracture_grad = 0.0;   // ||K_G^{1/2} d_t e_G||_Gamma
  double flux_jump = 0.0;       // ||[(u - u_h) . n_G]||_Gamma
  double flux_avg = 0.0;        // ||{(u - u_h) . n_G}||_Gamma
  double v_norm = 0.0;          // sqrt of the four pressure parts
  double total = 0.0;           // sdg norm
  double effectivity = 0.0;     // eta / total, NaN when total <= 1e-12
};

ErrorReport true_error(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                       const DiscreteSolution& sol, const ExactSolution& exact, double eta = 0.0);

/// Flux balance over the dual volume of an interior primal edge:
/// (outward flux through its boundary) - (integral of f). Uses the assembly quadrature.
double mass_balance(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                    const DiscreteSolution& sol, int edge);

/// mass_balance for every edge at once; NaN on edges that are not interior primal edges.
std::vector<double> mass_balances(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                                  const DiscreteSolution& sol);

}  // namespace sdg
