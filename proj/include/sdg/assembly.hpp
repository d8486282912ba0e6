#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "sdg/mesh.hpp"
#include "sdg/problem.hpp"
#include "sdg/spaces.hpp"

namespace sdg {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct DofMaps {
  int order = 1;
  DofMapV V;
  DofMapS S;
  DofMapW W;

  std::size_t n_free() const { return V.n_dofs + S.n_free + W.n_free; }
  std::size_t n_all() const { return V.n_dofs + S.n_all + W.n_all; }
};

DofMaps build_dof_maps(const PolygonalMesh& mesh, const ProblemSpec& problem, SpaceConfig config);

/// Free-dof system, ordered [V | S free | W free]:
///   [[ M,  B^T, 0    ],
///    [ -B, Cpp, Cpw  ],
///    [ 0,  Cwp, Cww  ]]
struct LinearSystem {
  SparseMatrix A;
  Eigen::VectorXd rhs;
  std::array<std::size_t, 4> offsets{};      // start of V, S, W blocks and total size
  std::vector<Eigen::MatrixXd> mass_blocks;  // per element, diagonal blocks of M
  bool has_essential = false;                // any Dirichlet dof in S or W
};

/// Coefficients over all dofs, Dirichlet values included.
struct DiscreteSolution {
  Eigen::VectorXd u;       // V_h
  Eigen::VectorXd p;       // S_h, all dofs
  Eigen::VectorXd p_frac;  // W_h, all dofs
};

/// (K^{-1} u, v): nV x nV, block diagonal per element.
SparseMatrix assemble_mass(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMapV& V);

/// b_h(v, q) = q^T B v: rows S_h (all dofs), columns V_h.
SparseMatrix assemble_bh(const PolygonalMesh& mesh, const DofMapV& V, const DofMapS& S);

/// b_h*(p, v) = v^T B* p: rows V_h, columns S_h (all dofs). Outer-boundary traces
/// do not enter, so B* = B^T holds on zero-trace pressures.
SparseMatrix assemble_bh_star(const PolygonalMesh& mesh, const DofMapV& V, const DofMapS& S);

/// Interface form I((p, p_G), (q, q_G)) over the fracture edges, on all S and W dofs.
struct InterfaceBlocks {
  SparseMatrix pp;  // S x S
  SparseMatrix pw;  // S x W
  SparseMatrix wp;  // W x S
  SparseMatrix ww;  // W x W
};

InterfaceBlocks assemble_interface(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMapS& S,
                                   const DofMapW& W);

/// <K_G d_t p_G, d_t q_G> on all W dofs.
SparseMatrix assemble_fracture_stiffness(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMapW& W);

/// Load vectors on all dofs: (f, q) plus Neumann data <g_N, q>, and <l f_G, q_G>.
struct LoadVectors {
  Eigen::VectorXd s;
  Eigen::VectorXd w;
};

LoadVectors assemble_rhs(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs);

/// Full system on free dofs with Dirichlet values lifted to the right-hand side.
LinearSystem assemble_system(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs);

/// Scatters a free-dof vector into a DiscreteSolution (Dirichlet values filled in).
DiscreteSolution expand_solution(const DofMaps& dofs, const Eigen::VectorXd& x);

/// Free-dof vector of a DiscreteSolution.
Eigen::VectorXd restrict_solution(const DofMaps& dofs, const DiscreteSolution& sol);

/// Interpolant of an exact solution: nodal for S_h and W_h; for V_h the elementwise
/// nodal field projected onto the V_h basis (exact when the field lies in V_h).
DiscreteSolution interpolate(const PolygonalMesh& mesh, const DofMaps& dofs, const ExactSolution& exact);

}  // namespace sdg
