#pragma once

#include <Eigen/Dense>
#include <string>

#include "sdg/assembly.hpp"

namespace sdg {

enum class SolverMethod {
  Condensed,  // eliminate the block-diagonal flux mass, LDL^T on the SPD pressure system
  FullLU,     // sparse LU with pivoting on the whole indefinite system
};

const char* to_string(SolverMethod method);

struct SolverOptions {
  SolverMethod method = SolverMethod::Condensed;
  int max_refinement_steps = 3;  // iterative refinement against the full matrix
  double target_residual = 1e-12;
};

struct SolveReport {
  double relative_residual = 0.0;  // ||A x - b|| / ||b|| (absolute when b = 0)
  SolverMethod method = SolverMethod::Condensed;
  std::size_t n = 0;
  std::size_t nnz = 0;
  std::size_t factor_size = 0;  // rows of the factorized matrix
  int refinement_steps = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// Solves A x = b. Throws SingularSystem when no essential condition pins the
/// pressure or the factorization breaks down, NonFinite on NaN/Inf input.
SolveResult solve(const LinearSystem& system, const SolverOptions& options = {});

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

}  // namespace sdg
