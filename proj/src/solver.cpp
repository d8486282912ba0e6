#include "sdg/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

#include "sdg/error.hpp"

namespace sdg {

namespace {

using Index = Eigen::Index;

void check_finite(const LinearSystem& sys) {
  for (Index k = 0; k < sys.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.A, k); it; ++it)
      if (!std::isfinite(it.value())) throw Error(ErrorCode::NonFinite, "system matrix has a non-finite entry");
  if (!sys.rhs.allFinite()) throw Error(ErrorCode::NonFinite, "right-hand side has a non-finite entry");
}

// Solver for the correction equation A d = r; returns d.
class Factorization {
 public:
  virtual ~Factorization() = default;
  virtual Eigen::VectorXd apply(const Eigen::VectorXd& r) const = 0;
};

class CondensedFactorization : public Factorization {
 public:
  explicit CondensedFactorization(const LinearSystem& sys) : nV_(static_cast<Index>(sys.offsets[1])) {
    const Index n = sys.A.rows();
    const Index nR = n - nV_;
    // Block-diagonal inverse of the flux mass.
    std::vector<Eigen::Triplet<double>> t;
    Index o = 0;
    for (const Eigen::MatrixXd& blk : sys.mass_blocks) {
      Eigen::LLT<Eigen::MatrixXd> llt(blk);
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "flux mass block is not SPD");
      const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(blk.rows(), blk.cols()));
      for (Index a = 0; a < inv.rows(); ++a)
        for (Index b = 0; b < inv.cols(); ++b) t.emplace_back(o + a, o + b, inv(a, b));
      o += blk.rows();
    }
    Minv_.resize(nV_, nV_);
    Minv_.setFromTriplets(t.begin(), t.end());
    Bt_ = sys.A.block(0, nV_, nV_, nR);
    Bm_ = sys.A.block(nV_, 0, nR, nV_);
    const SparseMatrix C = sys.A.block(nV_, nV_, nR, nR);
    SparseMatrix schur = C - SparseMatrix(Bm_ * SparseMatrix(Minv_ * Bt_));
    schur.prune(0.0);
    ldlt_.compute(schur);
    if (ldlt_.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "LDL^T factorization failed");
    const Eigen::VectorXd D = ldlt_.vectorD();
    const double dmax = D.cwiseAbs().maxCoeff();
    if (D.size() > 0 && (!(D.minCoeff() > 1e-14 * dmax))) {
      throw Error(ErrorCode::SingularSystem, "pressure system is singular (pivot ratio " +
                                                 std::to_string(D.minCoeff() / dmax) + ")");
    }
    size_ = static_cast<std::size_t>(nR);
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const override {
    const Eigen::VectorXd rv = r.head(nV_);
    const Eigen::VectorXd rp = r.tail(r.size() - nV_);
    const Eigen::VectorXd mv = Minv_ * rv;
    const Eigen::VectorXd y = ldlt_.solve(rp - Bm_ * mv);
    Eigen::VectorXd x(r.size());
    x.head(nV_) = mv - Minv_ * (Bt_ * y);
    x.tail(y.size()) = y;
    return x;
  }

  std::size_t size() const { return size_; }

 private:
  Index nV_;
  SparseMatrix Minv_;
  SparseMatrix Bt_;
  SparseMatrix Bm_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  std::size_t size_ = 0;
};

class LUFactorization : public Factorization {
 public:
  explicit LUFactorization(const LinearSystem& sys) {
    lu_.analyzePattern(sys.A);
    lu_.factorize(sys.A);
    if (lu_.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularSystem, "sparse LU failed: " + lu_.lastErrorMessage());
    }
  }
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const override {
    return const_cast<Eigen::SparseLU<SparseMatrix>&>(lu_).solve(r);
  }

 private:
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

}  // namespace

const char* to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Condensed: return "condensed";
    case SolverMethod::FullLU: return "full-lu";
  }
  return "?";
}

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double r = (A * x - b).norm();
  const double nb = b.norm();
  return nb > 0.0 ? r / nb : r;
}

SolveResult solve(const LinearSystem& system, const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (system.A.rows() != system.A.cols() || system.A.rows() != system.rhs.size()) {
    throw Error(ErrorCode::InvalidArgument, "system is not square or rhs size mismatches");
  }
  check_finite(system);
  // Systems from assemble_system carry mass blocks; hand-built ones skip this check.
  if (!system.has_essential && !system.mass_blocks.empty()) {
    throw Error(ErrorCode::SingularSystem,
                "no essential boundary condition: pressure is determined only up to a constant");
  }

  SolveResult res;
  res.report.method = options.method;
  res.report.n = static_cast<std::size_t>(system.A.rows());
  res.report.nnz = static_cast<std::size_t>(system.A.nonZeros());

  std::unique_ptr<Factorization> fac;
  const bool condensed = options.method == SolverMethod::Condensed && !system.mass_blocks.empty();
  if (condensed) {
    auto c = std::make_unique<CondensedFactorization>(system);
    res.report.factor_size = c->size();
    fac = std::move(c);
  } else {
    fac = std::make_unique<LUFactorization>(system);
    res.report.factor_size = res.report.n;
  }

  res.x = fac->apply(system.rhs);
  double rel = relative_residual(system.A, res.x, system.rhs);
  for (int step = 0; step < options.max_refinement_steps && rel > options.target_residual; ++step) {
    res.x += fac->apply(system.rhs - system.A * res.x);
    rel = relative_residual(system.A, res.x, system.rhs);
    res.report.refinement_steps = step + 1;
  }
  if (!res.x.allFinite()) throw Error(ErrorCode::SingularSystem, "solution is not finite");
  res.report.relative_residual = rel;
  res.report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace sdg
