#pragma once

// Internal: symmetric positive definite solves shared by the capacity and
// solver modules. Direct LDL^T for small systems, IC-preconditioned CG above;
// Jacobi CG for the time-step systems.

#include <memory>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace plw::detail {

using SparseMatrix = Eigen::SparseMatrix<double>;

class SpdSolver {
 public:
  explicit SpdSolver(Eigen::Index direct_limit = 40000) : direct_limit_(direct_limit) {}

  // Returns false when the factorization or iteration failed.
  bool solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x) {
    if (A.rows() <= direct_limit_) {
      if (!analyzed_) {
        ldlt_.analyzePattern(A);
        analyzed_ = true;
      }
      ldlt_.factorize(A);
      if (ldlt_.info() != Eigen::Success) return false;
      x = ldlt_.solve(b);
      return ldlt_.info() == Eigen::Success;
    }
    cg_.setTolerance(1e-12);
    cg_.setMaxIterations(std::max<Eigen::Index>(1000, A.rows() / 4));
    cg_.compute(A);
    if (cg_.info() != Eigen::Success) return false;
    x = cg_.solveWithGuess(b, x.size() == b.size() ? x : Eigen::VectorXd::Zero(b.size()));
    return cg_.info() == Eigen::Success || cg_.error() < 1e-8;
  }

 private:
  Eigen::Index direct_limit_;
  bool analyzed_ = false;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg_;
};

// Diagonally preconditioned CG for systems dominated by a mass term.
class JacobiCgSolver {
 public:
  bool solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x) {
    cg_.setTolerance(1e-10);
    cg_.setMaxIterations(std::max<Eigen::Index>(2000, A.rows()));
    cg_.compute(A);
    if (cg_.info() != Eigen::Success) return false;
    x = cg_.solve(b);
    return cg_.info() == Eigen::Success || cg_.error() < 1e-9;
  }

 private:
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg_;
};

}  // namespace plw::detail
