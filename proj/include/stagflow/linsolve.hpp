#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <memory>

#include "stagflow/common.hpp"

namespace stagflow {

/// Contract for the symmetric positive (semi)definite solves of the schemes:
/// the returned solution satisfies ||Ax - b|| <= tol ||b|| or SolverError is
/// thrown with the residual report.
struct LinearSolverConfig {
    enum class Preconditioner { diagonal, incomplete_cholesky };
    Preconditioner preconditioner = Preconditioner::incomplete_cholesky;
    double tol = 1e-10;
    int max_iterations = 20000;
};

struct LinearSolveResult {
    int iterations = 0;
    double residual = 0.0;
};

/// Conjugate-gradient solver with a reusable setup (matrix analysis and
/// preconditioner factorization are done once; solves may be repeated with
/// warm starts).
class SpdSolver {
public:
    SpdSolver() = default;
    void setup(const Eigen::SparseMatrix<double>& a, const LinearSolverConfig& config);
    bool ready() const { return diag_ != nullptr || ic_ != nullptr; }

    /// Solves into x (its entry value is the initial guess).
    LinearSolveResult solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const;

private:
    using DiagCg = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                            Eigen::Lower | Eigen::Upper,
                                            Eigen::DiagonalPreconditioner<double>>;
    using IcCg = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                          Eigen::Lower | Eigen::Upper,
                                          Eigen::IncompleteCholesky<double>>;
    Eigen::SparseMatrix<double> a_;
    std::unique_ptr<DiagCg> diag_;
    std::unique_ptr<IcCg> ic_;
};

} // namespace stagflow
