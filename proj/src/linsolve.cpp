#include "stagflow/linsolve.hpp"

#include <string>

namespace stagflow {

void SpdSolver::setup(const Eigen::SparseMatrix<double>& a, const LinearSolverConfig& config) {
    a_ = a;
    diag_.reset();
    ic_.reset();
    if (config.preconditioner == LinearSolverConfig::Preconditioner::incomplete_cholesky) {
        ic_ = std::make_unique<IcCg>();
        ic_->setTolerance(config.tol);
        ic_->setMaxIterations(config.max_iterations);
        ic_->compute(a_);
        if (ic_->info() == Eigen::Success) return;
        ic_.reset(); // fall back when the incomplete factorization breaks down
    }
    diag_ = std::make_unique<DiagCg>();
    diag_->setTolerance(config.tol);
    diag_->setMaxIterations(config.max_iterations);
    diag_->compute(a_);
    if (diag_->info() != Eigen::Success)
        throw SolverError("linear solver setup failed (matrix not usable)");
}

LinearSolveResult SpdSolver::solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    LinearSolveResult res;
    if (b.norm() == 0.0) {
        x.setZero(b.size());
        return res;
    }
    if (ic_) {
        x = ic_->solveWithGuess(b, x);
        res.iterations = static_cast<int>(ic_->iterations());
        res.residual = ic_->error();
        if (ic_->info() != Eigen::Success)
            throw SolverError("CG did not converge: relative residual " +
                              std::to_string(res.residual) + " after " +
                              std::to_string(res.iterations) + " iterations");
        return res;
    }
    x = diag_->solveWithGuess(b, x);
    res.iterations = static_cast<int>(diag_->iterations());
    res.residual = diag_->error();
    if (diag_->info() != Eigen::Success)
        throw SolverError("CG did not converge: relative residual " +
                          std::to_string(res.residual) + " after " +
                          std::to_string(res.iterations) + " iterations");
    return res;
}

} // namespace stagflow
