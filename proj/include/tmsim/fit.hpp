#pragma once

// Small damped Gauss-Newton (Levenberg) least-squares core used by the
// analysis fits.  Residual Jacobians come from forward differences; damping
// grows when a step increases the residual and shrinks on acceptance.
// Convergence: relative step below step_tol; hard cap on iterations.

#include <functional>

#include <Eigen/Dense>

namespace tmsim {

struct LsqOptions {
    int max_iterations = 200;
    double step_tol = 1e-10;   // relative |dp|/|p|
    double fd_step = 1e-7;     // relative forward-difference step
};

struct LsqResult {
    Eigen::VectorXd params;
    Eigen::VectorXd sigma;      // one-sigma from residual covariance
    double residual_norm = 0;   // sqrt(sum r^2)
    bool converged = false;
    int iterations = 0;
};

// residual_fn fills r (fixed size across calls) from parameters p.
LsqResult fit_least_squares(
    const std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r)>& residual_fn,
    int n_residuals, const Eigen::VectorXd& p0, const LsqOptions& opt = {});

}  // namespace tmsim
