#include "tmsim/fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tmsim {

namespace {

Eigen::MatrixXd fd_jacobian(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& p, const Eigen::VectorXd& r0, double rel_step) {
    const int n = static_cast<int>(r0.size()), np = static_cast<int>(p.size());
    Eigen::MatrixXd J(n, np);
    Eigen::VectorXd pj = p, rj(n);
    for (int j = 0; j < np; ++j) {
        const double h = rel_step * std::max(std::abs(p[j]), 1.0);
        pj[j] = p[j] + h;
        f(pj, rj);
        J.col(j) = (rj - r0) / h;
        pj[j] = p[j];
    }
    return J;
}

}  // namespace

LsqResult fit_least_squares(
    const std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r)>& residual_fn,
    int n_residuals, const Eigen::VectorXd& p0, const LsqOptions& opt) {
    if (n_residuals < p0.size())
        throw std::invalid_argument("fit_least_squares: fewer residuals than parameters");

    LsqResult res;
    res.params = p0;
    Eigen::VectorXd r(n_residuals), r_try(n_residuals);
    residual_fn(res.params, r);
    double ssr = r.squaredNorm();
    if (!std::isfinite(ssr))
        throw std::invalid_argument("fit_least_squares: residuals not finite at start");

    double lambda = 1e-3;  // Levenberg damping on the normal equations
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const Eigen::MatrixXd J = fd_jacobian(residual_fn, res.params, r, opt.fd_step);
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;

        bool accepted = false;
        double last_rel = std::numeric_limits<double>::infinity();
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd A = JtJ;
            for (int d = 0; d < A.rows(); ++d)
                A(d, d) += lambda * std::max(JtJ(d, d), 1e-300);
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            const Eigen::VectorXd p_try = res.params + step;
            residual_fn(p_try, r_try);
            const double ssr_try = r_try.squaredNorm();
            last_rel = step.norm() / std::max(res.params.norm(), 1e-300);
            if (std::isfinite(ssr_try) && ssr_try <= ssr) {
                res.params = p_try;
                r = r_try;
                ssr = ssr_try;
                lambda = std::max(lambda / 3, 1e-14);
                accepted = true;
                if (last_rel < opt.step_tol) res.converged = true;
                break;
            }
            lambda *= 10;  // residual grew: damp harder, retry
        }
        if (!accepted || res.converged) {
            // a rejected step that was already tiny means the fit sits at the
            // noise floor: nothing left to gain, so that counts as converged
            if (!accepted) res.converged = ssr == 0 || last_rel < 1e-6;
            break;
        }
    }
    res.iterations = it + 1;
    res.residual_norm = std::sqrt(ssr);

    // one-sigma from the residual covariance sigma^2 (J^T J)^-1
    const Eigen::MatrixXd J = fd_jacobian(residual_fn, res.params, r, opt.fd_step);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const int dof = n_residuals - static_cast<int>(p0.size());
    const double s2 = dof > 0 ? ssr / dof : 0.0;
    const Eigen::MatrixXd cov =
        s2 * JtJ.ldlt().solve(Eigen::MatrixXd::Identity(JtJ.rows(), JtJ.cols()));
    res.sigma.resize(p0.size());
    for (int k = 0; k < p0.size(); ++k)
        res.sigma[k] = cov(k, k) > 0 ? std::sqrt(cov(k, k)) : 0.0;
    return res;
}

}  // namespace tmsim
