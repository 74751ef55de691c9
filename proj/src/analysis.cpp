#include "tmsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tmsim/bessel.hpp"
#include "tmsim/fit.hpp"

namespace tmsim {

bool FitResult::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

constexpr double kPi = std::numbers::pi;

double nutation_model(double omega, double D, double A, double t) {
    return A * (1 - 2 * (1 - std::pow(10.0, -D)) * j1_over_x(omega * t));
}

// Dominant angular frequency of the detrended trace.  The oscillatory tail of
// J1(wt)/(wt) rings at w, so the spectral peak recovers the rate even when
// the overshoot is buried in noise and argmax-based initialization fails.
// Returns 0 when the grid cannot support the estimate.
double spectral_peak(const Trace& tr) {
    const std::size_t n = tr.size();
    const double span = tr.x.back() - tr.x.front();
    if (!(span > 0)) return 0;
    double dt_min = span;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dt = tr.x[i + 1] - tr.x[i];
        if (dt > 0) dt_min = std::min(dt_min, dt);
    }
    const double w_lo = 4 * kPi / span;  // clear of the DC lobe
    const double w_hi = kPi / dt_min;
    if (!(w_hi > w_lo)) return 0;

    double mean = 0;
    for (double v : tr.y) mean += v;
    mean /= static_cast<double>(n);

    const double dw = kPi / (2 * span);  // 4x oversampled bins
    double best_w = 0, best_p = -1;
    for (double w = w_lo; w <= w_hi; w += dw) {
        double cr = 0, ci = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = tr.y[i] - mean;
            cr += d * std::cos(w * tr.x[i]);
            ci += d * std::sin(w * tr.x[i]);
        }
        const double p = cr * cr + ci * ci;
        if (p > best_p) {
            best_p = p;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace

FitResult fit_nutation(const Trace& trace) {
    const auto n = trace.size();
    if (trace.y.size() != n)
        throw std::invalid_argument("fit_nutation: x/y length mismatch");
    if (n < 20)
        throw std::invalid_argument("fit_nutation: need at least 20 samples, got " +
                                    std::to_string(n));

    double tail = 0;
    const std::size_t n_tail = std::max<std::size_t>(3, n / 4);
    for (std::size_t i = n - n_tail; i < n; ++i) tail += trace.y[i];
    const double A0 = tail / n_tail;
    if (!(A0 > 0))
        throw std::invalid_argument("fit_nutation: non-positive plateau level");

    const double x21 = j2_first_zero();
    // two independent rate guesses: overshoot position (deep traces) and
    // spectral peak (shallow ones, where noise can outgrow the overshoot)
    std::vector<double> om_starts;
    const auto i_max = static_cast<std::size_t>(
        std::max_element(trace.y.begin(), trace.y.end()) - trace.y.begin());
    if (i_max != 0 && i_max + 1 != n && trace.x[i_max] > 0)
        om_starts.push_back(x21 / trace.x[i_max]);
    const double om_fft = spectral_peak(trace);
    if (om_fft > 0 &&
        (om_starts.empty() || std::abs(om_fft - om_starts[0]) > 0.2 * om_starts[0]))
        om_starts.push_back(om_fft);
    if (om_starts.empty())
        throw std::invalid_argument(
            "fit_nutation: trace does not span a full oscillation");

    const double ratio = std::clamp(trace.y.front() / A0, 1e-6, 0.999999);
    const double D0 = std::clamp(-std::log10(ratio), 0.01, 0.49);

    auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < n; ++i)
            r[static_cast<int>(i)] =
                nutation_model(p[0], p[1], p[2], trace.x[i]) - trace.y[i];
    };
    LsqResult lsq;
    bool have = false;
    for (double om0 : om_starts) {
        Eigen::VectorXd p0(3);
        p0 << om0, D0, A0;
        const LsqResult cand =
            fit_least_squares(residual, static_cast<int>(n), p0, {});
        if (!have || cand.residual_norm < lsq.residual_norm) {
            lsq = cand;
            have = true;
        }
    }

    // the fitted first maximum must fall inside the window, otherwise the
    // data never covered a full oscillation and omega is unconstrained
    if (std::abs(lsq.params[0]) * (trace.x.back() - trace.x.front()) < x21)
        throw std::invalid_argument(
            "fit_nutation: trace does not span a full oscillation");

    FitResult out;
    // j1_over_x is even, so the sign of omega is not identifiable
    out.params["omega_rad_per_us"] = std::abs(lsq.params[0]);
    out.params["D"] = lsq.params[1];
    out.params["amplitude"] = lsq.params[2];
    out.sigma["omega_rad_per_us"] = lsq.sigma[0];
    out.sigma["D"] = lsq.sigma[1];
    out.sigma["amplitude"] = lsq.sigma[2];
    out.residual_norm = lsq.residual_norm;
    out.converged = lsq.converged;
    out.iterations = lsq.iterations;
    if (lsq.params[1] >= 0.5) out.flags.push_back("d-out-of-model");
    return out;
}

ValueWithSigma extract_R_from_densities(double D_w, double D_sw, double sigma_Dw,
                                        double sigma_Dsw) {
    if (!(D_w > 0) || !(D_sw > D_w))
        throw std::invalid_argument(
            "extract_R_from_densities: requires 0 < D_w < D_sw");
    const double den = D_sw - D_w;
    ValueWithSigma out;
    out.value = D_w / den;
    out.sigma = std::sqrt(D_sw * D_sw * sigma_Dw * sigma_Dw +
                          D_w * D_w * sigma_Dsw * sigma_Dsw) /
                (den * den);
    return out;
}

double extract_rho(double D_sw, double D0) {
    if (!(D0 > 0)) throw std::invalid_argument("extract_rho: D0 must be positive");
    if (D_sw < 0) throw std::invalid_argument("extract_rho: negative D_sw");
    const double rho = 3 * D_sw / (2 * D0);
    if (rho > 1)
        throw std::invalid_argument(
            "extract_rho: D_sw exceeds the fully-pumped bound 2 D0 / 3");
    return rho;
}

namespace {

struct Crossing {
    double u = 0;      // drive fraction I/I0 at the crossing
    double slope = 0;  // dW/du there
};

// piecewise-linear W(u) against target level T
std::vector<Crossing> linear_crossings(const std::vector<double>& u,
                                       const std::vector<double>& W, double T) {
    std::vector<Crossing> out;
    const std::size_t n = u.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = W[k] - T, b = W[k + 1] - T, du = u[k + 1] - u[k];
        const double slope = du > 0 ? (W[k + 1] - W[k]) / du : 0.0;
        if (a == 0) out.push_back({u[k], slope});
        if (a * b < 0) out.push_back({u[k] + a / (a - b) * du, slope});
    }
    if (n >= 2 && W.back() == T) {
        const double du = u[n - 1] - u[n - 2];
        out.push_back({u.back(), du > 0 ? (W[n - 1] - W[n - 2]) / du : 0.0});
    }
    return out;
}

double poly_eval(const Eigen::VectorXd& c, double u) {
    double v = 0;
    for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) v = v * u + c[j];
    return v;
}

double poly_deriv(const Eigen::VectorXd& c, double u) {
    double v = 0;
    for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j) v = v * u + j * c[j];
    return v;
}

std::vector<Crossing> poly_crossings(const std::vector<double>& u,
                                     const std::vector<double>& W, double T,
                                     int degree) {
    const int n = static_cast<int>(u.size());
    Eigen::MatrixXd V(n, degree + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double m = 1;
        for (int j = 0; j <= degree; ++j) {
            V(i, j) = m;
            m *= u[static_cast<std::size_t>(i)];
        }
        y[i] = W[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);

    std::vector<Crossing> out;
    const double lo = u.front(), hi = u.back();
    const int scan = 2000;
    double prev_u = lo, prev_f = poly_eval(c, lo) - T;
    if (prev_f == 0) out.push_back({lo, poly_deriv(c, lo)});
    for (int i = 1; i <= scan; ++i) {
        const double ui = lo + (hi - lo) * i / scan;
        const double fi = poly_eval(c, ui) - T;
        if (fi == 0) {
            out.push_back({ui, poly_deriv(c, ui)});
        } else if (prev_f * fi < 0) {
            double a = prev_u, b = ui, fa = prev_f;
            for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b), fm = poly_eval(c, m) - T;
                if (fm == 0) {
                    a = b = m;
                } else if (fa * fm < 0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            const double root = 0.5 * (a + b);
            out.push_back({root, poly_deriv(c, root)});
        }
        prev_u = ui;
        prev_f = fi;
    }
    return out;
}

}  // namespace

ValueWithSigma solve_R_from_echo(const EchoDataset& data,
                                 const EchoSolveOptions& opt) {
    const std::size_t n = data.drive.size();
    if (data.echo.size() != n)
        throw std::invalid_argument("solve_R_from_echo: drive/echo length mismatch");
    if (n < 3)
        throw std::invalid_argument("solve_R_from_echo: need at least 3 samples");
    if (!data.sigma.empty() && data.sigma.size() != n)
        throw std::invalid_argument("solve_R_from_echo: sigma length mismatch");
    if (!(data.I0 > 0))
        throw std::invalid_argument("solve_R_from_echo: I0 must be positive");
    if (!(data.Iw_at_I0 > 0))
        throw std::invalid_argument("solve_R_from_echo: weak echo level must be positive");
    if (opt.poly_degree < 1 || opt.poly_degree > 5)
        throw std::invalid_argument("solve_R_from_echo: poly_degree must be 1..5");
    if (n < static_cast<std::size_t>(opt.poly_degree) + 1)
        throw std::invalid_argument("solve_R_from_echo: too few samples for degree " +
                                    std::to_string(opt.poly_degree));

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return data.drive[a] < data.drive[b];
    });
    std::vector<double> u(n), W(n), sW(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = data.drive[idx[i]] / data.I0;
        if (u[i] < 0)
            throw std::invalid_argument("solve_R_from_echo: negative drive intensity");
        W[i] = data.echo[idx[i]] * u[i];
        if (!data.sigma.empty()) sW[i] = data.sigma[idx[i]] * u[i];
    }
    const double T = data.Iw_at_I0;

    std::vector<Crossing> roots = opt.poly_degree == 1
                                      ? linear_crossings(u, W, T)
                                      : poly_crossings(u, W, T, opt.poly_degree);
    // collapse duplicates (shared segment endpoints, scan-grid repeats)
    std::sort(roots.begin(), roots.end(),
              [](const Crossing& a, const Crossing& b) { return a.u < b.u; });
    const double tol = 1e-7 * (u.back() - u.front() + 1e-300);
    std::vector<Crossing> distinct;
    for (const auto& c : roots)
        if (distinct.empty() || c.u - distinct.back().u > tol) distinct.push_back(c);

    if (distinct.empty())
        throw std::runtime_error(
            "solve_R_from_echo: weighted echo never crosses the weak-echo level "
            "inside the sampled drive range");
    if (distinct.size() > 1)
        throw std::runtime_error("solve_R_from_echo: " +
                                 std::to_string(distinct.size()) +
                                 " crossings; data is ambiguous");

    const Crossing hit = distinct.front();
    ValueWithSigma out;
    out.value = hit.u;

    double sigma_W = 0;
    if (!data.sigma.empty()) {
        std::size_t k = 0;
        while (k + 2 < n && u[k + 1] < hit.u) ++k;
        const double du = u[k + 1] - u[k];
        const double w = du > 0 ? std::clamp((hit.u - u[k]) / du, 0.0, 1.0) : 0.5;
        sigma_W = std::hypot((1 - w) * sW[k], w * sW[k + 1]);
    }
    const double err = std::hypot(sigma_W, data.sigma_Iw);
    if (err > 0)
        out.sigma = std::abs(hit.slope) > 1e-300
                        ? err / std::abs(hit.slope)
                        : std::numeric_limits<double>::infinity();
    return out;
}

FitResult fit_exponential(const std::vector<double>& t_s,
                          const std::vector<double>& depth) {
    const std::size_t n = t_s.size();
    if (depth.size() != n)
        throw std::invalid_argument("fit_exponential: t/depth length mismatch");
    if (n < 3)
        throw std::invalid_argument("fit_exponential: need at least 3 samples");
    const double span = t_s.back() - t_s.front();
    if (!(span > 0))
        throw std::invalid_argument("fit_exponential: time span must be positive");

    // log-linear regression over the positive samples seeds (lambda, A)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (depth[i] > 0) {
            const double ly = std::log(depth[i]);
            sx += t_s[i];
            sy += ly;
            sxx += t_s[i] * t_s[i];
            sxy += t_s[i] * ly;
            ++m;
        }
    double lam0 = 1 / span, A0 = 1;
    if (m >= 2 && m * sxx - sx * sx > 0) {
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        lam0 = -slope;
        A0 = std::exp((sy - slope * sx) / m);
    }

    Eigen::VectorXd p0(2);
    p0 << lam0, A0;
    auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < n; ++i)
            r[static_cast<int>(i)] = p[1] * std::exp(-p[0] * t_s[i]) - depth[i];
    };
    const LsqResult lsq = fit_least_squares(residual, static_cast<int>(n), p0, {});
    const double lam = lsq.params[0], slam = lsq.sigma[0];

    FitResult out;
    out.residual_norm = lsq.residual_norm;
    out.converged = lsq.converged;
    out.iterations = lsq.iterations;
    out.params["amplitude"] = lsq.params[1];
    out.sigma["amplitude"] = lsq.sigma[1];

    if (lam < 0 && -lam > 2 * slam)
        throw std::runtime_error(
            "fit_exponential: depth grows over the window; not a decay");
    if (lam <= 2 * slam) {
        // decay indistinguishable from zero: quote the span-limited bound
        // exp(-span/T1) >= 1 - 2*scatter
        const double scale = std::max(std::abs(lsq.params[1]), 1e-300);
        const double scatter = std::clamp(
            lsq.residual_norm / std::sqrt(static_cast<double>(n)) / scale, 1e-12,
            0.49);
        out.params["T1_s"] = -span / std::log1p(-2 * scatter);
        out.sigma["T1_s"] = 0;
        out.flags.push_back("t1-lower-bound");
        return out;
    }
    out.params["T1_s"] = 1 / lam;
    out.sigma["T1_s"] = slam / (lam * lam);
    return out;
}

}  // namespace tmsim
