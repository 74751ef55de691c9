#pragma once

// Inverse problems: nutation-trace fitting, the two branching-ratio
// extraction pipelines (density ratio and weighted-echo intersection), and
// exponential lifetime fits.  Uncertainties are first-order propagation for
// closed forms and residual-covariance estimates for fits.

#include <map>
#include <string>
#include <vector>

#include "tmsim/trace.hpp"

namespace tmsim {

struct FitResult {
    std::map<std::string, double> params;
    std::map<std::string, double> sigma;
    double residual_norm = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> flags;  // "d-out-of-model", "t1-lower-bound", ...

    bool has_flag(const std::string& f) const;
};

// Fits y = A (1 - 2 (1 - 10^-D) J1(Ot)/(Ot)) to a trace (t in us).  The
// amplitude A absorbs detector scale, so the fit is invariant under trace
// rescaling.  Initial guesses: Omega from the first-maximum rule
// x21/t_max, D from the t=0 / long-time contrast.  Needs >= 20 samples
// spanning at least one oscillation.  Reported params: omega_rad_per_us, D,
// amplitude.  D >= 0.5 at the optimum is flagged "d-out-of-model".
FitResult fit_nutation(const Trace& trace);

struct ValueWithSigma {
    double value = 0, sigma = 0;
};

// R = D_w / (D_sw - D_w), the inversion of the composite-density relations.
// Requires 0 < D_w < D_sw.  Sigmas propagate first-order when given.
ValueWithSigma extract_R_from_densities(double D_w, double D_sw,
                                        double sigma_Dw = 0,
                                        double sigma_Dsw = 0);

// rho = 3 D_sw / (2 D0); must land in [0,1], else inconsistent data.
double extract_rho(double D_sw, double D0);

struct EchoDataset {
    std::vector<double> drive;     // strong-branch drive intensities I
    std::vector<double> echo;      // measured strong-branch echo I_s(I)
    std::vector<double> sigma;     // optional per-sample sigma; empty = none
    double I0 = 0;                 // reference (full) drive intensity
    double Iw_at_I0 = 0;           // weak-branch echo at full drive
    double sigma_Iw = 0;
};

struct EchoSolveOptions {
    int poly_degree = 1;  // 1 = straight-line interpolation of W; 2..5 = LSQ polynomial
};

// Weighted strong-branch intensity W(I) = I_s(I) * I / I0 interpolated over
// the samples; solves W(I*) = I_w(I0) by bracketed root find and returns
// R = I*/I0.  Since I_w(I0) = R I_s(R I0) = W(R I0), the intersection
// abscissa is R I0 exactly.  Errors: no bracketing interval; more than one
// intersection (ambiguous data).
ValueWithSigma solve_R_from_echo(const EchoDataset& data,
                                 const EchoSolveOptions& opt = {});

// A exp(-t/T1) least squares (internally in rate form A exp(-lambda t)).
// Constant samples yield flag "t1-lower-bound" with T1_s set to the
// span-limited bound; a significantly growing trend is rejected.  Reported
// params: T1_s, amplitude.
FitResult fit_exponential(const std::vector<double>& t_s,
                          const std::vector<double>& depth);

}  // namespace tmsim
