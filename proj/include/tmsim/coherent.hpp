#pragma once

// Coherent-transient forward models: optical nutation on an inhomogeneously
// broadened line, optical-density bookkeeping, photon-echo intensity scaling
// between the strong and weak legs of the Lambda system, and pi-pulse
// arithmetic.

#include <functional>
#include <vector>

#include "tmsim/trace.hpp"

namespace tmsim {

struct NutationParams {
    double omega = 0;            // Rabi frequency at beam center, rad/us
    double D = 0;                // optical density; model valid for D < 0.5
    std::vector<double> t_grid;  // us, t >= 0
};

// I(t)/I0 = 1 - 2 (1 - 10^-D) J1(omega t)/(omega t).  The t=0 value is the
// analytic limit 10^-D (Beer-Lambert).  Throws std::invalid_argument when
// D >= 0.5 (low-density model assumption broken) or omega <= 0.
Trace nutation_trace(const NutationParams& np);

// t_max = x21/omega with x21 the first zero of J2.
double first_max_time(double omega);

// D = log10(I_inf / I_0); requires I_inf >= I_0 > 0.
double density_from_contrast(double I_inf, double I_0);

struct CompositeDensities {
    double sw, w, s;  // repump-selected class combinations
};

// With one excited site out of three carrying optical density D0 at zero
// field, pumped classes retain rho of their resonant population:
//   D_sw = (2/3) D0 rho,  D_w = D_sw R/(1+R),  D_s = D_sw/(1+R).
CompositeDensities composite_densities(double D0, double rho, double R);

struct EchoModel {
    std::function<double(double)> g;  // pulse-area response, g(0)=0, bounded
    double mu_sq = 1;                 // strong-transition strength mu_s^2
};

enum class Branch { strong, weak };

// strong: mu_sq * g(mu_sq * I);  weak: R * strong(R * I)  (exact identity —
// the weak leg scales both the coupling and the effective drive by R).
double echo_intensity(const EchoModel& m, double I, Branch branch, double R);

// Two-pulse-echo response for equal-intensity pulses with area a*sqrt(x):
// g(x) = sin^2(a sqrt x) sin^4(a sqrt x / 2).  mu_sq = 1/(1+R) so that
// mu_s^2 + mu_w^2 = 1.
EchoModel default_echo_model(double area_coeff, double R);

// t_pi_strong / sqrt(R); the weak transition needs R > 0.
double pi_pulse_duration(double t_pi_strong_us, double R);

}  // namespace tmsim
