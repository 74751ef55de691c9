#include "tmsim/coherent.hpp"

#include <cmath>
#include <stdexcept>

#include "tmsim/bessel.hpp"

namespace tmsim {

Trace nutation_trace(const NutationParams& np) {
    if (!(np.omega > 0)) throw std::invalid_argument("nutation_trace: omega must be > 0");
    if (np.D >= 0.5)
        throw std::invalid_argument(
            "nutation_trace: D >= 0.5 breaks the low-density model");
    if (np.D < 0) throw std::invalid_argument("nutation_trace: D must be >= 0");

    const double depth = 2 * (1 - std::pow(10.0, -np.D));
    Trace tr;
    tr.x_label = "t_us";
    tr.y_label = "intensity_rel";
    tr.x = np.t_grid;
    tr.y.reserve(tr.x.size());
    for (double t : tr.x) {
        if (t < 0) throw std::invalid_argument("nutation_trace: negative time");
        // j1_over_x carries the t->0 limit, so I(0) = 10^-D exactly
        tr.y.push_back(1 - depth * j1_over_x(np.omega * t));
    }
    return tr;
}

double first_max_time(double omega) {
    if (!(omega > 0)) throw std::invalid_argument("first_max_time: omega must be > 0");
    // dI/dt ~ -d/dx[J1(x)/x] = J2(x)/x: the first interior extremum (a
    // maximum, since the trace rises from 10^-D) sits at the first J2 zero
    return j2_first_zero() / omega;
}

double density_from_contrast(double I_inf, double I_0) {
    if (!(I_0 > 0) || !(I_inf > 0))
        throw std::invalid_argument("density_from_contrast: intensities must be > 0");
    if (I_inf < I_0)
        throw std::invalid_argument("density_from_contrast: I_inf < I_0");
    return std::log10(I_inf / I_0);
}

CompositeDensities composite_densities(double D0, double rho, double R) {
    if (D0 < 0) throw std::invalid_argument("composite_densities: D0 must be >= 0");
    if (rho < 0 || rho > 1)
        throw std::invalid_argument("composite_densities: rho must be in [0,1]");
    if (R < 0 || R > 1)
        throw std::invalid_argument("composite_densities: R must be in [0,1]");

    CompositeDensities d;
    d.sw = (2.0 / 3.0) * D0 * rho;
    d.w = d.sw * R / (1 + R);
    d.s = d.sw / (1 + R);
    return d;
}

double echo_intensity(const EchoModel& m, double I, Branch branch, double R) {
    if (I < 0) throw std::invalid_argument("echo_intensity: negative drive");
    if (R < 0 || R > 1) throw std::invalid_argument("echo_intensity: R must be in [0,1]");
    if (!m.g) throw std::invalid_argument("echo_intensity: no g function");

    if (branch == Branch::strong) return m.mu_sq * m.g(m.mu_sq * I);
    // weak leg: both the detected coupling and the effective drive scale by R
    return R * echo_intensity(m, R * I, Branch::strong, R);
}

EchoModel default_echo_model(double area_coeff, double R) {
    if (!(area_coeff > 0))
        throw std::invalid_argument("default_echo_model: area coefficient must be > 0");
    EchoModel m;
    m.mu_sq = 1.0 / (1 + R);
    m.g = [area_coeff](double x) {
        const double th = area_coeff * std::sqrt(x);
        const double s1 = std::sin(th), s2 = std::sin(th / 2);
        return s1 * s1 * s2 * s2 * s2 * s2;
    };
    return m;
}

double pi_pulse_duration(double t_pi_strong_us, double R) {
    if (!(t_pi_strong_us > 0))
        throw std::invalid_argument("pi_pulse_duration: strong duration must be > 0");
    if (!(R > 0))
        throw std::invalid_argument(
            "pi_pulse_duration: R = 0 means the weak transition is forbidden");
    if (R > 1) throw std::invalid_argument("pi_pulse_duration: R must be <= 1");
    return t_pi_strong_us / std::sqrt(R);
}

}  // namespace tmsim
