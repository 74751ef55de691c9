#pragma once

// Four-class optical-pumping population model and hole-burning spectrum
// synthesis.
//
// Level labels: |1>,|2> ground sublevels (|2> above |1> by delta_g), |3>,|4>
// excited sublevels (|4> above |3> by delta_e).  Strong transitions are 1-3
// and 2-4 (dipole mu_s), weak ones 1-4 and 2-3 (mu_w).  A fixed laser at nu0
// addresses four classes of ions, one per transition it can be resonant with:
//
//   class  resonant  strength   remaining lines (offset from nu0, strength)
//   (i)    1-3       mu_s^2     1-4:+de,w   2-3:-dg,w      2-4:-dg+de,s
//   (ii)   1-4       mu_w^2     1-3:-de,s   2-3:-dg-de,w   2-4:-dg,s
//   (iii)  2-4       mu_s^2     2-3:-de,w   1-3:+dg-de,s   1-4:+dg,w
//   (iv)   2-3       mu_w^2     2-4:+de,s   1-3:+dg,s      1-4:+dg+de,w
//
// Pumping empties the resonant ground sublevel into the other one; probing
// then sees holes at 0 and +-de and antiholes at +-dg and +-(dg+-de).  The
// +-(dg+de) antiholes are reached only through weak transitions, so they
// vanish identically when R = 0.

#include <array>
#include <vector>

#include "tmsim/trace.hpp"
#include "tmsim/zeeman.hpp"

namespace tmsim {

struct Transition {
    int ground;   // 1 or 2
    int excited;  // 3 or 4
};

struct IonClass {
    enum Id { i = 0, ii, iii, iv };

    Id id;
    Transition resonant;
    double resonant_strength;  // mu_s^2 or mu_w^2

    struct Line {
        Transition t;
        double offset_MHz;  // relative to nu0
        double strength;    // mu_s^2 or mu_w^2
    };
    std::array<Line, 4> lines;  // all four transitions, resonant included
};

const char* class_name(IonClass::Id id);  // "i".."iv"

// Throws std::invalid_argument when delta_g or delta_e is not positive, or
// when delta_g == delta_e (feature collision; degenerate input).
std::array<IonClass, 4> enumerate_classes(double delta_g, double delta_e,
                                          const LambdaParams& lp);

struct PumpParams {
    double p = 0;      // pumping rate out of the resonant sublevel, 1/s
    double r = 0;      // repumping rate back into it, 1/s
    double kappa = 0;  // sublevel relaxation rate, 1/s
};

// Steady-state population fraction of the resonant ground sublevel,
// rho = (r + kappa) / (p + r + 2 kappa).  Throws on a zero denominator.
double steady_state_fraction(const PumpParams& pp);

struct SpectrumFeature {
    enum Kind { hole, antihole };  // positional: 0,+-de holes; the rest antiholes

    double offset_MHz;
    Kind kind;
    double amplitude;  // dimensionless absorption change; holes < 0 when pumped

    struct Contribution {
        IonClass::Id cls;
        Transition t;
        double strength;
    };
    std::vector<Contribution> contributors;
};

// Absorption changes per distinct offset.  resonant_population[c] is the
// steady-state population of class c's resonant ground sublevel (the other
// sublevel holds the complement; each class's two populations always sum
// to 1).  Equal populations (all 1/2) produce no features.
std::vector<SpectrumFeature> spectrum_features(
    const std::array<IonClass, 4>& classes,
    const std::array<double, 4>& resonant_population);

// Renders features on an offset grid: each one a peak-normalized Lorentzian
// absorption change, transmission = 10^-(D_background + dD(nu)).  Antiholes
// get antihole_extra_fwhm added to their width (ground-splitting
// inhomogeneity).  A grid narrower than the feature span sets a warning on
// the returned trace.  Widths are FWHM in MHz, > 0 required.
Trace synth_spectrum(const std::vector<SpectrumFeature>& features,
                     double D_background, double hole_fwhm_MHz,
                     double antihole_extra_fwhm_MHz,
                     const std::vector<double>& offset_grid_MHz);

// depth0 * exp(-t/T1); T1 > 0 required.
double hole_decay(double depth0, double T1_s, double t_s);

}  // namespace tmsim
