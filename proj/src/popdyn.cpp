#include "tmsim/popdyn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmsim {

const char* class_name(IonClass::Id id) {
    switch (id) {
        case IonClass::i: return "i";
        case IonClass::ii: return "ii";
        case IonClass::iii: return "iii";
        case IonClass::iv: return "iv";
    }
    return "?";
}

namespace {

bool is_strong(const Transition& t) {
    // strong pairs: 1-3 and 2-4; weak: 1-4 and 2-3
    return (t.ground == 1) == (t.excited == 3);
}

// Transition frequency for an ion whose line `res` sits exactly at nu0,
// relative to nu0.  Level energies: E2 = E1 + dg, E4 = E3 + de.
double offset_of(const Transition& t, const Transition& res, double dg, double de) {
    auto e = [&](const Transition& tr) {
        return (tr.excited == 4 ? de : 0.0) - (tr.ground == 2 ? dg : 0.0);
    };
    return e(t) - e(res);
}

}  // namespace

std::array<IonClass, 4> enumerate_classes(double delta_g, double delta_e,
                                          const LambdaParams& lp) {
    if (!(delta_g > 0) || !(delta_e > 0))
        throw std::invalid_argument("enumerate_classes: splittings must be positive");
    if (std::abs(delta_g - delta_e) <= 1e-9 * std::max(delta_g, delta_e))
        throw std::invalid_argument(
            "enumerate_classes: delta_g == delta_e is degenerate (holes and "
            "antiholes collide)");

    const double s = lp.mu_s * lp.mu_s, w = lp.mu_w * lp.mu_w;
    const std::array<Transition, 4> all{{{1, 3}, {1, 4}, {2, 3}, {2, 4}}};
    // resonant transition per class: (i) strong from |1>, (ii) weak from |1>,
    // (iii) strong from |2>, (iv) weak from |2>
    const std::array<Transition, 4> res{{{1, 3}, {1, 4}, {2, 4}, {2, 3}}};

    std::array<IonClass, 4> classes;
    for (int c = 0; c < 4; ++c) {
        IonClass& ic = classes[c];
        ic.id = static_cast<IonClass::Id>(c);
        ic.resonant = res[c];
        ic.resonant_strength = is_strong(res[c]) ? s : w;
        for (int k = 0; k < 4; ++k) {
            ic.lines[k].t = all[k];
            ic.lines[k].offset_MHz = offset_of(all[k], res[c], delta_g, delta_e);
            ic.lines[k].strength = is_strong(all[k]) ? s : w;
        }
    }
    return classes;
}

double steady_state_fraction(const PumpParams& pp) {
    if (pp.p < 0 || pp.r < 0 || pp.kappa < 0)
        throw std::invalid_argument("steady_state_fraction: rates must be >= 0");
    const double den = pp.p + pp.r + 2 * pp.kappa;
    if (den <= 0)
        throw std::invalid_argument("steady_state_fraction: p + r + 2 kappa must be > 0");
    return (pp.r + pp.kappa) / den;
}

std::vector<SpectrumFeature> spectrum_features(
    const std::array<IonClass, 4>& classes,
    const std::array<double, 4>& resonant_population) {
    for (double p : resonant_population)
        if (p < 0 || p > 1)
            throw std::invalid_argument("spectrum_features: populations must be in [0,1]");

    // Gather strength * (population change of the line's ground sublevel) per
    // offset.  The resonant sublevel moved from 1/2 to rho; the other one
    // holds the complement.  The same physical offset can come out of
    // different arithmetic paths (e.g. -dg as (de-dg)-de), so merging is done
    // within a tolerance, not by exact key.
    struct Piece {
        double offset, amp;
        SpectrumFeature::Contribution contrib;
    };
    std::vector<Piece> pieces;
    for (int c = 0; c < 4; ++c) {
        const IonClass& ic = classes[c];
        const double d_res = resonant_population[c] - 0.5;
        for (const auto& ln : ic.lines) {
            const double dpop = (ln.t.ground == ic.resonant.ground) ? d_res : -d_res;
            pieces.push_back({ln.offset_MHz, ln.strength * dpop,
                              {ic.id, ln.t, ln.strength}});
        }
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.offset < b.offset; });

    constexpr double kMergeTol = 1e-9;  // MHz
    const double de = std::abs(classes[0].lines[1].offset_MHz -
                               classes[0].lines[0].offset_MHz);  // |(1-4)-(1-3)| = delta_e
    std::vector<SpectrumFeature> out;
    for (const auto& pc : pieces) {
        if (out.empty() || pc.offset - out.back().offset_MHz > kMergeTol) {
            SpectrumFeature f;
            f.offset_MHz = pc.offset;
            const double a = std::abs(pc.offset);
            // positional kinds: offsets reachable without a ground-sublevel
            // change (0 and +-delta_e) are holes, the rest antiholes
            f.kind = (a < kMergeTol || std::abs(a - de) < kMergeTol)
                         ? SpectrumFeature::hole
                         : SpectrumFeature::antihole;
            f.amplitude = 0;
            out.push_back(std::move(f));
        }
        out.back().amplitude += pc.amp;
        out.back().contributors.push_back(pc.contrib);
    }
    std::erase_if(out, [](const SpectrumFeature& f) { return f.amplitude == 0; });
    return out;
}

Trace synth_spectrum(const std::vector<SpectrumFeature>& features,
                     double D_background, double hole_fwhm_MHz,
                     double antihole_extra_fwhm_MHz,
                     const std::vector<double>& offset_grid_MHz) {
    if (!(hole_fwhm_MHz > 0))
        throw std::invalid_argument("synth_spectrum: hole width must be > 0");
    if (antihole_extra_fwhm_MHz < 0)
        throw std::invalid_argument("synth_spectrum: antihole extra width must be >= 0");
    if (offset_grid_MHz.empty())
        throw std::invalid_argument("synth_spectrum: empty grid");

    Trace tr;
    tr.x_label = "offset_MHz";
    tr.y_label = "transmission";
    tr.x = offset_grid_MHz;
    tr.y.resize(tr.x.size());

    double span_needed = 0;
    for (const auto& f : features)
        span_needed = std::max(span_needed, std::abs(f.offset_MHz));
    const double glo = offset_grid_MHz.front(), ghi = offset_grid_MHz.back();
    if (!features.empty() && (glo > -span_needed || ghi < span_needed))
        tr.warnings.push_back("grid narrower than feature span");

    for (size_t k = 0; k < tr.x.size(); ++k) {
        double dD = 0;
        for (const auto& f : features) {
            const double fwhm = hole_fwhm_MHz +
                                (f.kind == SpectrumFeature::antihole ? antihole_extra_fwhm_MHz : 0.0);
            const double hw = fwhm / 2;
            const double d = tr.x[k] - f.offset_MHz;
            dD += f.amplitude * hw * hw / (hw * hw + d * d);  // peak-normalized Lorentzian
        }
        tr.y[k] = std::pow(10.0, -(D_background + dD));
    }
    return tr;
}

double hole_decay(double depth0, double T1_s, double t_s) {
    if (!(T1_s > 0)) throw std::invalid_argument("hole_decay: T1 must be > 0");
    return depth0 * std::exp(-t_s / T1_s);
}

}  // namespace tmsim
