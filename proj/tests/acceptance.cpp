// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances are pinned here on purpose; loosening them is a red flag.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tmsim/analysis.hpp"
#include "tmsim/bessel.hpp"
#include "tmsim/coherent.hpp"
#include "tmsim/geometry.hpp"
#include "tmsim/popdyn.hpp"
#include "tmsim/rng.hpp"
#include "tmsim/zeeman.hpp"

using namespace tmsim;

namespace {

int g_failures = 0;

constexpr double kPi = std::numbers::pi;

void report(int n, bool pass, const std::string& what) {
    std::printf("[%s] %2d. %s\n", pass ? "PASS" : "FAIL", n, what.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

LambdaParams lambda_with_R(double R) {
    LambdaParams lp;
    lp.R = R;
    lp.mu_s = std::sqrt(1 / (1 + R));
    lp.mu_w = std::sqrt(R / (1 + R));
    return lp;
}

const LevelPair kTensors{{18.2605, 403.0, 0.0}, {14.5411, 100.4, 12.0}};

// ---- 1: first-maximum position of the generated nutation trace ----------

void criterion_1() {
    const double omega = 2 * kPi * 2.6;
    NutationParams np;
    np.omega = omega;
    np.D = 0.32;
    const int n = 2001;
    for (int i = 0; i < n; ++i) np.t_grid.push_back(0.6 * i / (n - 1));
    const Trace tr = nutation_trace(np);

    std::size_t k = 0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.y[i] > tr.y[k]) k = i;
    double t_max = tr.x[k];
    if (k > 0 && k + 1 < tr.size()) {
        // parabolic refinement through the three samples around the maximum
        const double ym = tr.y[k - 1], y0 = tr.y[k], yp = tr.y[k + 1];
        const double denom = ym - 2 * y0 + yp;
        if (denom != 0)
            t_max += 0.5 * (ym - yp) / denom * (tr.x[k + 1] - tr.x[k]);
    }
    const double prod = omega * t_max;
    report(1, std::abs(prod - 5.1356) <= 1e-3,
           fmt("nutation trace peaks at omega*t = %.6f (want 5.1356 +- 0.001)", prod));
}

// ---- 2: nutation fit round trip under noise -----------------------------

void criterion_2() {
    const double omega = 2 * kPi * 2.6, D = 0.32;
    NutationParams np;
    np.omega = omega;
    np.D = D;
    // window chosen to sample the dip densely: ~19 points inside omega*t < 1.5
    // where the trace is most sensitive to D
    for (int i = 0; i < 400; ++i) np.t_grid.push_back(2.0 * i / 399);
    const Trace clean = nutation_trace(np);

    int good = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Trace tr = clean;
        NoiseGen ng(split_seed(7, static_cast<std::uint64_t>(seed)));
        ng.add_gaussian(tr.y, 0.01);
        try {
            const FitResult f = fit_nutation(tr);
            const double om = f.params.at("omega_rad_per_us");
            const double d = f.params.at("D");
            if (std::abs(om - omega) <= 0.02 * omega && std::abs(d - D) <= 0.02 * D)
                ++good;
        } catch (const std::exception&) {
        }
    }
    report(2, good >= 95,
           fmt("noisy nutation fit: omega and D both within 2%% in %.0f/100 seeds "
               "(want >= 95)",
               good));
}

// ---- 3, 4: closed-form extractions --------------------------------------

void criterion_3() {
    const double R = extract_R_from_densities(0.018, 0.167).value;
    const bool pass = std::abs(R - 0.121) <= 1e-3 && std::abs(R - 0.12) <= 0.03;
    report(3, pass,
           fmt("density ratio 0.018/0.167 gives R = %.6f (want 0.121 +- 0.001, "
               "inside 0.12 +- 0.03)",
               R));
}

void criterion_4() {
    const double rho = extract_rho(0.167, 0.36);
    report(4, std::abs(rho - 0.696) <= 1e-3,
           fmt("composite density 0.167 at D0 = 0.36 gives rho = %.6f "
               "(want 0.696 +- 0.001)",
               rho));
}

// ---- 5: echo crossing round trip ----------------------------------------

EchoDataset echo_dataset(double R) {
    const EchoModel m = default_echo_model(1.4, R);
    EchoDataset d;
    d.I0 = 1.0;
    for (int i = 0; i < 8; ++i) {
        const double u = 0.03 + 0.28 * i / 7;
        d.drive.push_back(u);
        d.echo.push_back(echo_intensity(m, u, Branch::strong, R));
    }
    d.Iw_at_I0 = echo_intensity(m, 1.0, Branch::weak, R);
    return d;
}

void criterion_5() {
    const double R_true = 0.130;
    const double R0 = solve_R_from_echo(echo_dataset(R_true)).value;
    const bool clean_ok = std::abs(R0 - R_true) <= 0.005;

    int good = 0;
    for (int seed = 0; seed < 100; ++seed) {
        EchoDataset d = echo_dataset(R_true);
        NoiseGen ng(split_seed(11, static_cast<std::uint64_t>(seed)));
        ng.mul_lognormal(d.echo, 0.03);
        std::vector<double> w{d.Iw_at_I0};
        ng.mul_lognormal(w, 0.03);
        d.Iw_at_I0 = w[0];
        try {
            if (std::abs(solve_R_from_echo(d).value - R_true) <= 0.015) ++good;
        } catch (const std::exception&) {
        }
    }
    report(5, clean_ok && good >= 90,
           fmt("echo crossing: clean R = %.6f (want 0.130 +- 0.005); 3%% noise "
               "within +-0.015 in %.0f/100 seeds (want >= 90)",
               R0, good));
}

// ---- 6: spectrum feature positions and sum rule -------------------------

void criterion_6() {
    // 38.2 and 15.5 MHz/T at 0.19 T, taken at the quoted 3-digit working
    // values; the offset set below is self-consistent at exactly these
    const double dg = 7.26, de = 2.945;
    const auto feats =
        spectrum_features(enumerate_classes(dg, de, lambda_with_R(0.2)),
                          {0.3, 0.3, 0.3, 0.3});
    const std::vector<double> want{-10.205, -7.26, -4.315, -2.945, 0.0,
                                   2.945,   4.315, 7.26,   10.205};
    bool offsets_ok = feats.size() == want.size();
    double worst = 0;
    if (offsets_ok)
        for (std::size_t i = 0; i < want.size(); ++i)
            worst = std::max(worst, std::abs(feats[i].offset_MHz - want[i]));
    offsets_ok = offsets_ok && worst <= 1e-6;

    double sum = 0;
    for (const auto& f : feats) sum += f.amplitude;

    const auto feats0 =
        spectrum_features(enumerate_classes(dg, de, lambda_with_R(0.0)),
                          {0.3, 0.3, 0.3, 0.3});
    bool outer_gone = true;
    for (const auto& f : feats0)
        outer_gone = outer_gone && std::abs(std::abs(f.offset_MHz) - (dg + de)) > 1e-6;

    report(6, offsets_ok && std::abs(sum) < 1e-10 && outer_gone,
           fmt("spectrum features: max offset error %.2e (want <= 1e-6), "
               "|sum amps| = %.2e (want < 1e-10); outer antiholes ",
               worst, std::abs(sum)) +
               (outer_gone ? "absent" : "PRESENT") + " at R = 0");
}

// ---- 7: lifetime fit under noise ----------------------------------------

void criterion_7() {
    std::vector<double> t;
    for (int i = 0; i < 25; ++i) t.push_back(12.0 * i / 24);

    int good = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::vector<double> y;
        for (double ti : t) y.push_back(std::exp(-ti / 4.5));
        NoiseGen ng(split_seed(13, static_cast<std::uint64_t>(seed)));
        ng.add_gaussian(y, 0.05);
        try {
            const FitResult f = fit_exponential(t, y);
            if (std::abs(f.params.at("T1_s") - 4.5) <= 0.5) ++good;
        } catch (const std::exception&) {
        }
    }
    report(7, good >= 90,
           fmt("noisy 4.5 s decay: T1 within +-0.5 s in %.0f/100 seeds (want >= 90)",
               good));
}

// ---- 8: polarization selection rules and site-group equivalence ---------

bool sites_are(const std::vector<SiteCoupling>& sc, const std::vector<int>& want,
               double* coupling_spread) {
    if (sc.size() != want.size()) return false;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < sc.size(); ++i) {
        if (sc[i].site != want[i]) return false;
        lo = std::min(lo, sc[i].coupling);
        hi = std::max(hi, sc[i].coupling);
    }
    *coupling_spread = hi - lo;
    return true;
}

void criterion_8() {
    const FrameSet fs = default_frames();
    double s111 = 0, s111b = 0;
    const bool ok111 = sites_are(excited_sites(Vec3(1, 1, 1), fs), {1, 3, 5}, &s111);
    const bool ok111b =
        sites_are(excited_sites(Vec3(-1, -1, 1), fs), {1, 4, 6}, &s111b);
    const bool equal_ok = s111 <= 1e-12 && s111b <= 1e-12;

    double worst = 0;
    for (int i = 0; i <= 180; ++i) {
        const double th = -90.0 + i;
        const Vec3 B = bisector_field(th, 0.23);
        const Vec3 f3 = local_field(fs[3], B), f5 = local_field(fs[5], B);
        const Vec3 f4 = local_field(fs[4], B), f6 = local_field(fs[6], B);
        for (int c = 0; c < 3; ++c) {
            worst = std::max(worst, std::abs(std::abs(f3[c]) - std::abs(f5[c])));
            worst = std::max(worst, std::abs(std::abs(f4[c]) - std::abs(f6[c])));
        }
    }
    report(8, ok111 && ok111b && equal_ok && worst <= 1e-12,
           fmt("selection rules {1,3,5}/{1,4,6} with coupling spread %.1e; "
               "site-pair field equivalence over 181 angles: %.1e (want <= 1e-12)",
               std::max(s111, s111b), worst));
}

// ---- 9: property suites -------------------------------------------------

void criterion_9() {
    double worst_frame = 0;
    for (const FrameSet& fs :
         {default_frames(), load_frames(std::string(TMSIM_CONFIG_DIR) + "/frames.cfg")}) {
        for (int s = 1; s <= 6; ++s) {
            const SiteFrame& f = fs[s];
            worst_frame = std::max({worst_frame, std::abs(f.x.dot(f.y)),
                                    std::abs(f.x.dot(f.z)), std::abs(f.y.dot(f.z)),
                                    std::abs(f.x.norm() - 1), std::abs(f.y.norm() - 1),
                                    std::abs(f.z.norm() - 1),
                                    (f.x.cross(f.y) - f.z).norm()});
        }
    }

    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> u(0, 1);
    double worst_comp = 0, worst_inv = 0;
    for (int k = 0; k < 1000; ++k) {
        const double D0 = 0.05 + u(eng), rho = 0.05 + 0.95 * u(eng),
                     R = 0.01 + 0.99 * u(eng);
        const auto d = composite_densities(D0, rho, R);
        worst_comp = std::max(worst_comp, std::abs(d.w + d.s - d.sw));
        worst_inv = std::max(
            worst_inv, std::abs(extract_R_from_densities(d.w, d.sw).value - R));
    }

    double worst_echo = 0;
    for (int k = 0; k < 50; ++k) {
        const double a = 0.3 + 2 * u(eng), b = 0.1 + u(eng), R = 0.01 + 0.99 * u(eng);
        EchoModel m;
        m.mu_sq = 1 / (1 + R);
        m.g = [a, b](double x) { return std::sin(a * x) * std::exp(-b * x) + x / (1 + x * x); };
        for (double I = 0.02; I < 2.0; I += 0.11) {
            const double weak = echo_intensity(m, I, Branch::weak, R);
            const double ref = R * m.mu_sq * m.g(m.mu_sq * R * I);
            worst_echo = std::max(worst_echo, std::abs(weak - ref));
        }
    }

    double worst_bessel = 0;
    for (double x = -90; x <= 90; x += 0.1) {
        worst_bessel = std::max(
            {worst_bessel, std::abs(bessel_j0(x) - oracle::bessel_jn(0, x)),
             std::abs(bessel_j1(x) - oracle::bessel_jn(1, x)),
             std::abs(bessel_j2(x) - oracle::bessel_jn(2, x))});
    }

    const bool pass = worst_frame <= 1e-12 && worst_comp <= 1e-12 &&
                      worst_inv <= 1e-10 && worst_echo <= 1e-12 &&
                      worst_bessel <= 1e-10;
    report(9, pass,
           fmt("properties: frames %.1e, density sum %.1e, R inversion %.1e",
               worst_frame, worst_comp, worst_inv) +
               fmt(", echo identity %.1e, Bessel vs oracle %.1e", worst_echo,
                   worst_bessel));
}

// ---- 10: sweep shape near the maximum -----------------------------------

void criterion_10() {
    // The absolute height and position of the R maximum depend on the tensor
    // set in use, so they are not pinned; the shape is: an interior maximum
    // whose +-1 degree neighborhood stays within 10%.
    std::vector<double> grid;
    for (int i = 0; i <= 900; ++i) grid.push_back(-90.0 + 0.1 * i);
    const auto pts = sweep_R(kTensors, default_frames()[3], grid, 0.19);

    double r_max = -1, th_max = 0;
    for (const auto& p : pts)
        if (p.value && p.value->R > r_max) {
            r_max = p.value->R;
            th_max = p.theta_deg;
        }
    const bool interior = th_max > -89.9 && th_max < -0.1;

    auto r_at = [&](double th) {
        return lambda_for(kTensors, local_field(default_frames()[3],
                                                bisector_field(th, 0.19)))
            .R;
    };
    const double dev = std::max(std::abs(r_at(th_max - 1) - r_max),
                                std::abs(r_at(th_max + 1) - r_max)) /
                       r_max;
    report(10, interior && dev <= 0.10,
           fmt("R(theta) maximum is interior (%.1f deg, R = %.4f) and flat to "
               "%.3f over +-1 deg (want <= 0.10)",
               th_max, r_max, dev));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s: %d/10 criteria\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
                10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
