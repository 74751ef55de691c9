#include "tmsim/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tmsim {

namespace {

constexpr double kSeriesLimit = 12.0;

// Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!).  Terms near
// x = 12 reach ~4e3 while the result is ~0.2, so the alternating sum is
// accumulated in long double to keep the cancellation harmless.
double series_jn(int n, double x) {
    const long double hx = 0.5L * static_cast<long double>(x);
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= hx / k;  // (x/2)^n / n!
    long double sum = term;
    const long double qx = hx * hx;
    for (int k = 1; k < 200; ++k) {
        term *= -qx / (static_cast<long double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-25L * std::abs(sum) + 1e-300L) break;
    }
    return static_cast<double>(sum);
}

// Hankel form J_n = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x-(2n+1)pi/4,
// with the P/Q auxiliary series c_m = c_{m-1} (mu-(2m-1)^2)/(8 m x), mu = 4n^2,
// truncated at the minimal term (the series is asymptotic, not convergent).
double hankel_jn(int n, double x) {
    const long double mu = 4.0L * n * n;
    long double c = 1.0L, P = 1.0L, Q = 0.0L;
    long double prev = 1.0L;
    double sign_p = -1, sign_q = 1;
    for (int m = 1; m <= 40; ++m) {
        c *= (mu - (2.0L * m - 1) * (2.0L * m - 1)) / (8.0L * m * x);
        if (std::abs(c) > prev && m > 4) break;  // started diverging
        prev = std::abs(c);
        if (m % 2 == 1) {
            Q += sign_q * c;
            sign_q = -sign_q;
        } else {
            P += sign_p * c;
            sign_p = -sign_p;
        }
        if (std::abs(c) < 1e-19L) break;
    }
    const long double chi =
        static_cast<long double>(x) - (2 * n + 1) * std::numbers::pi_v<long double> / 4;
    const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
    return static_cast<double>(amp * (P * std::cos(chi) - Q * std::sin(chi)));
}

double jn(int n, double x) {
    // J_n(-x) = (-1)^n J_n(x)
    const double ax = std::abs(x);
    double v = ax <= kSeriesLimit ? series_jn(n, ax) : hankel_jn(n, ax);
    if (x < 0 && (n % 2)) v = -v;
    return v;
}

}  // namespace

double bessel_j0(double x) { return jn(0, x); }
double bessel_j1(double x) { return jn(1, x); }

double bessel_j2(double x) {
    const double ax = std::abs(x);
    // the 2 J1/x - J0 recurrence cancels catastrophically near 0, so the
    // series covers everything up to the asymptotic switch
    if (ax <= kSeriesLimit) return series_jn(2, ax);
    return 2 * bessel_j1(ax) / ax - bessel_j0(ax);
}

double j1_over_x(double x) {
    if (std::abs(x) < 1e-8) {
        // J1(x)/x = 1/2 - x^2/16 + ...
        return 0.5 - x * x / 16;
    }
    return bessel_j1(x) / x;
}

double j2_first_zero() {
    // J2 is positive from 0 up to its first zero (~5.1356) and negative after;
    // bisection on a fixed bracket is plenty at double precision.
    double lo = 4.5, hi = 6.0;
    if (!(bessel_j2(lo) > 0) || !(bessel_j2(hi) < 0))
        throw std::runtime_error("j2_first_zero: bracket lost");  // unreachable
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bessel_j2(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace tmsim
