#pragma once

// Bessel functions J0, J1, J2 of a real argument, accurate to ~1e-11 relative.
// Power series for |x| <= 12 accumulated in long double; standard Hankel
// asymptotic expansion (P/Q auxiliary series truncated at the minimal term)
// beyond.  The crossover sits at 12 rather than the textbook 8 because the
// truncated asymptotic series bottoms out near e^(-2x): ~1e-7 at x=8, ~4e-11
// at x=12.

namespace tmsim {

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_j2(double x);  // 2 J1(x)/x - J0(x), with the x->0 limit handled

// J1(x)/x, continuous through x = 0 where it equals 1/2.
double j1_over_x(double x);

// First positive zero of J2 (~5.1356), by bracketed bisection on [4.5, 6].
// This is where the nutation trace has its first maximum.
double j2_first_zero();

}  // namespace tmsim
