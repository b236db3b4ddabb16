#pragma once

#include <complex>

namespace decaylab::special {

/// Spherical Bessel j_l(x), x > 0.
double sph_j(int l, double x);
/// Spherical Neumann y_l(x), x > 0.
double sph_y(int l, double x);
/// Outgoing spherical Hankel h_l^(1)(x) = j_l + i y_l.
std::complex<double> sph_h(int l, double x);

double sph_j_prime(int l, double x);
std::complex<double> sph_h_prime(int l, double x);

}  // namespace decaylab::special
