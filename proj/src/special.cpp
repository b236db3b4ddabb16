#include "decaylab/special.hpp"

#include <cmath>

namespace decaylab::special {

double sph_j(int l, double x) {
  if (l == 0) {
    if (std::abs(x) < 1e-4) {
      const double x2 = x * x;
      return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
  }
  if (l == 1 && x > 0.5) return (std::sin(x) / x - std::cos(x)) / x;
  return std::sph_bessel(static_cast<unsigned>(l), x);
}

double sph_y(int l, double x) {
  if (l == 0) return -std::cos(x) / x;
  if (l == 1) return (-std::cos(x) / x - std::sin(x)) / x;
  return std::sph_neumann(static_cast<unsigned>(l), x);
}

std::complex<double> sph_h(int l, double x) { return {sph_j(l, x), sph_y(l, x)}; }

// f_l'(x) = (l/x) f_l(x) - f_{l+1}(x)
double sph_j_prime(int l, double x) {
  if (l == 0) return -sph_j(1, x);
  return l / x * sph_j(l, x) - sph_j(l + 1, x);
}

std::complex<double> sph_h_prime(int l, double x) {
  if (l == 0) return -sph_h(1, x);
  return static_cast<double>(l) / x * sph_h(l, x) - sph_h(l + 1, x);
}

}  // namespace decaylab::special
