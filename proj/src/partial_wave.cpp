#include "decaylab/partial_wave.hpp"

#include <cmath>

#include "decaylab/special.hpp"

namespace decaylab {

using special::sph_h;
using special::sph_h_prime;
using special::sph_j;
using special::sph_j_prime;

PartialWave partial_wave(const RadialGrid& grid, int l, double lambda, bool dirichlet, bool derivatives) {
  require(l >= 0, ErrorCode::invalid_argument, "partial_wave: degree must be non-negative");
  require(lambda >= 0.0, ErrorCode::invalid_argument, "partial_wave: frequency must be non-negative");
  const double a_obs = dirichlet ? grid.domain().a : 0.0;
  if (dirichlet)
    require(grid.domain().is_ball() && std::abs(grid.r_min() - a_obs) <= 1e-12 * a_obs,
            ErrorCode::invalid_argument, "partial_wave: grid inner endpoint must equal the obstacle radius");
  const auto n = static_cast<Eigen::Index>(grid.size());
  PartialWave pw;
  pw.a.resize(n);
  pw.b.resize(n);
  const cplx I(0.0, 1.0);

  if (lambda == 0.0) {
    require(!derivatives, ErrorCode::invalid_argument, "partial_wave: no lambda-derivative at zero energy");
    const double a_pow = std::pow(a_obs, 2 * l + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = grid.nodes()[i];
      const double reg = std::pow(r, l) - (dirichlet ? a_pow * std::pow(r, -(l + 1)) : 0.0);
      pw.a[i] = reg / (2.0 * l + 1.0);
      pw.b[i] = std::pow(r, -(l + 1));
    }
    return pw;
  }

  cplx c = 0.0, dc = 0.0;
  if (dirichlet) {
    const double xa = lambda * a_obs;
    const cplx ha = sph_h(l, xa);
    require(std::abs(ha) > 1e-300, ErrorCode::domain_error,
            "partial_wave: radial Hankel factor vanishes at the obstacle (reflection coefficient undefined)");
    const double ja = sph_j(l, xa);
    c = ja / ha;
    dc = a_obs * (sph_j_prime(l, xa) * ha - ja * sph_h_prime(l, xa)) / (ha * ha);
  }
  if (derivatives) {
    pw.da.resize(n);
    pw.db.resize(n);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = grid.nodes()[i];
    const double x = lambda * r;
    const double j = sph_j(l, x);
    const cplx h = sph_h(l, x);
    const cplx reg = j - c * h;
    pw.a[i] = I * lambda * reg;
    pw.b[i] = h;
    if (derivatives) {
      const double jp = sph_j_prime(l, x);
      const cplx hp = sph_h_prime(l, x);
      pw.da[i] = I * reg + I * lambda * (r * jp - dc * h - c * r * hp);
      pw.db[i] = r * hp;
    }
  }
  return pw;
}

}  // namespace decaylab
