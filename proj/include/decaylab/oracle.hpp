#pragma once

// Ground truth that does not go through the resolvents: the radial d'Alembert
// formula for the free wave and a leapfrog solver for w = r u.

#include <vector>

#include "decaylab/core_model.hpp"

namespace decaylab {

/// u and u_t on a grid; the oracle's own result type (no spectral dependency).
struct OracleState {
  double t = 0.0;
  ModeField u;
  ModeField ut;
};

/// Exact free solution for l = 0 on whole space: w = r u is
/// w(t, r) = [F(r+t) + F(r-t)]/2 + (1/2) int_{r-t}^{r+t} G with F, G the odd extensions of r f, r g.
OracleState kirchhoff_free_propagate(double t, const ModeField& f, const ModeField& g);

struct TimeDomainOptions {
  double dr = 0.005;
  double cfl = 0.5;
  double margin = 2.0;  // extra room beyond r_supp + T
};

struct TimeDomainResult {
  std::vector<OracleState> states;  // on the data grid, at the requested times
  double energy_drift = 0.0;        // max |E_n - E_0| / E_0 of the conserved discrete energy
  double dt = 0.0;
  std::size_t steps = 0;
  // raw finite-difference samples at the requested times, w / r on r_k = r0 + k dr
  std::vector<double> fd_radii;
  std::vector<std::vector<double>> fd_u;
};

/// Leapfrog for w_tt = w_rr - (l(l+1)/r^2 + v) w, w = 0 at the inner radius and at the far end.
/// Outputs interpolated in time; data must be real. The far end sits beyond r0 + r_supp + T.
TimeDomainResult time_domain_solve(const std::vector<double>& times, const ModeField& f, const ModeField& g,
                                   const PotentialSpec& pot, const TimeDomainOptions& opt = {});

struct CrossValidation {
  double t = 0.0;
  double relative_l2 = 0.0;
  double reference_norm = 0.0;
};

/// Relative L^2 gap between a field computed elsewhere and the leapfrog solution at time t.
CrossValidation cross_validate(const ModeField& candidate, double t, const ModeField& f, const ModeField& g,
                               const PotentialSpec& pot, const TimeDomainOptions& opt = {});

}  // namespace decaylab
