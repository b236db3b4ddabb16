#pragma once

// Free resolvent R0(lambda^2 +- i0) in three dimensions, reduced to one
// spherical-harmonic mode. Point kernels are the 3-D ones; mode resolvents
// act on radial coefficients.

#include "decaylab/kernels.hpp"
#include "decaylab/partial_wave.hpp"

namespace decaylab {

/// e^{+- i lambda rho} / (4 pi rho).
cplx free_kernel_point(double lambda, Sign sign, double rho);
/// e^{-sqrt(-lambda^2 -+ i eps) rho} / (4 pi rho) with the principal square root; eps > 0.
cplx free_kernel_point_damped(double lambda, double eps, Sign sign, double rho);
/// Kernel of R0(+) - R0(-): (i / 2 pi) sin(lambda rho) / rho, including rho = 0.
cplx difference_kernel_point(double lambda, double rho);
/// Kernel of R0(lambda^2 +- i0)^2: (+- i / (8 pi lambda)) e^{+- i lambda rho}.
cplx free_squared_kernel_point(double lambda, Sign sign, double rho);

/// Discretized mode resolvent at fixed (l, lambda, sign).
struct ModeResolvent {
  int l = 0;
  double lambda = 0.0;
  Sign sign = Sign::plus;
  DomainSpec domain;
  SeparableKernel kernel;

  const GridPtr& grid() const { return kernel.grid(); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const { return kernel.apply(u); }
  ModeField apply(const ModeField& u) const;
  /// Operator matrix including quadrature weights and the r^2 measure.
  Eigen::MatrixXcd matrix() const { return kernel.operator_matrix(); }
  /// Symmetric kernel samples g(r_i, r_j).
  Eigen::MatrixXcd kernel_matrix() const { return kernel.kernel_matrix(); }
};

/// Factors in sign convention `sign` (conjugated for minus).
SeparableKernel signed_kernel(const GridPtr& grid, const PartialWave& pw, Sign sign);
/// (1/2 lambda) d/dlambda of the kernel: the kernel of the squared resolvent.
SeparableKernel signed_squared_kernel(const GridPtr& grid, const PartialWave& pw, double lambda, Sign sign);

ModeResolvent assemble_free_mode_resolvent(int l, double lambda, Sign sign, const GridPtr& grid);
ModeResolvent assemble_free_zero_energy(int l, const GridPtr& grid);
ModeResolvent assemble_free_squared(int l, double lambda, Sign sign, const GridPtr& grid);

/// R0(lambda^2 +- i0)^2 g for a radial field.
ModeField apply_free_resolvent_squared(const ModeField& g, double lambda, Sign sign);
/// [R0(+) - R0(-)] g; identically zero at lambda = 0.
ModeField apply_difference(const ModeField& g, double lambda);
/// Newtonian potential R0(0) g of a mode field.
ModeField apply_zero_energy(const ModeField& g);

}  // namespace decaylab
