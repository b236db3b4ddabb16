#include "decaylab/free_resolvent.hpp"

#include <cmath>
#include <numbers>

namespace decaylab {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double sign_of(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

void require_rho(double rho) {
  require(rho > 0.0, ErrorCode::domain_error, "free kernel: singular diagonal requested (rho = 0)");
}
}  // namespace

cplx free_kernel_point(double lambda, Sign sign, double rho) {
  require(lambda >= 0.0, ErrorCode::invalid_argument, "free_kernel_point: lambda must be non-negative");
  require_rho(rho);
  return std::exp(kI * (sign_of(sign) * lambda * rho)) / (4.0 * kPi * rho);
}

cplx free_kernel_point_damped(double lambda, double eps, Sign sign, double rho) {
  require(eps > 0.0, ErrorCode::invalid_argument, "free_kernel_point_damped: eps must be positive");
  require_rho(rho);
  const cplx z = -lambda * lambda - kI * (sign_of(sign) * eps);
  return std::exp(-std::sqrt(z) * rho) / (4.0 * kPi * rho);
}

cplx difference_kernel_point(double lambda, double rho) {
  require(rho >= 0.0, ErrorCode::invalid_argument, "difference_kernel_point: rho must be non-negative");
  const double x = lambda * rho;
  // sin(lambda rho)/rho = lambda * sinc(x)
  const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : std::sin(x) / x;
  return kI / (2.0 * kPi) * lambda * sinc;
}

cplx free_squared_kernel_point(double lambda, Sign sign, double rho) {
  require(lambda > 0.0, ErrorCode::invalid_argument, "free_squared_kernel_point: lambda must be positive");
  const double s = sign_of(sign);
  return s * kI / (8.0 * kPi * lambda) * std::exp(kI * (s * lambda * rho));
}

ModeField ModeResolvent::apply(const ModeField& u) const {
  require(u.l == l, ErrorCode::invalid_argument, "ModeResolvent::apply: mode degree mismatch");
  require(u.grid == grid() || u.grid->nodes() == grid()->nodes(), ErrorCode::invalid_argument,
          "ModeResolvent::apply: grid mismatch");
  return u.with_values(kernel.apply(u.values));
}

SeparableKernel signed_kernel(const GridPtr& grid, const PartialWave& pw, Sign sign) {
  SeparableKernel k(grid, {KernelTerm{pw.a, pw.b}});
  return sign == Sign::plus ? k : k.conjugate();
}

SeparableKernel signed_squared_kernel(const GridPtr& grid, const PartialWave& pw, double lambda, Sign sign) {
  require(pw.da.size() == pw.a.size(), ErrorCode::invalid_argument, "squared kernel needs lambda-derivatives");
  const double s = 0.5 / lambda;
  SeparableKernel k(grid, {KernelTerm{s * pw.da, pw.b}, KernelTerm{s * pw.a, pw.db}});
  return sign == Sign::plus ? k : k.conjugate();
}

ModeResolvent assemble_free_mode_resolvent(int l, double lambda, Sign sign, const GridPtr& grid) {
  require(lambda >= 0.0, ErrorCode::invalid_argument, "assemble_free_mode_resolvent: lambda must be >= 0");
  if (lambda == 0.0) return assemble_free_zero_energy(l, grid);
  const auto pw = partial_wave(*grid, l, lambda, false, false);
  return ModeResolvent{l, lambda, sign, DomainSpec::whole_space(), signed_kernel(grid, pw, sign)};
}

ModeResolvent assemble_free_zero_energy(int l, const GridPtr& grid) {
  const auto pw = partial_wave(*grid, l, 0.0, false, false);
  return ModeResolvent{l, 0.0, Sign::plus, DomainSpec::whole_space(), SeparableKernel(grid, {KernelTerm{pw.a, pw.b}})};
}

ModeResolvent assemble_free_squared(int l, double lambda, Sign sign, const GridPtr& grid) {
  require(lambda > 0.0, ErrorCode::invalid_argument, "squared resolvent: lambda must be positive");
  const auto pw = partial_wave(*grid, l, lambda, false, true);
  return ModeResolvent{l, lambda, sign, DomainSpec::whole_space(), signed_squared_kernel(grid, pw, lambda, sign)};
}

ModeField apply_free_resolvent_squared(const ModeField& g, double lambda, Sign sign) {
  require(g.l == 0, ErrorCode::invalid_argument, "apply_free_resolvent_squared: radial (l = 0) fields only");
  require(lambda > 0.0, ErrorCode::invalid_argument, "apply_free_resolvent_squared: lambda must be positive");
  return assemble_free_squared(0, lambda, sign, g.grid).apply(g);
}

ModeField apply_difference(const ModeField& g, double lambda) {
  require(lambda >= 0.0, ErrorCode::invalid_argument, "apply_difference: lambda must be non-negative");
  if (lambda == 0.0) return ModeField::zero(g.grid, g.l);
  // R0(+) - R0(-) has the smooth rank-one mode kernel 2 i lambda j_l(lambda r) j_l(lambda r')
  const auto pw = partial_wave(*g.grid, g.l, lambda, false, false);
  const Eigen::VectorXcd jl = pw.a / cplx(0.0, lambda);
  const SeparableKernel k(g.grid, {KernelTerm{cplx(0.0, 2.0 * lambda) * jl, jl}});
  return g.with_values(k.apply(g.values));
}

ModeField apply_zero_energy(const ModeField& g) { return assemble_free_zero_energy(g.l, g.grid).apply(g); }

}  // namespace decaylab
