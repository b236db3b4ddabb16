#include "decaylab/obstacle_resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/linalg.hpp"

namespace decaylab {

ModeResolvent assemble_dirichlet_mode_resolvent(int l, double lambda, Sign sign, const GridPtr& grid, double a) {
  require(a > 0.0, ErrorCode::invalid_argument, "dirichlet resolvent: obstacle radius must be positive");
  require(grid->domain().is_ball() && std::abs(grid->domain().a - a) <= 1e-12 * a, ErrorCode::invalid_argument,
          "dirichlet resolvent: grid was not built for this obstacle");
  require(lambda >= 0.0, ErrorCode::invalid_argument, "dirichlet resolvent: lambda must be non-negative");
  if (lambda == 0.0) return assemble_dirichlet_zero_energy(l, grid);
  const auto pw = partial_wave(*grid, l, lambda, true, false);
  return ModeResolvent{l, lambda, sign, grid->domain(), signed_kernel(grid, pw, sign)};
}

ModeResolvent assemble_dirichlet_zero_energy(int l, const GridPtr& grid) {
  const auto pw = partial_wave(*grid, l, 0.0, true, false);
  return ModeResolvent{l, 0.0, Sign::plus, grid->domain(), SeparableKernel(grid, {KernelTerm{pw.a, pw.b}})};
}

ModeResolvent assemble_base_resolvent(int l, double lambda, Sign sign, const GridPtr& grid) {
  if (grid->domain().is_ball()) return assemble_dirichlet_mode_resolvent(l, lambda, sign, grid, grid->domain().a);
  return assemble_free_mode_resolvent(l, lambda, sign, grid);
}

ModeResolvent assemble_base_squared(int l, double lambda, Sign sign, const GridPtr& grid) {
  require(lambda > 0.0, ErrorCode::invalid_argument, "squared resolvent: lambda must be positive");
  const bool ball = grid->domain().is_ball();
  const auto pw = partial_wave(*grid, l, lambda, ball, true);
  return ModeResolvent{l, lambda, sign, grid->domain(), signed_squared_kernel(grid, pw, lambda, sign)};
}

namespace {
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}
}  // namespace

WeightedBoundReport verify_weighted_bound(int l, const std::vector<double>& lambdas, NormWeight s,
                                          const GridPtr& grid, Sign sign) {
  require(s.s > 0.5, ErrorCode::invalid_argument, "verify_weighted_bound: need s > 1/2");
  require(!lambdas.empty(), ErrorCode::invalid_argument, "verify_weighted_bound: empty lambda grid");
  WeightedBoundReport rep;
  rep.lambdas = lambdas;
  for (double lam : lambdas) {
    require(lam > 0.0, ErrorCode::invalid_argument, "verify_weighted_bound: lambdas must be positive");
    const auto res = assemble_base_resolvent(l, lam, sign, grid);
    rep.norms.push_back(weighted_opnorm(res.matrix(), *grid, -s.s, s.s));
  }
  rep.max_norm = *std::max_element(rep.norms.begin(), rep.norms.end());
  rep.min_norm = *std::min_element(rep.norms.begin(), rep.norms.end());
  rep.max_min_ratio = rep.max_norm / rep.min_norm;
  std::vector<double> scaled;
  for (std::size_t k = 0; k < lambdas.size(); ++k) scaled.push_back(lambdas[k] * rep.norms[k]);
  rep.scaled_max_min_ratio = *std::max_element(scaled.begin(), scaled.end()) /
                             *std::min_element(scaled.begin(), scaled.end());
  const std::size_t half = lambdas.size() / 2;
  if (lambdas.size() - half >= 2) {
    rep.large_lambda_slope = loglog_slope(std::vector<double>(lambdas.begin() + half, lambdas.end()),
                                          std::vector<double>(rep.norms.begin() + half, rep.norms.end()));
  }
  return rep;
}

SupBoundReport verify_sup_bound(const std::vector<double>& lambdas, const ModeField& f, Sign sign) {
  require(f.l == 0, ErrorCode::invalid_argument, "verify_sup_bound: radial (l = 0) data only");
  SupBoundReport rep;
  rep.lambdas = lambdas;
  for (double lam : lambdas) {
    const auto res = assemble_base_resolvent(0, lam, sign, f.grid);
    rep.sup_values.push_back(sup_norm(res.apply(f)));
  }
  rep.max_value = *std::max_element(rep.sup_values.begin(), rep.sup_values.end());
  rep.min_value = *std::min_element(rep.sup_values.begin(), rep.sup_values.end());
  rep.max_min_ratio = rep.min_value > 0 ? rep.max_value / rep.min_value : 0.0;
  return rep;
}

}  // namespace decaylab
