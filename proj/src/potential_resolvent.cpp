#include "decaylab/potential_resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>

#include "decaylab/linalg.hpp"

namespace decaylab {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;

void guard_rcond(double rcond, int l, double lambda) {
  if (rcond < kNearSingular) {
    std::ostringstream os;
    os << "I + R V is near-singular at l=" << l << ", lambda=" << lambda << " (rcond " << rcond << ")";
    fail(ErrorCode::near_singular, os.str());
  }
}

double rel_gap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale > 0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}
}  // namespace

LSOperator assemble_ls_operator(const PotentialSpec& pot, const ModeResolvent& base) {
  const auto& g = *base.grid();
  LSOperator op{base, pot.sample(g), {}, {}, 1.0};
  const auto n = static_cast<Eigen::Index>(g.size());
  op.matrix = Eigen::MatrixXcd::Identity(n, n);
  if (!pot.is_zero()) op.matrix += base.matrix() * op.v.cast<cplx>().asDiagonal();
  op.lu.compute(op.matrix);
  op.rcond = op.lu.rcond();
  return op;
}

ModeField solve_perturbed_resolvent(const LSOperator& op, const ModeField& f) {
  require(f.l == op.l(), ErrorCode::invalid_argument, "solve_perturbed_resolvent: mode degree mismatch");
  require(f.grid->nodes() == op.base.grid()->nodes(), ErrorCode::invalid_argument,
          "solve_perturbed_resolvent: grid mismatch");
  guard_rcond(op.rcond, op.l(), op.lambda());
  const Eigen::VectorXcd rf = op.base.apply(f.values);
  const Eigen::VectorXcd u = op.lu.solve(rf);
  const Eigen::VectorXcd vu = op.v.cast<cplx>().cwiseProduct(u);
  const double gap = rel_gap(u + op.base.apply(vu), rf);
  if (gap > 1e-10) {
    std::ostringstream os;
    os << "solve_perturbed_resolvent: identity residual " << gap << " above 1e-10";
    fail(ErrorCode::tolerance_exceeded, os.str());
  }
  return f.with_values(u);
}

PerturbedResolvent::SupportCache PerturbedResolvent::make_support_cache(const RadialGrid& grid,
                                                                     const Eigen::VectorXd& v) {
  SupportCache c;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (v[static_cast<Eigen::Index>(i)] != 0.0) c.idx.push_back(i);
  c.cum_cols = cumulative_columns(grid, c.idx);
  return c;
}

PerturbedResolvent::PerturbedResolvent(const GridPtr& grid, int l, double lambda, Sign sign,
                                       const Eigen::VectorXd& v, bool squared, const SupportCache* cache)
    : v_(v), cache_(cache) {
  require(static_cast<std::size_t>(v.size()) == grid->size(), ErrorCode::invalid_argument,
          "PerturbedResolvent: potential samples do not match grid");
  require(lambda >= 0.0, ErrorCode::invalid_argument, "PerturbedResolvent: lambda must be non-negative");
  if (squared) {
    require(lambda > 0.0, ErrorCode::invalid_argument, "PerturbedResolvent: squared resolvent needs lambda > 0");
    const bool ball = grid->domain().is_ball();
    const auto pw = partial_wave(*grid, l, lambda, ball, true);
    base_ = ModeResolvent{l, lambda, sign, grid->domain(), signed_kernel(grid, pw, sign)};
    squared_ = ModeResolvent{l, lambda, sign, grid->domain(), signed_squared_kernel(grid, pw, lambda, sign)};
  } else {
    base_ = assemble_base_resolvent(l, lambda, sign, grid);
  }
  if (cache) {
    idx_ = cache->idx;
  } else {
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (v[static_cast<Eigen::Index>(i)] != 0.0) idx_.push_back(i);
  }
  if (idx_.empty()) return;
  const auto m = static_cast<Eigen::Index>(idx_.size());
  v_support_.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) v_support_[k] = v[static_cast<Eigen::Index>(idx_[k])];
  op_cols_ = cache ? base_.kernel.operator_columns(idx_, cache->cum_cols) : base_.kernel.operator_columns(idx_);
  Eigen::MatrixXcd block(m, m);
  for (Eigen::Index k = 0; k < m; ++k) block.row(k) = op_cols_.row(static_cast<Eigen::Index>(idx_[k]));
  block = block * v_support_.asDiagonal();
  block += Eigen::MatrixXcd::Identity(m, m);
  lu_.compute(block);
  rcond_ = lu_.rcond();
  guard_rcond(rcond_, l, lambda);
}

Eigen::VectorXcd PerturbedResolvent::correction(const Eigen::VectorXcd& x) const {
  return op_cols_ * v_support_.cwiseProduct(x);
}

Eigen::VectorXcd PerturbedResolvent::apply_inverse_factor(const Eigen::VectorXcd& g) const {
  if (idx_.empty()) return g;
  Eigen::VectorXcd gp(static_cast<Eigen::Index>(idx_.size()));
  for (std::size_t k = 0; k < idx_.size(); ++k)
    gp[static_cast<Eigen::Index>(k)] = g[static_cast<Eigen::Index>(idx_[k])];
  return g - correction(lu_.solve(gp));
}

Eigen::VectorXcd PerturbedResolvent::apply(const Eigen::VectorXcd& f) const {
  return apply_inverse_factor(base_.apply(f));
}

Eigen::VectorXcd PerturbedResolvent::apply_squared(const Eigen::VectorXcd& f) const {
  require(squared_.has_value(), ErrorCode::invalid_argument, "PerturbedResolvent: built without the squared kernel");
  const Eigen::VectorXcd w = f - v_.cast<cplx>().cwiseProduct(apply(f));
  return apply_inverse_factor(squared_->apply(w));
}

Eigen::MatrixXcd PerturbedResolvent::inverse_factor_times(const Eigen::MatrixXcd& x) const {
  if (idx_.empty()) return x;
  const auto m = static_cast<Eigen::Index>(idx_.size());
  Eigen::MatrixXcd xp(m, x.cols());
  for (Eigen::Index k = 0; k < m; ++k) xp.row(k) = x.row(static_cast<Eigen::Index>(idx_[k]));
  const Eigen::MatrixXcd z = lu_.solve(xp);
  return x - op_cols_ * (v_support_.asDiagonal() * z);
}

Eigen::MatrixXcd PerturbedResolvent::operator_matrix() const { return inverse_factor_times(base_.matrix()); }

Eigen::MatrixXcd PerturbedResolvent::kernel_matrix() const { return inverse_factor_times(base_.kernel_matrix()); }

Eigen::MatrixXcd PerturbedResolvent::inverse_factor_matrix() const {
  const auto n = static_cast<Eigen::Index>(grid()->size());
  return inverse_factor_times(Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd PerturbedResolvent::squared_kernel_matrix() const {
  require(squared_.has_value(), ErrorCode::invalid_argument, "PerturbedResolvent: built without the squared kernel");
  Eigen::MatrixXcd k2 = squared_->kernel_matrix();
  if (idx_.empty()) return k2;
  // R_V^2 = S R^2 (I - V R_V); V R_V only has rows on the support
  const Eigen::MatrixXcd kv = kernel_matrix();
  const auto m = static_cast<Eigen::Index>(idx_.size());
  Eigen::MatrixXcd vkv(m, kv.cols());
  for (Eigen::Index k = 0; k < m; ++k) vkv.row(k) = v_support_[k] * kv.row(static_cast<Eigen::Index>(idx_[k]));
  k2 -= (cache_ ? squared_->kernel.operator_columns(idx_, cache_->cum_cols) : squared_->kernel.operator_columns(idx_)) *
        vkv;
  return inverse_factor_times(k2);
}

ScanReport make_scan(std::vector<double> lambdas, std::vector<double> values) {
  require(!values.empty() && lambdas.size() == values.size(), ErrorCode::invalid_argument, "scan: empty profile");
  ScanReport rep;
  rep.lambdas = std::move(lambdas);
  rep.values = std::move(values);
  rep.max_value = *std::max_element(rep.values.begin(), rep.values.end());
  rep.min_value = *std::min_element(rep.values.begin(), rep.values.end());
  rep.max_min_ratio = rep.min_value > 0 ? rep.max_value / rep.min_value : std::numeric_limits<double>::infinity();
  return rep;
}

ScanReport uniform_inverse_scan(int l, const std::vector<double>& lambdas, const PotentialSpec& pot,
                                const GridPtr& grid, NormWeight s, Sign sign) {
  const Eigen::VectorXd v = pot.sample(*grid);
  std::vector<double> vals;
  for (double lam : lambdas) {
    require(lam > 0.0, ErrorCode::invalid_argument, "uniform_inverse_scan: lambdas must be positive");
    const PerturbedResolvent rv(grid, l, lam, sign, v);
    vals.push_back(weighted_opnorm(rv.inverse_factor_matrix(), *grid, -s.s, -s.s));
  }
  return make_scan(lambdas, std::move(vals));
}

double resonance_margin_zero(const PotentialSpec& pot, const GridPtr& grid, NormWeight s, int l) {
  require(s.s <= pot.delta0() / 2.0, ErrorCode::invalid_argument, "resonance_margin_zero: need s <= delta0/2");
  const Eigen::VectorXd v = pot.sample(*grid);
  const auto base = assemble_base_resolvent(l, 0.0, Sign::plus, grid);
  const auto n = static_cast<Eigen::Index>(grid->size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  if (!pot.is_zero()) m += base.matrix() * v.cast<cplx>().asDiagonal();
  return weighted_sigma_min(m, *grid, -s.s);
}

DifferenceResult rv_difference_apply(int l, double lambda, const PotentialSpec& pot, const ModeField& f) {
  require(lambda > 0.0, ErrorCode::invalid_argument, "rv_difference_apply: lambda must be positive");
  require(f.l == l, ErrorCode::invalid_argument, "rv_difference_apply: mode degree mismatch");
  const Eigen::VectorXd v = pot.sample(*f.grid);
  const PerturbedResolvent plus(f.grid, l, lambda, Sign::plus, v);
  const PerturbedResolvent minus(f.grid, l, lambda, Sign::minus, v);
  const Eigen::VectorXcd rm = minus.apply(f.values);
  const Eigen::VectorXcd direct = plus.apply(f.values) - rm;
  const Eigen::VectorXcd w = f.values - v.cast<cplx>().cwiseProduct(rm);
  const Eigen::VectorXcd factored = plus.apply_inverse_factor(plus.apply_base(w) - minus.apply_base(w));
  DifferenceResult out{f.with_values(direct), f.with_values(factored), rel_gap(direct, factored)};
  if (out.identity_gap > 1e-8) {
    std::ostringstream os;
    os << "rv_difference_apply: factored identity disagrees by " << out.identity_gap;
    fail(ErrorCode::tolerance_exceeded, os.str());
  }
  return out;
}

ModeField rv_derivative_apply(int l, double lambda, const PotentialSpec& pot, Sign sign, const ModeField& f) {
  require(lambda > 0.0, ErrorCode::invalid_argument, "rv_derivative_apply: lambda must be positive");
  require(f.l == l, ErrorCode::invalid_argument, "rv_derivative_apply: mode degree mismatch");
  const PerturbedResolvent rv(f.grid, l, lambda, sign, pot.sample(*f.grid), true);
  return f.with_values(2.0 * lambda * rv.apply_squared(f.values));
}

double rv_derivative_cross_check(int l, double lambda, const PotentialSpec& pot, Sign sign, const ModeField& f,
                                 double h) {
  require(h > 0.0 && h < lambda, ErrorCode::invalid_argument, "rv_derivative_cross_check: need 0 < h < lambda");
  const Eigen::VectorXd v = pot.sample(*f.grid);
  const Eigen::VectorXcd up = PerturbedResolvent(f.grid, l, lambda + h, sign, v).apply(f.values);
  const Eigen::VectorXcd dn = PerturbedResolvent(f.grid, l, lambda - h, sign, v).apply(f.values);
  const Eigen::VectorXcd fd = (up - dn) / (2.0 * h);
  const Eigen::VectorXcd d = rv_derivative_apply(l, lambda, pot, sign, f).values;
  const double scale = d.norm();
  return scale > 0 ? (fd - d).norm() / scale : fd.norm();
}

ScanReport weighted_rv_scan(int l, const std::vector<double>& lambdas, const PotentialSpec& pot, const GridPtr& grid,
                            NormWeight s, bool scaled, Sign sign) {
  require(s.s > 0.5, ErrorCode::invalid_argument, "weighted_rv_scan: need s > 1/2");
  const Eigen::VectorXd v = pot.sample(*grid);
  std::vector<double> vals;
  for (double lam : lambdas) {
    require(lam > 0.0, ErrorCode::invalid_argument, "weighted_rv_scan: lambdas must be positive");
    const PerturbedResolvent rv(grid, l, lam, sign, v);
    const double nrm = weighted_opnorm(rv.operator_matrix(), *grid, -s.s, s.s);
    vals.push_back(scaled ? lam * nrm : nrm);
  }
  return make_scan(lambdas, std::move(vals));
}

ScanReport squared_l1_linf_scan(const std::vector<double>& lambdas, const PotentialSpec& pot, const GridPtr& grid,
                                Sign sign) {
  const Eigen::VectorXd v = pot.sample(*grid);
  std::vector<double> vals;
  for (double lam : lambdas) {
    require(lam > 0.0, ErrorCode::invalid_argument, "squared_l1_linf_scan: lambdas must be positive");
    const PerturbedResolvent rv(grid, 0, lam, sign, v, true);
    vals.push_back(lam * rv.squared_kernel_matrix().cwiseAbs().maxCoeff() / kFourPi);
  }
  return make_scan(lambdas, std::move(vals));
}

Eigen::MatrixXcd difference_kernel_matrix(const GridPtr& grid, double lambda, const Eigen::VectorXd& v) {
  const PerturbedResolvent plus(grid, 0, lambda, Sign::plus, v);
  const PerturbedResolvent minus(grid, 0, lambda, Sign::minus, v);
  return plus.kernel_matrix() - minus.kernel_matrix();
}

ScanReport difference_l1_linf_scan(const std::vector<double>& lambdas, const PotentialSpec& pot,
                                   const GridPtr& grid) {
  const Eigen::VectorXd v = pot.sample(*grid);
  std::vector<double> vals;
  for (double lam : lambdas) {
    require(lam > 0.0, ErrorCode::invalid_argument, "difference_l1_linf_scan: lambdas must be positive");
    vals.push_back(difference_kernel_matrix(grid, lam, v).cwiseAbs().maxCoeff() / (kFourPi * lam));
  }
  return make_scan(lambdas, std::move(vals));
}

}  // namespace decaylab
