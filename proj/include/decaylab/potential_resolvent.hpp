#pragma once

// Perturbed resolvent R_V(lambda^2 +- i0) = S R with S = (I + R V)^{-1},
// the inverse operators S, and the scans behind the uniform resolvent bounds.

#include <vector>

#include "decaylab/obstacle_resolvent.hpp"

namespace decaylab {

/// Dense I + R V on the full grid with its LU factorization.
struct LSOperator {
  ModeResolvent base;
  Eigen::VectorXd v;
  Eigen::MatrixXcd matrix;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  double rcond = 1.0;

  int l() const { return base.l; }
  double lambda() const { return base.lambda; }
  Sign sign() const { return base.sign; }
};

LSOperator assemble_ls_operator(const PotentialSpec& pot, const ModeResolvent& base);
/// u = R_V f; enforces (I + R V) u = R f to 1e-10 relative.
ModeField solve_perturbed_resolvent(const LSOperator& op, const ModeField& f);

/// R_V on the grid, restricted to the support of V: only the support block of
/// I + R V is factored, so applications cost O(M) plus a small solve.
class PerturbedResolvent {
 public:
  /// Support nodes of V and the lambda-independent cumulative weights on them.
  struct SupportCache {
    std::vector<std::size_t> idx;
    Eigen::MatrixXd cum_cols;
  };
  static SupportCache make_support_cache(const RadialGrid& grid, const Eigen::VectorXd& v);

  /// lambda = 0 selects the zero-energy base resolvent; squared = true also keeps R^2 (lambda > 0).
  PerturbedResolvent(const GridPtr& grid, int l, double lambda, Sign sign, const Eigen::VectorXd& v,
                     bool squared = false, const SupportCache* cache = nullptr);

  int l() const { return base_.l; }
  double lambda() const { return base_.lambda; }
  Sign sign() const { return base_.sign; }
  const GridPtr& grid() const { return base_.grid(); }
  const ModeResolvent& base() const { return base_; }
  const Eigen::VectorXd& potential() const { return v_; }
  const std::vector<std::size_t>& support() const { return idx_; }
  double rcond() const { return rcond_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const;           // R_V f
  Eigen::VectorXcd apply_inverse_factor(const Eigen::VectorXcd& g) const;  // S g
  Eigen::VectorXcd apply_squared(const Eigen::VectorXcd& f) const;   // R_V^2 f
  Eigen::VectorXcd apply_base(const Eigen::VectorXcd& f) const { return base_.apply(f); }

  /// S X column by column.
  Eigen::MatrixXcd inverse_factor_times(const Eigen::MatrixXcd& x) const;
  Eigen::MatrixXcd operator_matrix() const;  // matrix of apply()
  Eigen::MatrixXcd kernel_matrix() const;    // samples of the R_V kernel
  Eigen::MatrixXcd squared_kernel_matrix() const;
  Eigen::MatrixXcd inverse_factor_matrix() const;  // dense S

 private:
  Eigen::VectorXcd correction(const Eigen::VectorXcd& x_support) const;  // R (v x) for x on the support

  ModeResolvent base_;
  std::optional<ModeResolvent> squared_;
  Eigen::VectorXd v_;
  std::vector<std::size_t> idx_;
  const SupportCache* cache_ = nullptr;
  Eigen::VectorXcd v_support_;
  Eigen::MatrixXcd op_cols_;  // columns of the base operator matrix on the support
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double rcond_ = 1.0;
};

/// Threshold on the reciprocal condition estimate of I + R V.
inline constexpr double kNearSingular = 1e-10;

struct ScanReport {
  std::vector<double> lambdas;
  std::vector<double> values;
  double max_value = 0.0;
  double min_value = 0.0;
  double max_min_ratio = 0.0;
};

ScanReport make_scan(std::vector<double> lambdas, std::vector<double> values);

/// opnorm of S(lambda) = (I + R V)^{-1} on L^2_{-s}.
ScanReport uniform_inverse_scan(int l, const std::vector<double>& lambdas, const PotentialSpec& pot,
                                const GridPtr& grid, NormWeight s = {1.0}, Sign sign = Sign::plus);

/// sigma_min of I + R(0) V on L^2_{-s}; requires s <= delta0 / 2.
double resonance_margin_zero(const PotentialSpec& pot, const GridPtr& grid, NormWeight s = {1.5}, int l = 0);

struct DifferenceResult {
  ModeField value;       // [R_V(+) - R_V(-)] f by direct subtraction
  ModeField factored;    // S+ [R(+) - R(-)] (I - V R_V(-)) f
  double identity_gap;   // relative max-difference of the two
};

/// Throws tolerance_exceeded if the two evaluations differ by more than 1e-8 relative.
DifferenceResult rv_difference_apply(int l, double lambda, const PotentialSpec& pot, const ModeField& f);
/// d/dlambda R_V f = 2 lambda R_V^2 f.
ModeField rv_derivative_apply(int l, double lambda, const PotentialSpec& pot, Sign sign, const ModeField& f);
/// Relative gap between rv_derivative_apply and a central difference of R_V f with step h.
double rv_derivative_cross_check(int l, double lambda, const PotentialSpec& pot, Sign sign, const ModeField& f,
                                 double h = 1e-4);

/// lambda * opnorm(<r>^-s R_V <r>^-s) (scaled = true) or the bare norm.
ScanReport weighted_rv_scan(int l, const std::vector<double>& lambdas, const PotentialSpec& pot, const GridPtr& grid,
                            NormWeight s, bool scaled, Sign sign = Sign::plus);
/// lambda * ||R_V^2||_{L^1 -> L^inf} on radial functions.
ScanReport squared_l1_linf_scan(const std::vector<double>& lambdas, const PotentialSpec& pot, const GridPtr& grid,
                                Sign sign = Sign::plus);
/// ||R_V(+) - R_V(-)||_{L^1 -> L^inf} / lambda on radial functions.
ScanReport difference_l1_linf_scan(const std::vector<double>& lambdas, const PotentialSpec& pot, const GridPtr& grid);

/// Kernel samples of R_V(+) - R_V(-) for l = 0; L^1 -> L^inf norm is max|entry| / 4 pi.
Eigen::MatrixXcd difference_kernel_matrix(const GridPtr& grid, double lambda, const Eigen::VectorXd& v);

}  // namespace decaylab
