#pragma once

// Semi-separable radial kernels g(r, r') = sum_k a_k(min(r,r')) b_k(max(r,r'))
// integrated against the r^2 measure by product integration: the kink on the
// diagonal is split at the target node, so the panel rule stays high order.

#include <vector>

#include "decaylab/core_model.hpp"

namespace decaylab {

struct KernelTerm {
  Eigen::VectorXcd a;  // factor evaluated at the smaller radius
  Eigen::VectorXcd b;  // factor evaluated at the larger radius
};

class SeparableKernel {
 public:
  SeparableKernel() = default;
  SeparableKernel(GridPtr grid, std::vector<KernelTerm> terms);

  const GridPtr& grid() const { return grid_; }
  const std::vector<KernelTerm>& terms() const { return terms_; }

  /// (K u)(r_i) = integral g(r_i, r') u(r') r'^2 dr'.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;
  /// Dense matrix of apply(): quadrature weights and r^2 folded in.
  Eigen::MatrixXcd operator_matrix() const;
  /// Sub-block of operator_matrix() given the matching cumulative-weight block.
  Eigen::MatrixXcd operator_block(const std::vector<std::size_t>& idx, const Eigen::MatrixXd& cum_block) const;
  /// Columns idx of operator_matrix().
  Eigen::MatrixXcd operator_columns(const std::vector<std::size_t>& idx) const;
  /// Same, given cum_cols(i, k) = C(i, idx[k]).
  Eigen::MatrixXcd operator_columns(const std::vector<std::size_t>& idx, const Eigen::MatrixXd& cum_cols) const;
  /// Symmetric point samples g(r_i, r_j).
  Eigen::MatrixXcd kernel_matrix() const;
  cplx kernel(std::size_t i, std::size_t j) const;

  SeparableKernel conjugate() const;
  SeparableKernel scaled(cplx alpha) const;
  SeparableKernel operator-(const SeparableKernel& other) const;

 private:
  GridPtr grid_;
  std::vector<KernelTerm> terms_;
};

/// C(i, idx[k]) for every node i.
Eigen::MatrixXd cumulative_columns(const RadialGrid& grid, const std::vector<std::size_t>& idx);
/// C_ij restricted to idx x idx.
Eigen::MatrixXd cumulative_block(const RadialGrid& grid, const std::vector<std::size_t>& idx);

}  // namespace decaylab
