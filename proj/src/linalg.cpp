#include "decaylab/linalg.hpp"

namespace decaylab {

Eigen::MatrixXcd to_weighted_coordinates(const Eigen::MatrixXcd& op, const RadialGrid& grid, double s_out,
                                         double s_in) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  require(op.rows() == n && op.cols() == n, ErrorCode::invalid_argument, "weighted norm: size mismatch");
  Eigen::VectorXd left(n), right(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = grid.nodes()[i];
    const double sw = std::sqrt(grid.weights()[i]);
    left[i] = sw * std::pow(japanese(r), s_out);
    right[i] = std::pow(japanese(r), -s_in) / sw;
  }
  return left.cast<cplx>().asDiagonal() * op * right.cast<cplx>().asDiagonal();
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

double weighted_opnorm(const Eigen::MatrixXcd& op, const RadialGrid& grid, double s_out, double s_in) {
  return singular_values(to_weighted_coordinates(op, grid, s_out, s_in))[0];
}

double weighted_sigma_min(const Eigen::MatrixXcd& op, const RadialGrid& grid, double s) {
  const auto sv = singular_values(to_weighted_coordinates(op, grid, s, s));
  return sv[sv.size() - 1];
}

}  // namespace decaylab
