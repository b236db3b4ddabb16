#pragma once

#include "decaylab/core_model.hpp"

namespace decaylab {

/// Operator matrix in orthonormal coordinates of the weighted space L^2_s on the grid:
/// entries sqrt(w_i) <r_i>^{s_out} A_ij <r_j>^{-s_in} / sqrt(w_j).
Eigen::MatrixXcd to_weighted_coordinates(const Eigen::MatrixXcd& op, const RadialGrid& grid, double s_out,
                                         double s_in);

/// Norm of op as a map L^2_{s_in} -> L^2_{s_out}.
double weighted_opnorm(const Eigen::MatrixXcd& op, const RadialGrid& grid, double s_out, double s_in);

/// Smallest singular value of op on L^2_s.
double weighted_sigma_min(const Eigen::MatrixXcd& op, const RadialGrid& grid, double s);

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

}  // namespace decaylab
