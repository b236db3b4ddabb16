#pragma once

#include <cstddef>
#include <vector>

namespace decaylab {

/// Nodes and weights of a rule on the reference interval [-1, 1].
struct ReferenceRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

ReferenceRule gauss_legendre(std::size_t n);

/// Gauss-Lobatto-Legendre rule with both endpoints included, n >= 2.
ReferenceRule gauss_lobatto(std::size_t n);

/// Barycentric Lagrange interpolation on a fixed node set.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  /// Values of all basis polynomials at x.
  std::vector<double> values(double x) const;

  /// Row-major n x n matrix D with D[a*n+b] = l_b'(x_a).
  std::vector<double> differentiation_matrix() const;

  /// Row-major n x n matrix Q with Q[a*n+b] = integral of l_b from nodes[0] to nodes[a].
  std::vector<double> cumulative_integration_matrix() const;

  /// Weights c_b with sum_b c_b f(x_b) = integral of the interpolant over [lo, hi].
  std::vector<double> integration_weights(double lo, double hi) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

}  // namespace decaylab
