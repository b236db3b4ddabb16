#include "decaylab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "decaylab/error.hpp"

namespace decaylab {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(std::size_t n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (std::size_t k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

ReferenceRule gauss_legendre(std::size_t n) {
  require(n >= 1, ErrorCode::invalid_argument, "gauss_legendre: n must be positive");
  ReferenceRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

ReferenceRule gauss_lobatto(std::size_t n) {
  require(n >= 2, ErrorCode::invalid_argument, "gauss_lobatto: n must be at least 2");
  ReferenceRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t N = n - 1;
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;
  // interior nodes are the roots of P_N'; Newton on (1-x^2) P_N' = N (P_{N-1} - x P_N)
  for (std::size_t i = 1; i < N; ++i) {
    double x = -std::cos(std::numbers::pi * i / N);
    for (int it = 0; it < 100; ++it) {
      double p = 0, dp = 0;
      legendre(N, x, p, dp);
      // d/dx P_N' from the Legendre ODE: (1-x^2) P'' = 2x P' - N(N+1) P
      const double d2p = (2.0 * x * dp - N * (N + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double p = 0, dp = 0;
    const double x = rule.nodes[i];
    if (std::abs(std::abs(x) - 1.0) < 1e-15) {
      p = (x > 0 || N % 2 == 0) ? 1.0 : -1.0;
    } else {
      legendre(N, x, p, dp);
    }
    rule.weights[i] = 2.0 / (N * (N + 1.0) * p * p);
  }
  return rule;
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)), bary_(nodes_.size(), 1.0) {
  const std::size_t n = nodes_.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) bary_[j] /= (nodes_[j] - nodes_[k]);
}

std::vector<double> LagrangeBasis::values(double x) const {
  const std::size_t n = nodes_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (x == nodes_[j]) {
      out[j] = 1.0;
      return out;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = bary_[j] / (x - nodes_[j]);
    denom += out[j];
  }
  for (auto& v : out) v /= denom;
  return out;
}

std::vector<double> LagrangeBasis::differentiation_matrix() const {
  const std::size_t n = nodes_.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double diag = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      d[a * n + b] = (bary_[b] / bary_[a]) / (nodes_[a] - nodes_[b]);
      diag -= d[a * n + b];
    }
    d[a * n + a] = diag;
  }
  return d;
}

std::vector<double> LagrangeBasis::integration_weights(double lo, double hi) const {
  const std::size_t n = nodes_.size();
  std::vector<double> c(n, 0.0);
  if (hi == lo) return c;
  const ReferenceRule g = gauss_legendre(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (std::size_t q = 0; q < n; ++q) {
    const auto l = values(mid + half * g.nodes[q]);
    for (std::size_t b = 0; b < n; ++b) c[b] += half * g.weights[q] * l[b];
  }
  return c;
}

std::vector<double> LagrangeBasis::cumulative_integration_matrix() const {
  const std::size_t n = nodes_.size();
  std::vector<double> q(n * n, 0.0);
  for (std::size_t a = 1; a < n; ++a) {
    const auto c = integration_weights(nodes_[0], nodes_[a]);
    for (std::size_t b = 0; b < n; ++b) q[a * n + b] = c[b];
  }
  return q;
}

}  // namespace decaylab
