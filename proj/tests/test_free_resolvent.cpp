#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "decaylab/free_resolvent.hpp"
#include "decaylab/linalg.hpp"
#include "decaylab/special.hpp"
#include "support/oracles.hpp"

using namespace decaylab;

namespace {
const double kSqrt4Pi = std::sqrt(4.0 * std::numbers::pi);
double bump_on(double r, double lo, double hi) { return unit_bump((r - lo) / (hi - lo)); }
}  // namespace

TEST_CASE("free point kernel values") {
  const cplx k = free_kernel_point(1.0, Sign::plus, 1.0);
  CHECK(k.real() == doctest::Approx(0.04300).epsilon(1e-4));
  CHECK(k.imag() == doctest::Approx(0.06697).epsilon(1e-4));
  CHECK(std::abs(free_kernel_point(0.0, Sign::minus, 2.0) - 1.0 / (8 * oracle::pi)) < 1e-16);
  for (double rho : {0.1, 1.0, 7.3})
    CHECK(std::abs(free_kernel_point(3.0, Sign::minus, rho) - std::conj(free_kernel_point(3.0, Sign::plus, rho))) ==
          0.0);
  CHECK_THROWS_AS(free_kernel_point(1.0, Sign::plus, 0.0), Error);
  CHECK(difference_kernel_point(2.5, 0.0) == cplx(0.0, 2.5 / (2 * oracle::pi)));
}

TEST_CASE("special functions agree with the standard library") {
  for (int l : {0, 1, 2, 5})
    for (double x : {1e-3, 0.3, 1.0, 4.7, 25.0}) {
      CHECK(std::abs(special::sph_j(l, x) - std::sph_bessel(l, x)) <= 1e-12 * (1 + std::abs(std::sph_bessel(l, x))));
      CHECK(std::abs(special::sph_y(l, x) - std::sph_neumann(l, x)) <=
            1e-11 * (1 + std::abs(std::sph_neumann(l, x))));
    }
}

TEST_CASE("limiting absorption: damped kernel converges first order") {
  for (Sign s : {Sign::plus, Sign::minus}) {
    const double e1 = std::abs(free_kernel_point_damped(2.0, 1e-3, s, 1.5) - free_kernel_point(2.0, s, 1.5));
    const double e2 = std::abs(free_kernel_point_damped(2.0, 5e-4, s, 1.5) - free_kernel_point(2.0, s, 1.5));
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.02));
  }
}

TEST_CASE("l=0 mode resolvent matches 3-D quadrature of the point kernel") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 8.0, 400);
  auto f = [](double r) { return bump_on(r, 0.5, 2.5); };
  const auto src = ModeField::from_radial_function(g, f);
  for (Sign s : {Sign::plus, Sign::minus}) {
    const double lambda = 2.0;
    const auto u = assemble_free_mode_resolvent(0, lambda, s, g).apply(src);
    for (double r : {0.3, 1.4, 3.7}) {
      const cplx ref = oracle::radial_convolution(
          [&](double rho) { return rho > 0 ? std::exp(cplx(0, s == Sign::plus ? 1 : -1) * lambda * rho) /
                                                 (4 * oracle::pi * rho)
                                           : cplx(0.0); },
          f, r, 0.5, 2.5);
      const cplx got = g->interpolate(u.values, r) / kSqrt4Pi;
      CHECK(std::abs(got - ref) <= 1e-4 * std::abs(ref));
    }
  }
}

TEST_CASE("mode resolvent satisfies the radial Helmholtz equation") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 8.0, 400);
  const std::vector<double> r(g->nodes().data(), g->nodes().data() + g->size());
  for (int l : {0, 1, 3}) {
    const double lambda = 1.7;
    const auto src = ModeField::from_function(g, l, [](double x) { return cplx(bump_on(x, 1.0, 3.0), 0.0); });
    const auto u = assemble_free_mode_resolvent(l, lambda, Sign::plus, g).apply(src);
    const double scale = src.values.cwiseAbs().maxCoeff();
    double worst = 0;
    for (std::size_t i = 20; i + 20 < g->size(); ++i)
      worst = std::max(worst, std::abs(oracle::mode_helmholtz_residual(r, u.values, i, l, lambda * lambda) -
                                       src.values[i]));
    CHECK(worst <= 1e-3 * scale);
  }
}

TEST_CASE("sign flip conjugates and kernels are symmetric") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 6.0, 100);
  for (int l : {0, 2}) {
    const auto p = assemble_free_mode_resolvent(l, 1.3, Sign::plus, g);
    const auto m = assemble_free_mode_resolvent(l, 1.3, Sign::minus, g);
    CHECK((p.matrix().conjugate() - m.matrix()).norm() == 0.0);
    const auto k = p.kernel_matrix();
    CHECK((k - k.transpose()).norm() <= 1e-12 * k.norm());
  }
}

TEST_CASE("operator matrix reproduces apply") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 6.0, 100);
  std::mt19937 rng(7);
  std::normal_distribution<double> n01;
  Eigen::VectorXcd v(g->size());
  for (auto& x : v) x = cplx(n01(rng), n01(rng));
  const auto res = assemble_free_mode_resolvent(1, 2.2, Sign::plus, g);
  CHECK((res.matrix() * v - res.apply(v)).norm() <= 1e-12 * res.apply(v).norm());
  std::vector<std::size_t> idx{3, 10, 11, 40, 77};
  const auto blk = res.kernel.operator_block(idx, cumulative_block(*g, idx));
  const auto full = res.matrix();
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      CHECK(std::abs(blk(a, b) - full(idx[a], idx[b])) <= 1e-13 * full.cwiseAbs().maxCoeff());
}

TEST_CASE("squared resolvent") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 10.0, 400);
  const double lambda = 1.5;
  const auto src = ModeField::from_radial_function(g, [](double r) { return bump_on(r, 0.5, 2.0); });
  const auto sq = apply_free_resolvent_squared(src, lambda, Sign::plus);
  // (1/2 lambda) d/dlambda R0 by central differences
  const double h = 1e-4;
  const auto up = assemble_free_mode_resolvent(0, lambda + h, Sign::plus, g).apply(src);
  const auto dn = assemble_free_mode_resolvent(0, lambda - h, Sign::plus, g).apply(src);
  const Eigen::VectorXcd fd = (up.values - dn.values) / (2 * h) / (2 * lambda);
  CHECK((fd - sq.values).norm() <= 1e-3 * sq.values.norm());
  // closed-form mode-0 kernel of (i/8 pi lambda) e^{i lambda |x-y|}
  const auto k = assemble_free_squared(0, lambda, Sign::plus, g).kernel;
  for (std::size_t i : {5u, 100u, 250u})
    for (std::size_t j : {7u, 180u, 399u}) {
      const double r1 = std::min(g->r(i), g->r(j)), r2 = std::max(g->r(i), g->r(j));
      const cplx ref = -std::exp(cplx(0, lambda * r2)) / (2 * std::pow(lambda, 3) * r1 * r2) *
                       ((1.0 - cplx(0, lambda * r2)) * std::sin(lambda * r1) - lambda * r1 * std::cos(lambda * r1));
      CHECK(std::abs(k.kernel(i, j) - ref) <= 1e-10 * std::abs(ref));
    }
  CHECK(apply_free_resolvent_squared(ModeField::zero(g, 0), lambda, Sign::plus).values.isZero());
  CHECK_THROWS_AS(apply_free_resolvent_squared(src, 0.0, Sign::plus), Error);
  CHECK_THROWS_AS(apply_free_resolvent_squared(ModeField::zero(g, 1), 1.0, Sign::plus), Error);
}

TEST_CASE("squared resolvent L1 to Linf bound on random bumps") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 10.0, 300);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double lo = 3.0 * u01(rng), w = 0.3 + 2.0 * u01(rng), lambda = 0.25 + 6.0 * u01(rng);
    const auto src = ModeField::from_radial_function(g, [&](double r) { return bump_on(r, lo, lo + w); });
    const auto out = apply_free_resolvent_squared(src, lambda, Sign::minus);
    CHECK(sup_norm(out) <= l1_norm(src) / (8 * oracle::pi * lambda));
  }
}

TEST_CASE("difference of boundary values") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 8.0, 800);
  const auto src = ModeField::from_radial_function(g, [](double r) { return bump_on(r, 0.2, 2.2); });
  CHECK(apply_difference(src, 0.0).values.isZero());
  for (double lambda : {0.5, 2.0, 5.0}) {
    const auto d = apply_difference(src, lambda);
    const Eigen::VectorXcd direct = assemble_free_mode_resolvent(0, lambda, Sign::plus, g).apply(src.values) -
                                    assemble_free_mode_resolvent(0, lambda, Sign::minus, g).apply(src.values);
    CHECK((d.values - direct).cwiseAbs().maxCoeff() <= 1e-10);
    // mode-0 kernel 2 i sin(l r) sin(l r') / (l r r') against the 3-D kernel
    for (double r : {0.4, 3.0}) {
      const cplx ref = oracle::radial_convolution([&](double rho) { return difference_kernel_point(lambda, rho); },
                                                  [](double x) { return bump_on(x, 0.2, 2.2); }, r, 0.2, 2.2);
      CHECK(std::abs(g->interpolate(d.values, r) / kSqrt4Pi - ref) <= 1e-6 * std::abs(ref) + 1e-12);
    }
  }
}

TEST_CASE("zero energy: shell potential and residual") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 6.0, 600);
  // smooth uniform-like shell: constant density on [1,2] approximated by a plateau bump
  auto rho = [](double r) { return r > 1.0 && r < 2.0 ? 1.0 : 0.0; };
  const auto src = ModeField::from_radial_function(g, rho);
  const auto u = apply_zero_energy(src);
  CHECK(u.values.imag().isZero());
  // closed-form potential of a uniform shell a<r<b with unit density
  auto shell = [](double r) {
    const double a = 1.0, b = 2.0;
    if (r <= a) return 0.5 * (b * b - a * a);
    if (r >= b) return (b * b * b - a * a * a) / (3.0 * r);
    return 0.5 * b * b - r * r / 6.0 - a * a * a / (3.0 * r);
  };
  for (double r : {0.5, 3.0, 5.0}) CHECK(std::abs(g->interpolate(u.values, r).real() / kSqrt4Pi - shell(r)) <= 2e-3);
  // residual of -Delta_l on smooth data
  const std::vector<double> rn(g->nodes().data(), g->nodes().data() + g->size());
  for (int l : {0, 2}) {
    const auto s = ModeField::from_function(g, l, [](double x) { return cplx(bump_on(x, 1.0, 3.0), 0.0); });
    const auto v = apply_zero_energy(s);
    double worst = 0;
    for (std::size_t i = 30; i + 30 < g->size(); ++i)
      worst = std::max(worst, std::abs(oracle::mode_helmholtz_residual(rn, v.values, i, l, 0.0) - s.values[i]));
    CHECK(worst <= 1e-3 * s.values.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("free weighted resolvent bound is uniform in lambda") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 12.0, 160);
  std::vector<double> vals;
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
    vals.push_back(lambda * weighted_opnorm(assemble_free_mode_resolvent(0, lambda, Sign::plus, g).matrix(), *g, -1.0,
                                            1.0));
  const double mx = *std::max_element(vals.begin(), vals.end()), mn = *std::min_element(vals.begin(), vals.end());
  CHECK(mx / mn <= 10.0);
}
