#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "decaylab/linalg.hpp"
#include "decaylab/obstacle_resolvent.hpp"
#include "support/oracles.hpp"

using namespace decaylab;

namespace {
const double kSqrt4Pi = std::sqrt(4.0 * std::numbers::pi);
double bump_on(double r, double lo, double hi) { return unit_bump((r - lo) / (hi - lo)); }
std::vector<double> node_vector(const RadialGrid& g) { return {g.nodes().data(), g.nodes().data() + g.size()}; }
}  // namespace

TEST_CASE("dirichlet condition holds for random sources") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 200);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int l = trial % 3;
    const double lambda = 0.2 + 6.0 * u01(rng), lo = 1.0 + 3.0 * u01(rng), w = 0.5 + 2.0 * u01(rng);
    const auto src = ModeField::from_function(g, l, [&](double r) { return cplx(bump_on(r, lo, lo + w), 0.0); });
    const Sign sign = trial % 2 ? Sign::plus : Sign::minus;
    const auto u = assemble_dirichlet_mode_resolvent(l, lambda, sign, g, 1.0).apply(src);
    CHECK(std::abs(u.values[0]) <= 1e-8 * u.values.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("small obstacle approaches the free resolvent") {
  // the reflected part is a e^{i lambda (r + r')} / (r r'), relative size O(lambda a)
  auto gap = [](double a) {
    const auto gb = RadialGrid::build(DomainSpec::exterior_ball(a), 6.0, 300);
    const auto gf = RadialGrid::build(DomainSpec::whole_space(), 6.0, 300, GridOptions{10, a});
    const auto kb = assemble_dirichlet_mode_resolvent(0, 0.5, Sign::plus, gb, a).kernel_matrix();
    const auto kf = assemble_free_mode_resolvent(0, 0.5, Sign::plus, gf).kernel_matrix();
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < gb->size(); ++i)
      for (std::size_t j = 0; j < gb->size(); ++j) {
        if (gb->r(i) < 2.0 || gb->r(i) > 5.0 || gb->r(j) < 2.0 || gb->r(j) > 5.0) continue;
        worst = std::max(worst, std::abs(kb(i, j) - kf(i, j)));
        scale = std::max(scale, std::abs(kf(i, j)));
      }
    return worst / scale;
  };
  const double e3 = gap(1e-3), e4 = gap(1e-4);
  CHECK(e3 <= 1e-3);
  CHECK(e3 / e4 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("helmholtz residual and radiation-matched boundary value problem") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 400);
  const auto r = node_vector(*g);
  for (int l : {0, 1}) {
    for (double lambda : {0.7, 3.0}) {
      auto f = [](double x) { return bump_on(x, 1.5, 3.5); };
      const auto src = ModeField::from_function(g, l, [&](double x) { return cplx(f(x), 0.0); });
      const auto u = assemble_dirichlet_mode_resolvent(l, lambda, Sign::plus, g, 1.0).apply(src);
      double worst = 0;
      for (std::size_t i = 20; i + 20 < g->size(); ++i)
        worst = std::max(worst, std::abs(oracle::mode_helmholtz_residual(r, u.values, i, l, lambda * lambda) -
                                         src.values[i]));
      CHECK(worst <= 1e-3 * src.values.cwiseAbs().maxCoeff());
      const std::vector<double> at{1.3, 2.5, 5.0, 7.5};
      const auto ref = oracle::dirichlet_bvp(l, lambda, 1.0, 8.0, f, at);
      for (std::size_t k = 0; k < at.size(); ++k)
        CHECK(std::abs(g->interpolate(u.values, at[k]) - ref[k]) <= 1e-3 * std::abs(ref[k]));
    }
  }
}

TEST_CASE("obstacle conjugation symmetry and sup-norm invariance") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 120);
  const auto p = assemble_dirichlet_mode_resolvent(2, 2.0, Sign::plus, g, 1.0);
  const auto m = assemble_dirichlet_mode_resolvent(2, 2.0, Sign::minus, g, 1.0);
  CHECK((p.matrix().conjugate() - m.matrix()).norm() == 0.0);
  const auto src = ModeField::from_radial_function(g, [](double x) { return bump_on(x, 1.5, 2.0); });
  const std::vector<double> lams{0.5, 1.0, 2.0, 4.0, 8.0};
  const auto sp = verify_sup_bound(lams, src, Sign::plus);
  const auto sm = verify_sup_bound(lams, src, Sign::minus);
  for (std::size_t k = 0; k < lams.size(); ++k)
    CHECK(sp.sup_values[k] == doctest::Approx(sm.sup_values[k]).epsilon(1e-12));
  CHECK(sp.max_min_ratio <= 10.0);
  const auto z = verify_sup_bound(lams, ModeField::zero(g, 0));
  CHECK(z.max_value == 0.0);
}

TEST_CASE("weighted resolvent bound outside the ball") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 12.0, 240);
  std::vector<double> lams;
  for (double x = 0.5; x <= 8.0 + 1e-9; x *= std::sqrt(2.0)) lams.push_back(x);
  const auto rep = verify_weighted_bound(0, lams, {1.0}, g);
  // the raw profile peaks at the low end and falls like 1/lambda; lambda * norm is flat
  CHECK(rep.norms.front() == rep.max_norm);
  CHECK(rep.scaled_max_min_ratio <= 10.0);
  CHECK(rep.large_lambda_slope >= -1.3);
  CHECK(rep.large_lambda_slope <= -0.7);
  const auto rep2 = verify_weighted_bound(0, lams, {1.5}, g);
  for (std::size_t k = 0; k < lams.size(); ++k) CHECK(rep2.norms[k] <= rep.norms[k] * (1 + 1e-12));
  CHECK_THROWS_AS(verify_weighted_bound(0, lams, {0.5}, g), Error);
}

TEST_CASE("zero energy dirichlet kernel") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 500);
  const auto r = node_vector(*g);
  const auto src = ModeField::from_function(g, 1, [](double x) { return cplx(bump_on(x, 1.5, 3.0), 0.0); });
  const auto u = assemble_base_resolvent(1, 0.0, Sign::plus, g).apply(src);
  CHECK(std::abs(u.values[0]) <= 1e-12);
  double worst = 0;
  for (std::size_t i = 20; i + 20 < g->size(); ++i)
    worst = std::max(worst, std::abs(oracle::mode_helmholtz_residual(r, u.values, i, 1, 0.0) - src.values[i]));
  CHECK(worst <= 1e-3 * src.values.cwiseAbs().maxCoeff());
}

TEST_CASE("dispatch by domain and argument checks") {
  const auto gb = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 64);
  const auto gw = RadialGrid::build(DomainSpec::whole_space(), 8.0, 64);
  CHECK(assemble_base_resolvent(0, 1.0, Sign::plus, gb).domain.is_ball());
  CHECK(!assemble_base_resolvent(0, 1.0, Sign::plus, gw).domain.is_ball());
  CHECK_THROWS_AS(assemble_dirichlet_mode_resolvent(0, 1.0, Sign::plus, gw, 1.0), Error);
  CHECK_THROWS_AS(assemble_dirichlet_mode_resolvent(0, 1.0, Sign::plus, gb, 2.0), Error);
  CHECK_THROWS_AS(assemble_base_squared(0, 0.0, Sign::plus, gb), Error);
  // squared Dirichlet kernel against a lambda difference quotient
  const auto src = ModeField::from_radial_function(gb, [](double x) { return bump_on(x, 1.5, 3.0); });
  const double lambda = 2.0, h = 1e-4;
  const Eigen::VectorXcd fd = (assemble_base_resolvent(0, lambda + h, Sign::minus, gb).apply(src.values) -
                               assemble_base_resolvent(0, lambda - h, Sign::minus, gb).apply(src.values)) /
                              (4 * h * lambda);
  const auto sq = assemble_base_squared(0, lambda, Sign::minus, gb).apply(src.values);
  CHECK((fd - sq).norm() <= 1e-6 * sq.norm());
}
