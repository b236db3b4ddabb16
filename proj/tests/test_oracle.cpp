#include <cmath>
#include <numbers>

#include "doctest.h"

#include "decaylab/decay_lab.hpp"
#include "decaylab/oracle.hpp"
#include "support/oracles.hpp"

using namespace decaylab;

namespace {
const double kSqrt4Pi = std::sqrt(4.0 * std::numbers::pi);

double rel_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

ModeField gaussian(const GridPtr& g, double s) {
  return ModeField::from_radial_function(g, [s](double r) { return std::exp(-r * r / (s * s)); });
}

ModeField bump(const GridPtr& g, double lo, double hi) {
  return ModeField::from_radial_function(g, [=](double r) { return unit_bump((r - lo) / (hi - lo)); });
}
}  // namespace

TEST_CASE("Kirchhoff oracle") {
  const double s = 0.5;
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 12.0, 600);
  const auto f = gaussian(g, s);
  const auto zero = ModeField::zero(g, 0);
  SUBCASE("t = 0 returns the data") {
    const auto st = kirchhoff_free_propagate(0.0, f, zero);
    CHECK(rel_diff(st.u.values, f.values) <= 1e-12);
    const auto sg = kirchhoff_free_propagate(0.0, zero, f);
    CHECK(rel_diff(sg.ut.values, f.values) <= 1e-12);
  }
  SUBCASE("closed form") {
    for (double t : {0.5, 2.0, 5.0}) {
      const auto a = kirchhoff_free_propagate(t, f, zero);
      const auto b = kirchhoff_free_propagate(t, zero, f);
      Eigen::VectorXcd ra(f.values.size()), rb(f.values.size());
      for (Eigen::Index i = 0; i < ra.size(); ++i) {
        ra[i] = kSqrt4Pi * oracle::gaussian_wave_f(s, t, g->nodes()[i]);
        rb[i] = kSqrt4Pi * oracle::gaussian_wave_g(s, t, g->nodes()[i]);
      }
      CHECK(rel_diff(a.u.values, ra) <= 1e-8);
      CHECK(rel_diff(b.u.values, rb) <= 1e-8);
    }
  }
  SUBCASE("energy") {
    const CauchyData d(f, gaussian(g, 0.7));
    const auto pot = PotentialSpec::zero();
    const double e0 = total_energy({0.0, d.f, d.g}, pot);
    for (double t : {1.0, 3.0, 6.0}) {
      const auto st = kirchhoff_free_propagate(t, d.f, d.g);
      CHECK(total_energy({t, st.u, st.ut}, pot) == doctest::Approx(e0).epsilon(1e-8));
    }
  }
  SUBCASE("refuses what it cannot do") {
    const auto gb = RadialGrid::build(DomainSpec::exterior_ball(1.0), 6.0, 100);
    const auto fb = bump(gb, 1.5, 3.0);
    CHECK_THROWS_AS(kirchhoff_free_propagate(1.0, fb, fb), Error);
    const auto wide = ModeField::from_radial_function(g, [](double r) { return std::exp(-r / 2.0); });
    CHECK_THROWS_AS(kirchhoff_free_propagate(1.0, wide, zero), Error);
  }
}

TEST_CASE("sup norm of the free solution from concentrated velocity decays like 1/t") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 80.0, 1600);
  const auto gd = bump(g, 0.0, 0.5);
  const auto zero = ModeField::zero(g, 0);
  std::vector<double> times, sups;
  for (double t = 2.0; t <= 64.0; t *= 2) {
    times.push_back(t);
    sups.push_back(sup_norm(kirchhoff_free_propagate(t, zero, gd).u));
  }
  const auto fit = fit_decay_exponent(times, sups);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("leapfrog solver") {
  const double s = 0.5;
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 10.0, 500);
  const auto f = gaussian(g, s);
  const auto zero = ModeField::zero(g, 0);
  const auto pot = PotentialSpec::zero();

  SUBCASE("matches the Kirchhoff oracle") {
    const auto fd = time_domain_solve({0.0, 1.0, 3.0}, f, zero, pot);
    CHECK(rel_diff(fd.states[0].u.values, f.values) <= 1e-12);
    for (std::size_t k = 1; k < 3; ++k) {
      const auto ex = kirchhoff_free_propagate(fd.states[k].t, f, zero);
      CHECK(rel_diff(fd.states[k].u.values, ex.u.values) <= 1e-3);
    }
  }
  SUBCASE("second-order self-convergence") {
    const double t = 2.0;
    std::vector<double> errs;
    for (double dr : {0.02, 0.01, 0.005}) {
      TimeDomainOptions o;
      o.dr = dr;
      const auto fd = time_domain_solve({t}, f, zero, pot, o);
      double e = 0;
      for (std::size_t i = 0; i < fd.fd_radii.size(); ++i) {
        const double r = fd.fd_radii[i];
        if (r < 0.05) continue;
        e = std::max(e, std::abs(fd.fd_u[0][i] - kSqrt4Pi * oracle::gaussian_wave_f(s, t, r)));
      }
      errs.push_back(e);
    }
    for (std::size_t k = 1; k < errs.size(); ++k) {
      const double order = std::log2(errs[k - 1] / errs[k]);
      CHECK(order >= 1.8);
      CHECK(order <= 2.2);
    }
  }
  SUBCASE("finite propagation speed") {
    const auto gb = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 300);
    const auto fb = bump(gb, 1.5, 2.5);
    const double t = 3.0;
    const auto fd = time_domain_solve({t}, fb, ModeField::zero(gb, 0), PotentialSpec::scaled_bump(-0.2, 1.2, 2.4));
    double peak = 0, beyond = 0;
    for (std::size_t i = 0; i < fd.fd_radii.size(); ++i) {
      peak = std::max(peak, std::abs(fd.fd_u[0][i]));
      if (fd.fd_radii[i] > 2.5 + t + 0.25) beyond = std::max(beyond, std::abs(fd.fd_u[0][i]));
    }
    CHECK(beyond <= 1e-10 * peak);
    CHECK(std::abs(fd.states[0].u.values[0]) <= 1e-12 * peak);
  }
  SUBCASE("discrete energy drift over a long run") {
    TimeDomainOptions o;
    o.dr = 0.02;
    const auto fd = time_domain_solve({64.0}, f, zero, PotentialSpec::scaled_bump(-0.2, 1.2, 2.4), o);
    CHECK(fd.energy_drift <= 1e-3);
  }
  SUBCASE("argument checks") {
    TimeDomainOptions o;
    o.cfl = 0.95;
    CHECK_THROWS_AS(time_domain_solve({1.0}, f, zero, pot, o), Error);
    CHECK_THROWS_AS(time_domain_solve({1.0}, f.with_values(f.values * cplx(0, 1)), zero, pot), Error);
    CHECK_THROWS_AS(time_domain_solve({-1.0}, f, zero, pot), Error);
  }
}

TEST_CASE("cross validation reports zero gap against itself") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 300);
  const auto f = bump(g, 1.5, 3.0);
  const auto zero = ModeField::zero(g, 0);
  const auto cv = cross_validate(f, 0.0, f, zero, PotentialSpec::zero());
  CHECK(cv.relative_l2 <= 1e-12);
  CHECK(cv.reference_norm > 0.0);
}
