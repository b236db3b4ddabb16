#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "decaylab/spectral_calculus.hpp"
#include "support/oracles.hpp"

using namespace decaylab;

namespace {
const double kSqrt4Pi = std::sqrt(4.0 * std::numbers::pi);
const PotentialSpec kAttractive = PotentialSpec::scaled_bump(-0.2, 1.2, 2.4);

SpectralOptions wide(double lambda_max = 24.0) {
  SpectralOptions o;
  o.lambda_max = lambda_max;
  return o;
}

double rel_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

ModeField shell(const GridPtr& g, double rc, double w) {
  return ModeField::from_radial_function(g, [=](double r) { return std::exp(-(r - rc) * (r - rc) / (w * w)); });
}
}  // namespace

TEST_CASE("Littlewood-Paley windows") {
  std::vector<double> pts;
  for (int k = 0; k < 1000; ++k) pts.push_back(std::pow(2.0, -12.0 + 24.0 * k / 999.0));
  CHECK(partition_check(pts) <= 1e-12);
  CHECK(partition_check(pts, 2.0) <= 1e-12);
  CHECK(partition_check(pts, 0.5) <= 1e-12);
  CHECK_THROWS_AS(lp_window(0, 0.0), Error);
  CHECK(lp_cutoff(0.3) == 1.0);
  CHECK(lp_cutoff(1.0) == 1.0);
  CHECK(lp_cutoff(2.0) == 0.0);
  for (int j : {-3, 0, 2}) {
    const auto w = lp_window(j);
    CHECK(w.lo() == std::ldexp(1.0, j - 1));
    CHECK(w.hi() == std::ldexp(1.0, j + 1));
    CHECK(w(0.999 * w.lo()) == 0.0);
    CHECK(w(1.001 * w.hi()) == 0.0);
    CHECK(w(std::ldexp(1.0, j)) == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : {0.6, 0.9, 1.3, 1.7}) {
      const double lam = x * std::ldexp(1.0, j);
      const double h = 1e-6 * lam;
      const double fd = (w(lam + h) - w(lam - h)) / (2 * h);
      CHECK(w.derivative(lam) == doctest::Approx(fd).epsilon(1e-6));
      const auto v = lp_window(j, 2.0);
      const double fdv = (v(lam + h) - v(lam - h)) / (2 * h);
      CHECK(v.derivative(lam) == doctest::Approx(fdv).epsilon(1e-6));
    }
  }
}

TEST_CASE("spectral nodes") {
  SpectralOptions o;
  const auto n = make_spectral_nodes(0.0, 8.0, 10.0, 4.0, o);
  double sum = 0, mom = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    sum += n.weight[k];
    mom += n.weight[k] * std::cos(10.0 * n.lambda[k]);
  }
  CHECK(sum == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(mom == doctest::Approx(std::sin(80.0) / 10.0).epsilon(1e-10));
  o.max_nodes = 50;
  CHECK_THROWS_AS(make_spectral_nodes(0.0, 8.0, 10.0, 4.0, o), Error);
}

TEST_CASE("free propagation matches the closed-form radial wave") {
  const double s = 0.6;
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 12.0, 400);
  const auto f = ModeField::from_radial_function(g, [s](double r) { return std::exp(-r * r / (s * s)); });
  const CauchyData fd(f, ModeField::zero(g, 0));
  const CauchyData gd(ModeField::zero(g, 0), f);
  const auto uf = propagate_many({0.0, 1.0, 3.0}, fd, PotentialSpec::zero(), wide());
  const auto ug = propagate_many({1.0, 3.0}, gd, PotentialSpec::zero(), wide());
  const Eigen::VectorXd& r = g->nodes();
  for (std::size_t k = 0; k < uf.size(); ++k) {
    Eigen::VectorXcd ref(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) ref[i] = kSqrt4Pi * oracle::gaussian_wave_f(s, uf[k].t, r[i]);
    CHECK(rel_diff(uf[k].u.values, ref) <= 1e-6);
  }
  CHECK(rel_diff(uf[0].u.values, f.values) <= 1e-6);
  CHECK(uf[0].ut.values.cwiseAbs().maxCoeff() <= 1e-6 * f.values.cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < ug.size(); ++k) {
    Eigen::VectorXcd ref(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) ref[i] = kSqrt4Pi * oracle::gaussian_wave_g(s, ug[k].t, r[i]);
    CHECK(rel_diff(ug[k].u.values, ref) <= 1e-6);
  }
}

TEST_CASE("propagation is stable under node refinement and thread count") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 8.0, 200);
  const CauchyData d(shell(g, 2.5, 0.4), ModeField::zero(g, 0));
  auto coarse = wide(16.0);
  auto fine = coarse;
  fine.oscillation = 2 * coarse.oscillation;
  fine.gauss_order = 24;
  const auto a = propagate(3.0, d, kAttractive, coarse);
  const auto b = propagate(3.0, d, kAttractive, fine);
  CHECK(rel_diff(a.u.values, b.u.values) <= 1e-8);
  auto threaded = coarse;
  threaded.threads = 4;
  const auto c = propagate(3.0, d, kAttractive, threaded);
  CHECK((a.u.values - c.u.values).norm() == 0.0);
  CHECK((a.ut.values - c.ut.values).norm() == 0.0);
}

TEST_CASE("energy is conserved by the perturbed propagator") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 10.0, 300);
  const CauchyData d(shell(g, 2.5, 0.4), ModeField::zero(g, 0));
  const auto o = wide(16.0);
  auto energy = [&](const ModeField& u, const ModeField& ut) {
    const double a = sobolev_norm(u, 1.0, Generator::perturbed, kAttractive, o);
    const double b = weighted_l2_norm(ut);
    return a * a + b * b;
  };
  const double e0 = energy(d.f, d.g);
  for (double t : {1.0, 2.5}) {
    const auto st = propagate(t, d, kAttractive, o);
    CHECK(energy(st.u, st.ut) == doctest::Approx(e0).epsilon(1e-6));
  }
}

TEST_CASE("stone_apply: identity and the lambda^2 symbol") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 10.0, 400);
  const auto f = shell(g, 3.0, 0.6);
  const auto o = wide(24.0);
  const auto id = stone_apply({[](double) { return cplx(1.0); }, 0.0, 1e300}, f, PotentialSpec::zero(), o);
  CHECK(rel_diff(id.values, f.values) <= 1e-6);

  auto psi = [](double lam) { return std::exp(-lam * lam / 4.0); };
  const auto a = stone_apply({[&](double lam) { return cplx(psi(lam)); }, 0.0, 1e300}, f, PotentialSpec::zero(), o);
  const auto b =
      stone_apply({[&](double lam) { return cplx(lam * lam * psi(lam)); }, 0.0, 1e300}, f, PotentialSpec::zero(), o);
  // -Laplacian of the l = 0 field by spectral differentiation on the grid
  const Eigen::VectorXcd d1 = g->derivative(a.values);
  const Eigen::VectorXcd d2 = g->derivative(d1);
  Eigen::VectorXcd lap(d1.size());
  for (Eigen::Index i = 0; i < lap.size(); ++i) lap[i] = -(d2[i] + 2.0 * d1[i] / g->nodes()[i]);
  const Eigen::Index lo = 40, n = lap.size() - 80;
  CHECK(rel_diff(lap.segment(lo, n), b.values.segment(lo, n)) <= 1e-4);
}

TEST_CASE("dyadic blocks resum to the data") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 10.0, 300);
  const auto f = shell(g, 3.0, 0.5);
  const auto o = wide(32.0);
  const auto blocks = dyadic_blocks(-12, 5, f, kAttractive, o);
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(f.values.size());
  for (const auto& b : blocks) sum += b.values;
  CHECK(weighted_l2_norm(f.with_values(sum - f.values)) <= 1e-3 * weighted_l2_norm(f));
  const auto single = dyadic_block_apply(1, f, kAttractive, o);
  CHECK(rel_diff(single.values, blocks[13].values) <= 1e-10);
}

TEST_CASE("dispersive block: integration by parts agrees with the direct integral") {
  const auto g = RadialGrid::build(DomainSpec::exterior_ball(1.0), 16.0, 400);
  const auto data = shell(g, 2.5, 0.4);
  const std::vector<double> times{2.0, 5.0, 9.0};
  const auto direct = dispersive_block(0, times, data, kAttractive);
  const auto parts = dispersive_block_by_parts(0, times, data, kAttractive);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(rel_diff(parts[k].values, direct[k].values) <= 1e-2);
  CHECK_THROWS_AS(dispersive_block_by_parts(0, {0.0}, data, kAttractive), Error);
}

TEST_CASE("Besov norms") {
  const auto g = RadialGrid::build(DomainSpec::whole_space(), 12.0, 400);
  const auto f = ModeField::from_radial_function(g, [](double r) { return std::exp(-r * r / 0.36); });
  const auto f2 = ModeField::from_radial_function(g, [](double r) { return std::exp(-4.0 * r * r / 0.36); });
  const auto o = wide(48.0);
  SUBCASE("s = 0, p = q = 2 sits between L2/sqrt2 and L2") {
    const double l2 = weighted_l2_norm(f);
    const auto b = besov_norm(f, 0.0, 2, 2, Generator::free, PotentialSpec::zero(), o);
    CHECK(b.norm <= l2 * (1 + 1e-8));
    CHECK(b.norm >= l2 / std::sqrt(2.0) * (1 - 1e-8));
    CHECK(sobolev_norm(f, 0.0, Generator::free, PotentialSpec::zero(), o) == doctest::Approx(l2).epsilon(1e-8));
  }
  SUBCASE("dilation by 2 scales like 2^{s - 3/p}") {
    for (double s : {0.5, 1.0}) {
      const double a = besov_norm(f, s, 2, 2, Generator::free, PotentialSpec::zero(), o).norm;
      const double b = besov_norm(f2, s, 2, 2, Generator::free, PotentialSpec::zero(), o).norm;
      CHECK(b / a == doctest::Approx(std::pow(2.0, s - 1.5)).epsilon(1e-4));
      const double c = besov_norm(f, s, INFINITY, 2, Generator::free, PotentialSpec::zero(), o).norm;
      const double d = besov_norm(f2, s, INFINITY, 2, Generator::free, PotentialSpec::zero(), o).norm;
      CHECK(d / c == doctest::Approx(std::pow(2.0, s)).epsilon(1e-3));
    }
  }
  SUBCASE("Sobolev norm of a Gaussian") {
    // ||grad f||^2 = 3 pi^{3/2} s / (2 sqrt 2) for f = exp(-r^2/s^2)
    const double s = 0.6;
    const double h1 = sobolev_norm(f, 1.0, Generator::free, PotentialSpec::zero(), o);
    CHECK(h1 * h1 == doctest::Approx(1.5 / std::sqrt(2.0) * std::pow(std::numbers::pi, 1.5) * s).epsilon(1e-6));
  }
  SUBCASE("the perturbed generator with V = 0 is the free one") {
    const auto a = besov_norm(f, 0.5, 2, 2, Generator::free, PotentialSpec::zero(), o);
    const auto b = besov_norm(f, 0.5, 2, 2, Generator::perturbed, PotentialSpec::zero(), o);
    CHECK(a.norm == doctest::Approx(b.norm).epsilon(1e-14));
    const auto c = besov_norm(f, 0.5, 2, 2, Generator::free, kAttractive, o);
    CHECK(a.norm == doctest::Approx(c.norm).epsilon(1e-14));
  }
  SUBCASE("an alternative window gives an equivalent norm") {
    auto alt = o;
    alt.window_shape = 2.0;
    for (double s : {0.0, 0.5, 1.0}) {
      const double a = besov_norm(f, s, 2, 2, Generator::free, PotentialSpec::zero(), o).norm;
      const double b = besov_norm(f, s, 2, 2, Generator::free, PotentialSpec::zero(), alt).norm;
      CHECK(b / a > 0.8);
      CHECK(b / a < 1.25);
    }
    const auto gb = RadialGrid::build(DomainSpec::exterior_ball(1.0), 10.0, 200);
    const std::vector<ModeField> fs{shell(gb, 2.0, 0.4), shell(gb, 3.0, 0.7)};
    const auto r1 = besov_equivalence_ratio(fs, 0.5, 2, 2, kAttractive, o);
    const auto r2 = besov_equivalence_ratio(fs, 0.5, 2, 2, kAttractive, alt);
    for (std::size_t k = 0; k < fs.size(); ++k) CHECK(r2.ratios[k] == doctest::Approx(r1.ratios[k]).epsilon(1e-2));
  }
  SUBCASE("sup-norm blocks are bounded by the data") {
    const auto b = besov_norm(f, 0.0, INFINITY, INFINITY, Generator::free, PotentialSpec::zero(), o);
    CHECK(b.norm > 0.0);
    CHECK(b.norm <= 3.0 * sup_norm(f));
  }
  SUBCASE("equivalence window") {
    CHECK_THROWS_AS(besov_equivalence_ratio({f}, 1.5, 2, 2, kAttractive, o), Error);
    CHECK_THROWS_AS(besov_equivalence_ratio({f}, 0.1, 1, 2, kAttractive, o), Error);
    CHECK_THROWS_AS(besov_norm(f, 0.5, 3, 2, Generator::free, PotentialSpec::zero(), o), Error);
  }
}
