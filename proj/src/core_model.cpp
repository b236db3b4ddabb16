#include "decaylab/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "decaylab/quadrature.hpp"

namespace decaylab {

namespace {
const double kSqrt4Pi = std::sqrt(4.0 * std::numbers::pi);

void require_radial(const ModeField& u, const char* what) {
  require(u.l == 0, ErrorCode::invalid_argument,
          std::string(what) + ": radial-only norm requested on non-radial mode l=" + std::to_string(u.l));
}
}  // namespace

DomainSpec DomainSpec::exterior_ball(double radius) {
  require(radius > 0.0, ErrorCode::invalid_argument, "exterior_ball: obstacle radius must be positive");
  return DomainSpec{DomainKind::exterior_ball, radius};
}

std::string to_string(DomainKind kind) { return kind == DomainKind::whole_space ? "whole_space" : "exterior_ball"; }

std::shared_ptr<const RadialGrid> RadialGrid::build(const DomainSpec& domain, double r_max, std::size_t m,
                                                    const GridOptions& options) {
  require(options.order >= 3, ErrorCode::invalid_argument, "build_grid: panel order must be at least 3");
  require(m >= 16, ErrorCode::invalid_argument, "build_grid: need M >= 16 nodes");
  require(m >= 2 * options.order - 1, ErrorCode::invalid_argument,
          "build_grid: M too small for the requested quadrature order");
  const double r0 = domain.is_ball() ? domain.a : options.whole_space_inner;
  require(domain.kind == DomainKind::whole_space || domain.a > 0.0, ErrorCode::invalid_argument,
          "build_grid: obstacle radius must be positive");
  require(r0 > 0.0, ErrorCode::invalid_argument, "build_grid: inner radius must be positive");
  require(r_max > r0, ErrorCode::invalid_argument, "build_grid: R_max must exceed the inner radius");

  std::shared_ptr<RadialGrid> g(new RadialGrid());
  g->domain_ = domain;
  g->order_ = options.order;
  const std::size_t p = options.order;
  const std::size_t npan = (m - 1 + (p - 2)) / (p - 1);  // ceil((m-1)/(p-1))

  const ReferenceRule lob = gauss_lobatto(p);
  g->ref_nodes_ = lob.nodes;
  g->ref_weights_ = lob.weights;
  LagrangeBasis basis(lob.nodes);
  g->basis_.emplace(lob.nodes);
  g->ref_cum_ = basis.cumulative_integration_matrix();
  g->ref_diff_ = basis.differentiation_matrix();

  g->breaks_.resize(npan + 1);
  for (std::size_t k = 0; k <= npan; ++k) g->breaks_[k] = r0 + (r_max - r0) * static_cast<double>(k) / npan;
  g->breaks_.back() = r_max;

  const std::size_t n = npan * (p - 1) + 1;
  g->r_.setZero(n);
  g->wdr_.setZero(n);
  for (std::size_t k = 0; k < npan; ++k) {
    const double lo = g->breaks_[k], hi = g->breaks_[k + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t a = 0; a < p; ++a) {
      const auto i = static_cast<Eigen::Index>(k * (p - 1) + a);
      g->r_[i] = (a == 0) ? lo : (a == p - 1 ? hi : mid + half * lob.nodes[a]);
      g->wdr_[i] += half * lob.weights[a];
    }
  }
  g->w_ = g->wdr_.cwiseProduct(g->r_.cwiseProduct(g->r_));
  return g;
}

std::size_t RadialGrid::panel_of(std::size_t i) const {
  return std::min(i / (order_ - 1), panels() - 1);
}

double RadialGrid::cumulative_weight(std::size_t i, std::size_t j) const {
  const std::size_t p = order_;
  const std::size_t ki = panel_of(i);
  double c = 0.0;
  auto add_full_panel = [&](std::size_t k) {
    const std::size_t first = panel_first(k);
    if (j >= first && j <= first + p - 1) c += 0.5 * (breaks_[k + 1] - breaks_[k]) * ref_weights_[j - first];
  };
  // j belongs to at most two panels; only panels strictly before ki count in full
  const std::size_t k1 = std::min(j / (p - 1), panels() - 1);
  if (k1 < ki) add_full_panel(k1);
  if (j > 0 && j % (p - 1) == 0) {
    const std::size_t k0 = j / (p - 1) - 1;
    if (k0 != k1 && k0 < ki) add_full_panel(k0);
  }
  const std::size_t first = panel_first(ki);
  if (j >= first && j <= first + p - 1)
    c += 0.5 * (breaks_[ki + 1] - breaks_[ki]) * ref_cum_[(i - first) * p + (j - first)];
  return c;
}

Eigen::VectorXcd RadialGrid::cumulative(const Eigen::VectorXcd& f) const {
  const std::size_t p = order_;
  Eigen::VectorXcd out(f.size());
  cplx offset = 0.0;
  out[0] = 0.0;
  for (std::size_t k = 0; k < panels(); ++k) {
    const std::size_t first = panel_first(k);
    const double half = 0.5 * (breaks_[k + 1] - breaks_[k]);
    for (std::size_t a = 1; a < p; ++a) {
      cplx s = 0.0;
      const double* row = &ref_cum_[a * p];
      for (std::size_t b = 0; b < p; ++b) s += row[b] * f[static_cast<Eigen::Index>(first + b)];
      out[static_cast<Eigen::Index>(first + a)] = offset + half * s;
    }
    offset = out[static_cast<Eigen::Index>(first + p - 1)];
  }
  return out;
}

Eigen::VectorXcd RadialGrid::derivative(const Eigen::VectorXcd& f) const {
  const std::size_t p = order_;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.size());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(f.size());
  for (std::size_t k = 0; k < panels(); ++k) {
    const std::size_t first = panel_first(k);
    const double scale = 2.0 / (breaks_[k + 1] - breaks_[k]);
    for (std::size_t a = 0; a < p; ++a) {
      cplx s = 0.0;
      for (std::size_t b = 0; b < p; ++b) s += ref_diff_[a * p + b] * f[static_cast<Eigen::Index>(first + b)];
      out[static_cast<Eigen::Index>(first + a)] += scale * s;
      count[static_cast<Eigen::Index>(first + a)] += 1.0;
    }
  }
  return out.cwiseQuotient(count.cast<cplx>());
}

std::size_t RadialGrid::locate(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t k = (it == breaks_.begin()) ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(k, panels() - 1);
}

cplx RadialGrid::interpolate(const Eigen::VectorXcd& f, double x) const {
  require(x >= r_min() - 1e-12 && x <= r_max() + 1e-12, ErrorCode::domain_error,
          "interpolate: evaluation outside grid");
  const std::size_t k = locate(x);
  const double lo = breaks_[k], hi = breaks_[k + 1];
  const double t = (2.0 * x - lo - hi) / (hi - lo);
  const auto l = basis_->values(std::clamp(t, -1.0, 1.0));
  cplx s = 0.0;
  for (std::size_t b = 0; b < order_; ++b) s += l[b] * f[static_cast<Eigen::Index>(panel_first(k) + b)];
  return s;
}

cplx RadialGrid::integrate_dr(const Eigen::VectorXcd& f, double lo, double hi) const {
  lo = std::max(lo, r_min());
  hi = std::min(hi, r_max());
  if (hi <= lo) return 0.0;
  const LagrangeBasis& basis = *basis_;
  cplx total = 0.0;
  for (std::size_t k = locate(lo); k < panels() && breaks_[k] < hi; ++k) {
    const double plo = breaks_[k], phi = breaks_[k + 1];
    const double a = std::max(lo, plo), b = std::min(hi, phi);
    if (b <= a) continue;
    const double half = 0.5 * (phi - plo), mid = 0.5 * (phi + plo);
    const auto c = basis.integration_weights((a - mid) / half, (b - mid) / half);
    for (std::size_t j = 0; j < order_; ++j) total += half * c[j] * f[static_cast<Eigen::Index>(panel_first(k) + j)];
  }
  return total;
}

double unit_bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double y = 2.0 * x - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

PotentialSpec::PotentialSpec(double c0, double c1, double delta0, Profile profile, std::string label,
                             double support_lo, double support_hi)
    : c0_(c0), c1_(c1), delta0_(delta0), profile_(std::move(profile)), label_(std::move(label)),
      lo_(support_lo), hi_(support_hi) {
  if (!(c0 > 0.0 && c0 < 0.25))
    fail(ErrorCode::domain_error, "potential: require 0<c0<1/4, got c0=" + std::to_string(c0));
  require(c1 > 0.0, ErrorCode::domain_error, "potential: require c1>0");
  require(delta0 > 2.0, ErrorCode::domain_error, "potential: require delta0>2");
  require(static_cast<bool>(profile_), ErrorCode::invalid_argument, "potential: empty profile");
}

PotentialSpec PotentialSpec::zero() {
  PotentialSpec p(0.1, 1.0, 3.0, [](double) { return 0.0; }, "zero");
  p.zero_ = true;
  return p;
}

PotentialSpec PotentialSpec::scaled_bump(double amplitude, double lo, double hi, double c0, double c1,
                                         double delta0) {
  require(hi > lo && lo >= 0.0, ErrorCode::invalid_argument, "scaled_bump: need 0 <= lo < hi");
  auto prof = [=](double r) {
    const double b = unit_bump((r - lo) / (hi - lo));
    return b == 0.0 ? 0.0 : amplitude * std::pow(r, -delta0) * b;
  };
  return PotentialSpec(c0, c1, delta0, prof, amplitude < 0 ? "attractive_bump" : "repulsive_bump", lo, hi);
}

PotentialSpec PotentialSpec::sign_changing(double amplitude, double lo, double hi, double c0, double c1,
                                           double delta0) {
  require(hi > lo && lo >= 0.0, ErrorCode::invalid_argument, "sign_changing: need 0 <= lo < hi");
  auto prof = [=](double r) {
    const double x = (r - lo) / (hi - lo);
    const double b = unit_bump(x);
    return b == 0.0 ? 0.0 : amplitude * std::pow(r, -delta0) * b * std::cos(std::numbers::pi * x);
  };
  return PotentialSpec(c0, c1, delta0, prof, "sign_changing_bump", lo, hi);
}

double PotentialSpec::first_violation(const RadialGrid& grid) const {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double v = (*this)(r);
    const double env = std::pow(r, -delta0_);
    if (!(v >= -c0_ * env && v <= c1_ * env)) return r;
  }
  return -1.0;
}

Eigen::VectorXd PotentialSpec::sample(const RadialGrid& grid) const {
  const double bad = first_violation(grid);
  if (bad >= 0.0) {
    std::ostringstream os;
    os << "potential '" << label_ << "' violates -c0|x|^-delta0 <= V <= c1|x|^-delta0 at r=" << bad;
    fail(ErrorCode::domain_error, os.str());
  }
  Eigen::VectorXd v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[static_cast<Eigen::Index>(i)] = (*this)(grid.r(i));
  return v;
}

ModeField ModeField::zero(GridPtr grid, int l) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return ModeField{l, std::move(grid), Eigen::VectorXcd::Zero(n)};
}

ModeField ModeField::from_function(GridPtr grid, int l, const std::function<cplx(double)>& f) {
  require(l >= 0, ErrorCode::invalid_argument, "ModeField: degree must be non-negative");
  Eigen::VectorXcd v(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) v[static_cast<Eigen::Index>(i)] = f(grid->r(i));
  return ModeField{l, std::move(grid), std::move(v)};
}

ModeField ModeField::from_radial_function(GridPtr grid, const std::function<double(double)>& f) {
  return from_function(std::move(grid), 0, [&](double r) { return cplx(kSqrt4Pi * f(r), 0.0); });
}

CauchyData::CauchyData(ModeField f_, ModeField g_) : f(std::move(f_)), g(std::move(g_)) {
  require(f.l == g.l, ErrorCode::invalid_argument, "CauchyData: f and g must share the mode degree");
  require_same_grid(f, g);
}

void require_same_grid(const ModeField& u, const ModeField& v) {
  require(u.grid && v.grid && (u.grid == v.grid || (u.grid->size() == v.grid->size() &&
                                                     u.grid->nodes() == v.grid->nodes())),
          ErrorCode::invalid_argument, "grid mismatch between fields");
}

double weighted_l2_norm(const ModeField& u, NormWeight weight) {
  const auto& g = *u.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    s += g.weights()[k] * std::pow(japanese(g.r(i)), 2.0 * weight.s) * std::norm(u.values[k]);
  }
  return std::sqrt(s);
}

double sup_norm(const ModeField& u) {
  require_radial(u, "sup_norm");
  return u.values.cwiseAbs().maxCoeff() / kSqrt4Pi;
}

double l1_norm(const ModeField& u) {
  require_radial(u, "l1_norm");
  return kSqrt4Pi * u.grid->weights().dot(u.values.cwiseAbs());
}

double lp_norm(const ModeField& u, double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::invalid_argument, "lp_norm: need 1 <= p < inf");
  if (p == 2.0) return weighted_l2_norm(u);
  require_radial(u, "lp_norm");
  const auto& w = u.grid->weights();
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i) s += w[i] * std::pow(std::abs(u.values[i]) / kSqrt4Pi, p);
  return std::pow(4.0 * std::numbers::pi * s, 1.0 / p);
}

cplx inner(const ModeField& u, const ModeField& v) {
  require_same_grid(u, v);
  const auto& w = u.grid->weights();
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i) s += w[i] * u.values[i] * std::conj(v.values[i]);
  return s;
}

}  // namespace decaylab
