#pragma once

// Domains, radial grids, potentials, mode fields and the norms used by the
// decay estimates. Fields are spherical-harmonic coefficients u_l(r): the 3-D
// function is u_l(r) Y_lm(x/|x|) with orthonormal Y_lm.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "decaylab/error.hpp"
#include "decaylab/quadrature.hpp"

namespace decaylab {

using cplx = std::complex<double>;

enum class DomainKind { whole_space, exterior_ball };

struct DomainSpec {
  DomainKind kind = DomainKind::whole_space;
  double a = 0.0;  // obstacle radius, exterior_ball only

  static DomainSpec whole_space() { return {}; }
  static DomainSpec exterior_ball(double radius);

  bool is_ball() const { return kind == DomainKind::exterior_ball; }
  /// Inner radius where the Dirichlet condition sits (0 for whole space).
  double inner_radius() const { return is_ball() ? a : 0.0; }
};

std::string to_string(DomainKind kind);

struct GridOptions {
  std::size_t order = 10;            // Lobatto nodes per panel, endpoints shared
  double whole_space_inner = 1e-4;   // first node for whole_space grids
};

/// Composite Gauss-Lobatto grid on [r_1, R_max]. Weights carry the r^2 measure.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> build(const DomainSpec& domain, double r_max, std::size_t m,
                                                 const GridOptions& options = {});

  const DomainSpec& domain() const { return domain_; }
  std::size_t size() const { return r_.size(); }
  const Eigen::VectorXd& nodes() const { return r_; }
  double r(std::size_t i) const { return r_[static_cast<Eigen::Index>(i)]; }
  /// Weights w_i with sum_i w_i f(r_i) ~ integral f(r) r^2 dr.
  const Eigen::VectorXd& weights() const { return w_; }
  /// Weights for the plain measure dr.
  const Eigen::VectorXd& dr_weights() const { return wdr_; }

  double r_min() const { return r_[0]; }
  double r_max() const { return r_[r_.size() - 1]; }
  std::size_t order() const { return order_; }
  std::size_t panels() const { return breaks_.size() - 1; }
  double panel_lo(std::size_t k) const { return breaks_[k]; }
  double panel_hi(std::size_t k) const { return breaks_[k + 1]; }
  std::size_t panel_first(std::size_t k) const { return k * (order_ - 1); }
  /// Panel that owns node i as an interior or left endpoint (last panel owns r_M).
  std::size_t panel_of(std::size_t i) const;
  /// Polynomial degree q such that sum w_i p(r_i) is exact for deg p <= q.
  std::size_t quadrature_order() const { return 2 * order_ - 5; }
  double node_density() const { return static_cast<double>(size()) / (r_max() - r_min()); }

  /// C_ij with sum_j C_ij f(r_j) = integral_{r_1}^{r_i} f dr of the panel interpolant.
  double cumulative_weight(std::size_t i, std::size_t j) const;
  /// Running integral integral_{r_1}^{r_i} f dr at every node.
  Eigen::VectorXcd cumulative(const Eigen::VectorXcd& f) const;
  Eigen::VectorXcd derivative(const Eigen::VectorXcd& f) const;
  cplx interpolate(const Eigen::VectorXcd& f, double x) const;
  /// integral_{lo}^{hi} f dr of the panel interpolant, lo/hi clipped to the grid.
  cplx integrate_dr(const Eigen::VectorXcd& f, double lo, double hi) const;

  const std::vector<double>& reference_nodes() const { return ref_nodes_; }
  const std::vector<double>& reference_cumulative() const { return ref_cum_; }

 private:
  RadialGrid() = default;
  std::size_t locate(double x) const;

  DomainSpec domain_;
  std::size_t order_ = 0;
  std::vector<double> breaks_;
  Eigen::VectorXd r_, w_, wdr_;
  std::vector<double> ref_nodes_, ref_weights_, ref_cum_, ref_diff_;
  std::optional<LagrangeBasis> basis_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Radial potential with the two-sided bound -c0 r^-delta0 <= v(r) <= c1 r^-delta0.
class PotentialSpec {
 public:
  using Profile = std::function<double(double)>;

  PotentialSpec(double c0, double c1, double delta0, Profile profile, std::string label = "custom",
                double support_lo = 0.0, double support_hi = 0.0);

  static PotentialSpec zero();
  /// v(r) = amplitude * r^-delta0 * bump on [lo, hi]; bump peaks at 1.
  static PotentialSpec scaled_bump(double amplitude, double lo, double hi, double c0 = 0.24, double c1 = 1.0,
                                   double delta0 = 3.0);
  /// Sign-changing variant: amplitude * r^-delta0 * bump * cos(pi x), x in [0, 1].
  static PotentialSpec sign_changing(double amplitude, double lo, double hi, double c0 = 0.24, double c1 = 1.0,
                                     double delta0 = 3.0);

  double c0() const { return c0_; }
  double c1() const { return c1_; }
  double delta0() const { return delta0_; }
  const std::string& label() const { return label_; }
  bool is_zero() const { return zero_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double operator()(double r) const { return zero_ ? 0.0 : profile_(r); }

  /// Samples the profile at the grid nodes; throws if the bound fails at any node.
  Eigen::VectorXd sample(const RadialGrid& grid) const;
  /// Exact node-wise admission check; returns the first violating radius or a negative value.
  double first_violation(const RadialGrid& grid) const;

 private:
  double c0_, c1_, delta0_;
  Profile profile_;
  std::string label_;
  bool zero_ = false;
  double lo_ = 0.0, hi_ = 0.0;
};

/// Smooth compactly supported bump on (0, 1) with maximum 1 at x = 1/2.
double unit_bump(double x);

struct ModeField {
  int l = 0;
  GridPtr grid;
  Eigen::VectorXcd values;

  static ModeField zero(GridPtr grid, int l);
  static ModeField from_function(GridPtr grid, int l, const std::function<cplx(double)>& f);
  /// l = 0 field whose 3-D values are f(|x|); the coefficient carries sqrt(4 pi).
  static ModeField from_radial_function(GridPtr grid, const std::function<double(double)>& f);

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  ModeField with_values(Eigen::VectorXcd v) const { return ModeField{l, grid, std::move(v)}; }
};

struct CauchyData {
  ModeField f;  // initial displacement
  ModeField g;  // initial velocity

  CauchyData(ModeField f_, ModeField g_);
  int l() const { return f.l; }
  const GridPtr& grid() const { return f.grid; }
};

/// Exponent s of the weight <x>^s = (1 + |x|^2)^{s/2}.
struct NormWeight {
  double s = 0.0;
};

inline double japanese(double r) { return std::sqrt(1.0 + r * r); }

double weighted_l2_norm(const ModeField& u, NormWeight w = {});
/// Sup over nodes of the 3-D values; l = 0 only.
double sup_norm(const ModeField& u);
/// L^1 norm of the 3-D function; l = 0 only.
double l1_norm(const ModeField& u);
/// L^p norm of the 3-D function, 1 <= p < inf; l = 0 only (p = 2 allowed for any l).
double lp_norm(const ModeField& u, double p);
/// L^2 inner product sum_i w_i u_i conj(v_i).
cplx inner(const ModeField& u, const ModeField& v);

void require_same_grid(const ModeField& u, const ModeField& v);

}  // namespace decaylab
