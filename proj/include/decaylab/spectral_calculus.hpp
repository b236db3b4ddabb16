#pragma once

// Littlewood-Paley windows and the Stone formula
//   phi(sqrt(G_V)) = (1/pi i) int_0^inf phi(lambda) [R_V(+) - R_V(-)] lambda dlambda
// evaluated by composite Gauss quadrature in lambda, one resolvent solve per node.

#include <functional>
#include <vector>

#include "decaylab/potential_resolvent.hpp"

namespace decaylab {

/// chi(lambda) = 1 on [0, 1], 0 on [2, inf), smooth in between. `shape` rescales the
/// exp(-1/x) mollifier inside the transition; 1 is the standard window.
double lp_cutoff(double lambda, double shape = 1.0);
double lp_cutoff_derivative(double lambda, double shape = 1.0);

/// phi_j(lambda) = phi(2^-j lambda) with phi(x) = chi(x) - chi(2x), support [2^{j-1}, 2^{j+1}].
struct SpectralWindow {
  int j = 0;
  double shape = 1.0;
  double operator()(double lambda) const;
  double derivative(double lambda) const;
  double lo() const;
  double hi() const;
};

SpectralWindow lp_window(int j, double shape = 1.0);
/// max |sum_j phi_j(lambda) - 1| over the given points (all lambda > 0).
double partition_check(const std::vector<double>& lambdas, double shape = 1.0);

struct SpectralOptions {
  int j_min = -6;
  int j_max = 6;
  double lambda_max = 16.0;        // hard spectral cutoff for non-compact multipliers
  std::size_t gauss_order = 20;    // nodes per lambda panel
  double oscillation = 20.0;       // node spacing <= pi / (oscillation * t)
  std::size_t max_nodes = 400000;
  unsigned threads = 1;
  double block_tolerance = 1e-8;   // automatic j-range extension threshold
  double window_shape = 1.0;       // Littlewood-Paley window variant, see lp_cutoff
};

struct SpectralNodes {
  std::vector<double> lambda;
  std::vector<double> weight;
  std::size_t size() const { return lambda.size(); }
};

/// Gauss panels on [lo, hi] broken at powers of two. Panels resolve e^{i omega lambda}
/// and respect the oscillation rule for t_max; throws budget_exceeded past max_nodes.
SpectralNodes make_spectral_nodes(double lo, double hi, double omega, double t_max, const SpectralOptions& opt);

/// Largest radius where |values| exceeds 1e-12 of its maximum.
double support_radius(const ModeField& f);

enum class Integrand { difference, derivative };  // D(lambda) or dD/dlambda

/// One data vector and its multipliers m_o(lambda), o = 0..outputs-1.
struct StoneInput {
  Eigen::VectorXcd data;
  std::function<void(double lambda, cplx* out)> multipliers;
};

/// Returns the M x outputs matrix sum_k w_k sum_d m_{d,o}(lambda_k) X(lambda_k) data_d with
/// X = D or dD/dlambda. Chunked over nodes, threaded, reduced in a fixed order.
Eigen::MatrixXcd stone_integrate(const GridPtr& grid, int l, const Eigen::VectorXd& v,
                                 const std::vector<StoneInput>& inputs, std::size_t outputs,
                                 const SpectralNodes& nodes, Integrand what = Integrand::difference,
                                 unsigned threads = 1);

/// <D(lambda_k) f, f> / (pi i) at every node: the spectral density of f (real, non-negative).
std::vector<double> spectral_density(const GridPtr& grid, int l, const Eigen::VectorXd& v, const ModeField& f,
                                     const SpectralNodes& nodes, unsigned threads = 1);

struct SpectralFunction {
  std::function<cplx(double)> phi;
  double lo = 0.0;  // phi vanishes outside [lo, hi]; hi is clipped to lambda_max
  double hi = 1e300;
};

ModeField stone_apply(const SpectralFunction& phi, const ModeField& data, const PotentialSpec& pot,
                      const SpectralOptions& opt = {});

struct PropagatorResult {
  double t = 0.0;
  ModeField u;
  ModeField ut;
};

PropagatorResult propagate(double t, const CauchyData& data, const PotentialSpec& pot,
                           const SpectralOptions& opt = {});
/// All times in one pass over the lambda nodes.
std::vector<PropagatorResult> propagate_many(const std::vector<double>& times, const CauchyData& data,
                                             const PotentialSpec& pot, const SpectralOptions& opt = {});

ModeField dyadic_block_apply(int j, const ModeField& f, const PotentialSpec& pot, const SpectralOptions& opt = {});
/// Blocks j_lo..j_hi in one pass.
std::vector<ModeField> dyadic_blocks(int j_lo, int j_hi, const ModeField& f, const PotentialSpec& pot,
                                     const SpectralOptions& opt = {});

/// phi_j(sqrt G_V) e^{i t sqrt G_V} / sqrt G_V g for every t, through the direct Stone integral.
std::vector<ModeField> dispersive_block(int j, const std::vector<double>& times, const ModeField& g,
                                        const PotentialSpec& pot, const SpectralOptions& opt = {});
/// Same operator evaluated after one integration by parts in lambda (t != 0).
std::vector<ModeField> dispersive_block_by_parts(int j, const std::vector<double>& times, const ModeField& g,
                                                 const PotentialSpec& pot, const SpectralOptions& opt = {});

enum class Generator { free, perturbed };  // G (V dropped) or G_V

struct BesovResult {
  double norm = 0.0;
  int j_lo = 0;
  int j_hi = 0;
  std::vector<double> block_norms;  // ||phi_j(sqrt G) f||_p, j = j_lo..j_hi
};

/// ||f||_{B^s_{p,q}} = || 2^{sj} ||phi_j(sqrt G) f||_p ||_{l^q(j)}, p, q in {1, 2, inf}.
/// p = 2 uses the quadratic form (1/pi i) int phi_j^2 <D f, f> lambda dlambda; other p need l = 0.
BesovResult besov_norm(const ModeField& f, double s, double p, double q, Generator gen, const PotentialSpec& pot,
                       const SpectralOptions& opt = {});
/// ||G^{s/2} f||_2 from the spectral density; equivalent to the B^s_{2,2} norm.
double sobolev_norm(const ModeField& f, double s, Generator gen, const PotentialSpec& pot,
                    const SpectralOptions& opt = {});

struct EquivalenceRatio {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::vector<double> ratios;
};

/// Ratios ||f||_{B(G_V)} / ||f||_{B(G)}; refuses s outside |s| < min{3/p, 2, 3(1 - 1/p)}.
EquivalenceRatio besov_equivalence_ratio(const std::vector<ModeField>& fs, double s, double p, double q,
                                         const PotentialSpec& pot, const SpectralOptions& opt = {});

}  // namespace decaylab
