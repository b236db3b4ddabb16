#pragma once

// Decay experiments on top of the spectral propagator: local energy, dispersive
// sup-norm decay of dyadic blocks, Strichartz norms, and power-law fits.

#include <vector>

#include "decaylab/spectral_calculus.hpp"

namespace decaylab {

struct DecayFit {
  std::vector<double> times;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;   // log value at t = 1
  double residual = 0.0;    // RMS of log residuals
  double ci = 0.0;          // half-width of the slope confidence interval
  std::size_t excluded = 0; // samples dropped for being <= 1e-300
};

/// Least squares on (log t, log v). Needs >= 4 usable samples, times increasing and >= 1.
DecayFit fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& values,
                            double confidence = 0.95);

/// int_{r_1}^{R} (|u_r|^2 + l(l+1)|u/r|^2 + |u_t|^2) r^2 dr.
double local_energy(const PropagatorResult& state, double R);
/// Same over the whole grid plus the potential term v|u|^2.
double total_energy(const PropagatorResult& state, const PotentialSpec& pot);

struct EnergyDecayResult {
  DecayFit fit;
  std::vector<double> energies;
  double initial_energy = 0.0;  // total energy of the data
};

EnergyDecayResult energy_decay_experiment(const CauchyData& data, const PotentialSpec& pot, double R,
                                          const std::vector<double>& times, const SpectralOptions& opt = {});

struct DispersiveResult {
  DecayFit fit;
  std::vector<double> sup_values;
  std::vector<double> ratios;  // sup / (2^j / t * ||g||_1)
  double data_norm = 0.0;
};

/// sup |phi_j(sqrt G_V) e^{i t sqrt G_V} / sqrt G_V g| against t; l = 0 only.
DispersiveResult dispersive_experiment(const ModeField& g, const PotentialSpec& pot, int j,
                                       const std::vector<double>& times, const SpectralOptions& opt = {});

/// Throws invalid_argument unless 2/q + 2/p <= 1, 2 < q <= inf, 2 <= p < inf and
/// gamma = 3(1/2 - 1/p) - 1/q.
void check_strichartz_admissible(double q, double p, double gamma);

struct StrichartzResult {
  std::vector<double> horizons;
  std::vector<double> norms;   // (int_0^T ||u||_p^q dt)^{1/q}
  std::vector<double> ratios;  // norm / data norm
  double data_norm = 0.0;      // ||f||_{H^gamma} + ||g||_{H^{gamma-1}} for G_V
};

/// Homogeneous Strichartz norms for each horizon T; time integral by Gauss panels of unit length.
StrichartzResult strichartz_norm(const CauchyData& data, const PotentialSpec& pot, double q, double p, double gamma,
                                 const std::vector<double>& horizons, const SpectralOptions& opt = {},
                                 std::size_t nodes_per_unit = 8);

}  // namespace decaylab
