#include "decaylab/decay_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

namespace decaylab {

DecayFit fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& values, double confidence) {
  require(times.size() == values.size(), ErrorCode::invalid_argument, "fit_decay_exponent: size mismatch");
  require(confidence > 0.0 && confidence < 1.0, ErrorCode::invalid_argument,
          "fit_decay_exponent: confidence must be in (0, 1)");
  DecayFit fit;
  fit.times = times;
  fit.values = values;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < times.size(); ++k) {
    require(times[k] >= 1.0, ErrorCode::invalid_argument, "fit_decay_exponent: times must be >= 1");
    require(k == 0 || times[k] > times[k - 1], ErrorCode::invalid_argument,
            "fit_decay_exponent: times must be strictly increasing");
    require(values[k] >= 0.0, ErrorCode::domain_error, "fit_decay_exponent: negative value");
    if (values[k] <= 1e-300) {
      ++fit.excluded;
      continue;
    }
    x.push_back(std::log(times[k]));
    y.push_back(std::log(values[k]));
  }
  require(x.size() >= 4, ErrorCode::invalid_argument, "fit_decay_exponent: need at least 4 positive samples");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (fit.intercept + fit.slope * x[k]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  const double se = std::sqrt(ss / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  fit.ci = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence))) * se;
  return fit;
}

namespace {
Eigen::VectorXd energy_density(const PropagatorResult& s) {
  const auto& g = *s.u.grid;
  const Eigen::VectorXcd du = g.derivative(s.u.values);
  const double ll = s.u.l * (s.u.l + 1.0);
  Eigen::VectorXd e(du.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double r = g.nodes()[i];
    e[i] = std::norm(du[i]) + ll * std::norm(s.u.values[i]) / (r * r) + std::norm(s.ut.values[i]);
  }
  return e;
}
}  // namespace

double local_energy(const PropagatorResult& state, double R) {
  const auto& g = *state.u.grid;
  require(R <= g.r_max() * (1 + 1e-14), ErrorCode::domain_error, "local_energy: R beyond the grid");
  require(R > g.r_min(), ErrorCode::invalid_argument, "local_energy: R must exceed the inner radius");
  const Eigen::VectorXd e = energy_density(state);
  const Eigen::VectorXd r2 = g.nodes().cwiseProduct(g.nodes());
  return g.integrate_dr(e.cwiseProduct(r2).cast<cplx>(), g.r_min(), std::min(R, g.r_max())).real();
}

double total_energy(const PropagatorResult& state, const PotentialSpec& pot) {
  const auto& g = *state.u.grid;
  const Eigen::VectorXd v = pot.sample(g);
  Eigen::VectorXd e = energy_density(state);
  for (Eigen::Index i = 0; i < e.size(); ++i) e[i] += v[i] * std::norm(state.u.values[i]);
  return g.weights().dot(e);
}

EnergyDecayResult energy_decay_experiment(const CauchyData& data, const PotentialSpec& pot, double R,
                                          const std::vector<double>& times, const SpectralOptions& opt) {
  EnergyDecayResult res;
  res.initial_energy = total_energy(PropagatorResult{0.0, data.f, data.g}, pot);
  const auto states = propagate_many(times, data, pot, opt);
  for (const auto& s : states) res.energies.push_back(local_energy(s, R));
  res.fit = fit_decay_exponent(times, res.energies);
  return res;
}

DispersiveResult dispersive_experiment(const ModeField& g, const PotentialSpec& pot, int j,
                                       const std::vector<double>& times, const SpectralOptions& opt) {
  require(g.l == 0, ErrorCode::invalid_argument, "dispersive_experiment: radial (l = 0) data only");
  for (double t : times) require(t >= 1.0, ErrorCode::invalid_argument, "dispersive_experiment: times must be >= 1");
  DispersiveResult res;
  res.data_norm = l1_norm(g);
  const auto blocks = dispersive_block(j, times, g, pot, opt);
  for (std::size_t k = 0; k < times.size(); ++k) {
    res.sup_values.push_back(sup_norm(blocks[k]));
    res.ratios.push_back(res.sup_values.back() / (std::ldexp(1.0, j) / times[k] * res.data_norm));
  }
  res.fit = fit_decay_exponent(times, res.sup_values);
  return res;
}

void check_strichartz_admissible(double q, double p, double gamma) {
  std::ostringstream os;
  os << "inadmissible Strichartz exponents (q=" << q << ", p=" << p << ", gamma=" << gamma << "): ";
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  if (!(q > 2.0)) fail(ErrorCode::invalid_argument, os.str() + "need 2 < q <= inf");
  if (!(p >= 2.0 && std::isfinite(p))) fail(ErrorCode::invalid_argument, os.str() + "need 2 <= p < inf");
  if (2.0 * iq + 2.0 / p > 1.0 + 1e-12) fail(ErrorCode::invalid_argument, os.str() + "need 2/q + 2/p <= 1");
  if (std::abs(3.0 * (0.5 - 1.0 / p) - iq - gamma) > 1e-12)
    fail(ErrorCode::invalid_argument, os.str() + "need gamma = 3(1/2 - 1/p) - 1/q");
}

StrichartzResult strichartz_norm(const CauchyData& data, const PotentialSpec& pot, double q, double p, double gamma,
                                 const std::vector<double>& horizons, const SpectralOptions& opt,
                                 std::size_t nodes_per_unit) {
  check_strichartz_admissible(q, p, gamma);
  require(std::isfinite(q), ErrorCode::invalid_argument, "strichartz_norm: q = inf is not integrated in time");
  require(!horizons.empty(), ErrorCode::invalid_argument, "strichartz_norm: no horizons");
  require(data.l() == 0 || p == 2.0, ErrorCode::invalid_argument, "strichartz_norm: p != 2 needs l = 0");
  double t_end = 0.0;
  for (double T : horizons) {
    require(T > 0.0 && std::floor(T) == T, ErrorCode::invalid_argument,
            "strichartz_norm: horizons must be positive integers");
    t_end = std::max(t_end, T);
  }
  const auto rule = gauss_legendre(nodes_per_unit);
  std::vector<double> times, weights;
  for (int cell = 0; cell < static_cast<int>(t_end); ++cell)
    for (std::size_t i = 0; i < nodes_per_unit; ++i) {
      times.push_back(cell + 0.5 * (rule.nodes[i] + 1.0));
      weights.push_back(0.5 * rule.weights[i]);
    }
  const auto states = propagate_many(times, data, pot, opt);
  StrichartzResult res;
  res.data_norm = sobolev_norm(data.f, gamma, Generator::perturbed, pot, opt) +
                  sobolev_norm(data.g, gamma - 1.0, Generator::perturbed, pot, opt);
  for (double T : horizons) {
    double acc = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] < T) acc += weights[k] * std::pow(lp_norm(states[k].u, p), q);
    res.horizons.push_back(T);
    res.norms.push_back(std::pow(acc, 1.0 / q));
    res.ratios.push_back(res.norms.back() / res.data_norm);
  }
  return res;
}

}  // namespace decaylab
