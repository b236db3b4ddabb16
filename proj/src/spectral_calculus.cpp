#include "decaylab/spectral_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace decaylab {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
constexpr std::size_t kChunk = 64;

double mollifier(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double mollifier_derivative(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// Runs body(c) for chunks c = 0..n-1, `threads` at a time, then hands results to sink in order.
template <class Body, class Sink>
void ordered_chunks(std::size_t n, unsigned threads, Body body, Sink sink) {
  threads = std::max(1u, threads);
  using Result = decltype(body(std::size_t{0}));
  for (std::size_t first = 0; first < n; first += threads) {
    const std::size_t count = std::min<std::size_t>(threads, n - first);
    std::vector<Result> out(count);
    if (count == 1) {
      out[0] = body(first);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errs(count);
      for (std::size_t k = 0; k < count; ++k)
        pool.emplace_back([&, k] {
          try {
            out[k] = body(first + k);
          } catch (...) {
            errs[k] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    }
    for (std::size_t k = 0; k < count; ++k) sink(out[k]);
  }
}

bool is_real(const Eigen::VectorXcd& x) { return x.imag().isZero(0.0); }

// D(lambda) x or dD/dlambda x from the outgoing solve; the incoming one is its conjugate for real V.
Eigen::VectorXcd evaluate(const PerturbedResolvent& rv, const Eigen::VectorXcd& x, Integrand what) {
  auto op = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return what == Integrand::difference ? rv.apply(y) : Eigen::VectorXcd(2.0 * rv.lambda() * rv.apply_squared(y));
  };
  if (is_real(x)) return cplx(0.0, 2.0) * op(x).imag().cast<cplx>();
  return op(x) - op(x.conjugate()).conjugate();
}

std::size_t chunk_count(const SpectralNodes& nodes) { return (nodes.size() + kChunk - 1) / kChunk; }

double oscillation_radius(const ModeField& f) { return f.grid->r_max() + support_radius(f); }
}  // namespace

double lp_cutoff(double lambda, double shape) {
  if (lambda <= 1.0) return 1.0;
  if (lambda >= 2.0) return 0.0;
  const double s = lambda - 1.0;
  const double a = mollifier((1.0 - s) / shape), b = mollifier(s / shape);
  return a / (a + b);
}

double lp_cutoff_derivative(double lambda, double shape) {
  if (lambda <= 1.0 || lambda >= 2.0) return 0.0;
  const double s = lambda - 1.0;
  const double a = mollifier((1.0 - s) / shape), b = mollifier(s / shape);
  const double den = (a + b) * (a + b);
  return (-mollifier_derivative((1.0 - s) / shape) * b - a * mollifier_derivative(s / shape)) / (shape * den);
}

double SpectralWindow::operator()(double lambda) const {
  const double x = std::ldexp(lambda, -j);
  return lp_cutoff(x, shape) - lp_cutoff(2.0 * x, shape);
}

double SpectralWindow::derivative(double lambda) const {
  const double x = std::ldexp(lambda, -j);
  return std::ldexp(lp_cutoff_derivative(x, shape) - 2.0 * lp_cutoff_derivative(2.0 * x, shape), -j);
}

double SpectralWindow::lo() const { return std::ldexp(1.0, j - 1); }
double SpectralWindow::hi() const { return std::ldexp(1.0, j + 1); }

SpectralWindow lp_window(int j, double shape) {
  require(shape > 0.0, ErrorCode::invalid_argument, "lp_window: shape must be positive");
  return SpectralWindow{j, shape};
}

double partition_check(const std::vector<double>& lambdas, double shape) {
  double worst = 0.0;
  for (double lam : lambdas) {
    require(lam > 0.0, ErrorCode::invalid_argument, "partition_check: lambda must be positive");
    const int center = static_cast<int>(std::floor(std::log2(lam)));
    double s = 0.0;
    for (int j = center - 3; j <= center + 3; ++j) s += lp_window(j, shape)(lam);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

SpectralNodes make_spectral_nodes(double lo, double hi, double omega, double t_max, const SpectralOptions& opt) {
  require(lo >= 0.0 && hi > lo, ErrorCode::invalid_argument, "spectral nodes: need 0 <= lo < hi");
  require(opt.gauss_order >= 2, ErrorCode::invalid_argument, "spectral nodes: gauss order must be >= 2");
  const double q = static_cast<double>(opt.gauss_order);
  double h = std::numeric_limits<double>::infinity();
  if (t_max > 0.0) h = std::min(h, q * kPi / (opt.oscillation * t_max));
  if (omega > 0.0) h = std::min(h, 0.8 * q / omega);

  std::vector<double> breaks{lo};
  if (lo == 0.0) breaks.push_back(std::min(std::ldexp(1.0, opt.j_min), hi));
  for (int k = static_cast<int>(std::floor(std::log2(breaks.back()))) + 1;; ++k) {
    const double b = std::ldexp(1.0, k);
    if (b >= hi) break;
    if (b > breaks.back()) breaks.push_back(b);
  }
  if (breaks.back() < hi) breaks.push_back(hi);

  std::size_t total = 0;
  std::vector<std::size_t> panels;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double len = breaks[k + 1] - breaks[k];
    const double n = std::max(2.0, std::ceil(len / h));
    require(n * q < 1e12, ErrorCode::budget_exceeded, "spectral nodes: oscillation budget exceeded");
    panels.push_back(static_cast<std::size_t>(n));
    total += panels.back() * opt.gauss_order;
  }
  if (total > opt.max_nodes) {
    std::ostringstream os;
    os << "spectral nodes: oscillation budget exceeded (" << total << " nodes > " << opt.max_nodes << ")";
    fail(ErrorCode::budget_exceeded, os.str());
  }
  const auto rule = gauss_legendre(opt.gauss_order);
  SpectralNodes out;
  out.lambda.reserve(total);
  out.weight.reserve(total);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double step = (breaks[k + 1] - breaks[k]) / static_cast<double>(panels[k]);
    for (std::size_t p = 0; p < panels[k]; ++p) {
      const double a = breaks[k] + step * static_cast<double>(p);
      for (std::size_t i = 0; i < opt.gauss_order; ++i) {
        out.lambda.push_back(a + 0.5 * step * (rule.nodes[i] + 1.0));
        out.weight.push_back(0.5 * step * rule.weights[i]);
      }
    }
  }
  return out;
}

double support_radius(const ModeField& f) {
  const double mx = f.values.cwiseAbs().maxCoeff();
  if (mx == 0.0) return f.grid->r_min();
  for (Eigen::Index i = f.values.size() - 1; i >= 0; --i)
    if (std::abs(f.values[i]) > 1e-12 * mx) return f.grid->nodes()[i];
  return f.grid->r_min();
}

Eigen::MatrixXcd stone_integrate(const GridPtr& grid, int l, const Eigen::VectorXd& v,
                                 const std::vector<StoneInput>& inputs, std::size_t outputs,
                                 const SpectralNodes& nodes, Integrand what, unsigned threads) {
  const auto m = static_cast<Eigen::Index>(grid->size());
  const auto no = static_cast<Eigen::Index>(outputs);
  for (const auto& in : inputs)
    require(in.data.size() == m, ErrorCode::invalid_argument, "stone_integrate: data length does not match grid");
  const auto cache = PerturbedResolvent::make_support_cache(*grid, v);
  const bool squared = what == Integrand::derivative;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(m, no);
  std::vector<cplx> mrow(outputs);
  auto body = [&](std::size_t c) {
    const std::size_t k0 = c * kChunk, k1 = std::min(nodes.size(), k0 + kChunk);
    const auto nk = static_cast<Eigen::Index>(k1 - k0);
    std::vector<Eigen::MatrixXcd> dm(inputs.size(), Eigen::MatrixXcd(m, nk));
    std::vector<Eigen::MatrixXcd> mult(inputs.size(), Eigen::MatrixXcd(nk, no));
    std::vector<cplx> row(outputs);
    for (std::size_t k = k0; k < k1; ++k) {
      const auto kk = static_cast<Eigen::Index>(k - k0);
      const PerturbedResolvent rv(grid, l, nodes.lambda[k], Sign::plus, v, squared, &cache);
      for (std::size_t d = 0; d < inputs.size(); ++d) {
        dm[d].col(kk) = evaluate(rv, inputs[d].data, what);
        inputs[d].multipliers(nodes.lambda[k], row.data());
        for (Eigen::Index o = 0; o < no; ++o) mult[d](kk, o) = nodes.weight[k] * row[static_cast<std::size_t>(o)];
      }
    }
    Eigen::MatrixXcd part = Eigen::MatrixXcd::Zero(m, no);
    for (std::size_t d = 0; d < inputs.size(); ++d) part.noalias() += dm[d] * mult[d];
    return part;
  };
  ordered_chunks(chunk_count(nodes), threads, body, [&](const Eigen::MatrixXcd& part) { total += part; });
  return total;
}

std::vector<double> spectral_density(const GridPtr& grid, int l, const Eigen::VectorXd& v, const ModeField& f,
                                     const SpectralNodes& nodes, unsigned threads) {
  const auto cache = PerturbedResolvent::make_support_cache(*grid, v);
  const Eigen::VectorXcd wf = grid->weights().cast<cplx>().cwiseProduct(f.values.conjugate());
  std::vector<double> out;
  out.reserve(nodes.size());
  auto body = [&](std::size_t c) {
    std::vector<double> part;
    for (std::size_t k = c * kChunk; k < std::min(nodes.size(), (c + 1) * kChunk); ++k) {
      const PerturbedResolvent rv(grid, l, nodes.lambda[k], Sign::plus, v, false, &cache);
      const cplx q = evaluate(rv, f.values, Integrand::difference).cwiseProduct(wf).sum() / (kPi * kI);
      part.push_back(q.real());
    }
    return part;
  };
  ordered_chunks(chunk_count(nodes), threads, body,
                 [&](const std::vector<double>& part) { out.insert(out.end(), part.begin(), part.end()); });
  return out;
}

ModeField stone_apply(const SpectralFunction& phi, const ModeField& data, const PotentialSpec& pot,
                      const SpectralOptions& opt) {
  const double lo = std::max(phi.lo, 0.0), hi = std::min(phi.hi, opt.lambda_max);
  require(hi > lo, ErrorCode::invalid_argument, "stone_apply: empty spectral range");
  const auto nodes = make_spectral_nodes(lo, hi, oscillation_radius(data), 0.0, opt);
  const StoneInput in{data.values, [&](double lam, cplx* out) { out[0] = phi.phi(lam) * lam; }};
  const Eigen::MatrixXcd r = stone_integrate(data.grid, data.l, pot.sample(*data.grid), {in}, 1, nodes,
                                             Integrand::difference, opt.threads);
  return data.with_values(r.col(0) / (kPi * kI));
}

std::vector<PropagatorResult> propagate_many(const std::vector<double>& times, const CauchyData& data,
                                             const PotentialSpec& pot, const SpectralOptions& opt) {
  require(!times.empty(), ErrorCode::invalid_argument, "propagate: no times requested");
  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, std::abs(t));
  const auto nodes = make_spectral_nodes(0.0, opt.lambda_max, oscillation_radius(data.f) + t_max, t_max, opt);
  const std::size_t nt = times.size();
  const StoneInput fin{data.f.values, [&](double lam, cplx* out) {
                         for (std::size_t k = 0; k < nt; ++k) {
                           out[2 * k] = std::cos(lam * times[k]) * lam;
                           out[2 * k + 1] = -lam * std::sin(lam * times[k]) * lam;
                         }
                       }};
  const StoneInput gin{data.g.values, [&](double lam, cplx* out) {
                         for (std::size_t k = 0; k < nt; ++k) {
                           out[2 * k] = std::sin(lam * times[k]);
                           out[2 * k + 1] = std::cos(lam * times[k]) * lam;
                         }
                       }};
  std::vector<StoneInput> inputs;
  if (!data.f.values.isZero(0.0)) inputs.push_back(fin);
  if (!data.g.values.isZero(0.0)) inputs.push_back(gin);
  const Eigen::MatrixXcd r = stone_integrate(data.grid(), data.l(), pot.sample(*data.grid()), inputs, 2 * nt, nodes,
                                             Integrand::difference, opt.threads) /
                             (kPi * kI);
  std::vector<PropagatorResult> out;
  for (std::size_t k = 0; k < nt; ++k)
    out.push_back({times[k], data.f.with_values(r.col(static_cast<Eigen::Index>(2 * k))),
                   data.f.with_values(r.col(static_cast<Eigen::Index>(2 * k + 1)))});
  return out;
}

PropagatorResult propagate(double t, const CauchyData& data, const PotentialSpec& pot, const SpectralOptions& opt) {
  return propagate_many({t}, data, pot, opt).front();
}

std::vector<ModeField> dyadic_blocks(int j_lo, int j_hi, const ModeField& f, const PotentialSpec& pot,
                                     const SpectralOptions& opt) {
  require(j_hi >= j_lo, ErrorCode::invalid_argument, "dyadic_blocks: empty j range");
  const auto nb = static_cast<std::size_t>(j_hi - j_lo + 1);
  const double lo = lp_window(j_lo).lo(), hi = std::min(lp_window(j_hi).hi(), opt.lambda_max);
  if (hi <= lo) return std::vector<ModeField>(nb, ModeField::zero(f.grid, f.l));
  const auto nodes = make_spectral_nodes(lo, hi, oscillation_radius(f), 0.0, opt);
  const StoneInput in{f.values, [&](double lam, cplx* out) {
                        for (std::size_t k = 0; k < nb; ++k)
                          out[k] = lp_window(j_lo + static_cast<int>(k), opt.window_shape)(lam) * lam;
                      }};
  const Eigen::MatrixXcd r =
      stone_integrate(f.grid, f.l, pot.sample(*f.grid), {in}, nb, nodes, Integrand::difference, opt.threads) /
      (kPi * kI);
  std::vector<ModeField> out;
  for (std::size_t k = 0; k < nb; ++k) out.push_back(f.with_values(r.col(static_cast<Eigen::Index>(k))));
  return out;
}

ModeField dyadic_block_apply(int j, const ModeField& f, const PotentialSpec& pot, const SpectralOptions& opt) {
  return dyadic_blocks(j, j, f, pot, opt).front();
}

std::vector<ModeField> dispersive_block(int j, const std::vector<double>& times, const ModeField& g,
                                        const PotentialSpec& pot, const SpectralOptions& opt) {
  require(!times.empty(), ErrorCode::invalid_argument, "dispersive_block: no times requested");
  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, std::abs(t));
  const auto w = lp_window(j, opt.window_shape);
  const auto nodes = make_spectral_nodes(w.lo(), w.hi(), oscillation_radius(g) + t_max, t_max, opt);
  const StoneInput in{g.values, [&](double lam, cplx* out) {
                        const double phi = w(lam);
                        for (std::size_t k = 0; k < times.size(); ++k) out[k] = phi * std::exp(kI * (lam * times[k]));
                      }};
  const Eigen::MatrixXcd r = stone_integrate(g.grid, g.l, pot.sample(*g.grid), {in}, times.size(), nodes,
                                             Integrand::difference, opt.threads) /
                             (kPi * kI);
  std::vector<ModeField> out;
  for (std::size_t k = 0; k < times.size(); ++k) out.push_back(g.with_values(r.col(static_cast<Eigen::Index>(k))));
  return out;
}

std::vector<ModeField> dispersive_block_by_parts(int j, const std::vector<double>& times, const ModeField& g,
                                                 const PotentialSpec& pot, const SpectralOptions& opt) {
  require(!times.empty(), ErrorCode::invalid_argument, "dispersive_block_by_parts: no times requested");
  double t_max = 0.0;
  for (double t : times) {
    require(t != 0.0, ErrorCode::invalid_argument, "dispersive_block_by_parts: t must be nonzero");
    t_max = std::max(t_max, std::abs(t));
  }
  const auto w = lp_window(j, opt.window_shape);
  const auto nodes = make_spectral_nodes(w.lo(), w.hi(), oscillation_radius(g) + t_max, t_max, opt);
  const Eigen::VectorXd v = pot.sample(*g.grid);
  const StoneInput with_window{g.values, [&](double lam, cplx* out) {
                                 const double phi = w(lam);
                                 for (std::size_t k = 0; k < times.size(); ++k)
                                   out[k] = phi * std::exp(kI * (lam * times[k]));
                               }};
  const StoneInput with_slope{g.values, [&](double lam, cplx* out) {
                                const double dphi = w.derivative(lam);
                                for (std::size_t k = 0; k < times.size(); ++k)
                                  out[k] = dphi * std::exp(kI * (lam * times[k]));
                              }};
  const Eigen::MatrixXcd i1 =
      stone_integrate(g.grid, g.l, v, {with_window}, times.size(), nodes, Integrand::derivative, opt.threads);
  const Eigen::MatrixXcd i2 =
      stone_integrate(g.grid, g.l, v, {with_slope}, times.size(), nodes, Integrand::difference, opt.threads);
  std::vector<ModeField> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out.push_back(g.with_values((i1.col(col) + i2.col(col)) / (kPi * times[k])));
  }
  return out;
}

namespace {
Eigen::VectorXd generator_potential(const ModeField& f, Generator gen, const PotentialSpec& pot) {
  if (gen == Generator::free) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.grid->size()));
  return pot.sample(*f.grid);
}

// ||phi_j(sqrt G) f||_p for j = j_lo..j_hi
std::vector<double> block_norms(const ModeField& f, int j_lo, int j_hi, double p, Generator gen,
                                const PotentialSpec& pot, const SpectralOptions& opt) {
  std::vector<double> out;
  if (p == 2.0) {
    const double rd = support_radius(f);
    const double hi = std::min(lp_window(j_hi).hi(), opt.lambda_max);
    if (hi <= lp_window(j_lo).lo()) return std::vector<double>(static_cast<std::size_t>(j_hi - j_lo + 1), 0.0);
    const auto nodes = make_spectral_nodes(lp_window(j_lo).lo(), hi, 2.0 * rd, 0.0, opt);
    const auto dens = spectral_density(f.grid, f.l, generator_potential(f, gen, pot), f, nodes, opt.threads);
    for (int j = j_lo; j <= j_hi; ++j) {
      const auto w = lp_window(j, opt.window_shape);
      double s = 0.0;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double phi = w(nodes.lambda[k]);
        s += nodes.weight[k] * phi * phi * dens[k] * nodes.lambda[k];
      }
      out.push_back(std::sqrt(std::max(s, 0.0)));
    }
    return out;
  }
  require(f.l == 0, ErrorCode::invalid_argument, "besov_norm: p != 2 needs a radial (l = 0) field");
  const PotentialSpec& used = gen == Generator::free ? PotentialSpec::zero() : pot;
  const auto blocks = dyadic_blocks(j_lo, j_hi, f, used, opt);
  for (const auto& b : blocks) out.push_back(std::isinf(p) ? sup_norm(b) : lp_norm(b, p));
  return out;
}
}  // namespace

BesovResult besov_norm(const ModeField& f, double s, double p, double q, Generator gen, const PotentialSpec& pot,
                       const SpectralOptions& opt) {
  auto allowed = [](double x) { return x == 1.0 || x == 2.0 || std::isinf(x); };
  require(allowed(p) && allowed(q), ErrorCode::invalid_argument, "besov_norm: p and q must be 1, 2 or inf");
  require(opt.j_max >= opt.j_min, ErrorCode::invalid_argument, "besov_norm: empty j range");
  // windows starting above the spectral cutoff are empty
  constexpr int kLowest = -40;
  const int kHighest = std::max(opt.j_max, static_cast<int>(std::ceil(std::log2(opt.lambda_max))));
  BesovResult res;
  res.j_lo = opt.j_min;
  res.j_hi = opt.j_max;
  res.block_norms = block_norms(f, res.j_lo, res.j_hi, p, gen, pot, opt);
  auto weighted = [&](int j, double b) { return std::pow(2.0, s * j) * b; };
  auto peak = [&] {
    double m = 0.0;
    for (int j = res.j_lo; j <= res.j_hi; ++j) m = std::max(m, weighted(j, res.block_norms[j - res.j_lo]));
    return m;
  };
  // extend in steps of two until the end blocks fall below tolerance
  while (res.j_hi < kHighest && weighted(res.j_hi, res.block_norms.back()) > opt.block_tolerance * peak()) {
    const auto more = block_norms(f, res.j_hi + 1, res.j_hi + 2, p, gen, pot, opt);
    res.block_norms.insert(res.block_norms.end(), more.begin(), more.end());
    res.j_hi += 2;
  }
  while (res.j_lo > kLowest && weighted(res.j_lo, res.block_norms.front()) > opt.block_tolerance * peak()) {
    const auto more = block_norms(f, res.j_lo - 2, res.j_lo - 1, p, gen, pot, opt);
    res.block_norms.insert(res.block_norms.begin(), more.begin(), more.end());
    res.j_lo -= 2;
  }
  double acc = 0.0;
  for (int j = res.j_lo; j <= res.j_hi; ++j) {
    const double x = weighted(j, res.block_norms[j - res.j_lo]);
    if (std::isinf(q))
      acc = std::max(acc, x);
    else
      acc += std::pow(x, q);
  }
  res.norm = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  return res;
}

double sobolev_norm(const ModeField& f, double s, Generator gen, const PotentialSpec& pot,
                    const SpectralOptions& opt) {
  const auto nodes = make_spectral_nodes(0.0, opt.lambda_max, 2.0 * support_radius(f), 0.0, opt);
  const auto dens = spectral_density(f.grid, f.l, generator_potential(f, gen, pot), f, nodes, opt.threads);
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    acc += nodes.weight[k] * std::pow(nodes.lambda[k], 2.0 * s + 1.0) * dens[k];
  return std::sqrt(std::max(acc, 0.0));
}

EquivalenceRatio besov_equivalence_ratio(const std::vector<ModeField>& fs, double s, double p, double q,
                                         const PotentialSpec& pot, const SpectralOptions& opt) {
  require(!fs.empty(), ErrorCode::invalid_argument, "besov_equivalence_ratio: empty test set");
  const double window = std::min({3.0 / p, 2.0, 3.0 * (1.0 - 1.0 / p)});
  if (!(std::abs(s) < window)) {
    std::ostringstream os;
    os << "besov_equivalence_ratio: s=" << s << " outside the equivalence window |s| < " << window;
    fail(ErrorCode::invalid_argument, os.str());
  }
  EquivalenceRatio out;
  for (const auto& f : fs) {
    const double a = besov_norm(f, s, p, q, Generator::perturbed, pot, opt).norm;
    const double b = besov_norm(f, s, p, q, Generator::free, pot, opt).norm;
    out.ratios.push_back(a / b);
  }
  out.min_ratio = *std::min_element(out.ratios.begin(), out.ratios.end());
  out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
  return out;
}

}  // namespace decaylab
