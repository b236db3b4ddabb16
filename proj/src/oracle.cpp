#include "decaylab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decaylab {

namespace {
double data_radius(const ModeField& f) {
  const double mx = f.values.cwiseAbs().maxCoeff();
  if (mx == 0.0) return f.grid->r_min();
  for (Eigen::Index i = f.values.size() - 1; i >= 0; --i)
    if (std::abs(f.values[i]) > 1e-14 * mx) return f.grid->nodes()[i];
  return f.grid->r_min();
}

void require_tail_free(const ModeField& f, const char* what) {
  const auto& g = *f.grid;
  const double mx = f.values.cwiseAbs().maxCoeff();
  const double tail = f.values.tail(static_cast<Eigen::Index>(g.order())).cwiseAbs().maxCoeff();
  require(tail <= 1e-12 * std::max(mx, 1e-300) || mx == 0.0, ErrorCode::domain_error,
          std::string(what) + ": data does not vanish near R_max");
}
}  // namespace

OracleState kirchhoff_free_propagate(double t, const ModeField& f, const ModeField& g) {
  require(f.l == 0 && g.l == 0, ErrorCode::invalid_argument, "kirchhoff_free_propagate: l = 0 only");
  require(!f.grid->domain().is_ball(), ErrorCode::invalid_argument, "kirchhoff_free_propagate: whole space only");
  require_same_grid(f, g);
  require_tail_free(f, "kirchhoff_free_propagate");
  require_tail_free(g, "kirchhoff_free_propagate");
  const auto& grid = *f.grid;
  const double r0 = grid.r_min(), r1 = grid.r_max();
  const Eigen::VectorXcd df = grid.derivative(f.values);
  const Eigen::VectorXcd rg = g.values.cwiseProduct(grid.nodes().cast<cplx>());

  auto clamp_eval = [&](const Eigen::VectorXcd& vals, double s) -> cplx {
    return grid.interpolate(vals, std::clamp(s, r0, r1));
  };
  // odd extensions of s f(s), s g(s) and of d/ds (s f)
  auto F = [&](double s) -> cplx {
    const double a = std::abs(s);
    if (a >= r1) return 0.0;
    return s * clamp_eval(f.values, a);
  };
  auto dF = [&](double s) -> cplx {
    const double a = std::abs(s);
    if (a >= r1) return 0.0;
    return clamp_eval(f.values, a) + a * clamp_eval(df, a);
  };
  auto G = [&](double s) -> cplx {
    const double a = std::abs(s);
    if (a >= r1) return 0.0;
    return s * clamp_eval(g.values, a);
  };
  auto intG = [&](double lo, double hi) -> cplx {  // lo >= 0
    lo = std::max(lo, r0);
    hi = std::min(hi, r1);
    return hi > lo ? grid.integrate_dr(rg, lo, hi) : cplx(0.0);
  };

  Eigen::VectorXcd u(f.values.size()), ut(f.values.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = grid.nodes()[i];
    const cplx w = 0.5 * (F(r + t) + F(r - t)) + 0.5 * intG(std::abs(r - t), r + t);
    const cplx wt = 0.5 * (dF(r + t) - dF(r - t)) + 0.5 * (G(r + t) + G(r - t));
    u[i] = w / r;
    ut[i] = wt / r;
  }
  return {t, f.with_values(u), f.with_values(ut)};
}

TimeDomainResult time_domain_solve(const std::vector<double>& times, const ModeField& f, const ModeField& g,
                                   const PotentialSpec& pot, const TimeDomainOptions& opt) {
  require(!times.empty(), ErrorCode::invalid_argument, "time_domain_solve: no output times");
  require(opt.cfl > 0.0 && opt.cfl <= 0.9, ErrorCode::invalid_argument, "time_domain_solve: need 0 < cfl <= 0.9");
  require(opt.dr > 0.0, ErrorCode::invalid_argument, "time_domain_solve: dr must be positive");
  require_same_grid(f, g);
  require(f.l == g.l, ErrorCode::invalid_argument, "time_domain_solve: mode degree mismatch");
  require(f.values.imag().isZero(0.0) && g.values.imag().isZero(0.0), ErrorCode::invalid_argument,
          "time_domain_solve: real data only");
  double t_end = 0.0;
  for (double t : times) {
    require(t >= 0.0, ErrorCode::invalid_argument, "time_domain_solve: times must be non-negative");
    t_end = std::max(t_end, t);
  }
  const auto& grid = *f.grid;
  const int l = f.l;
  const double r0 = grid.domain().inner_radius();
  const double supp = std::max(data_radius(f), data_radius(g));
  const double r_far = supp + t_end + opt.margin;
  // finite speed: nothing reaches the far end before t_end, so w = 0 there is exact
  const std::size_t n =
      static_cast<std::size_t>(std::ceil((std::max(r_far, grid.r_max() + opt.margin) - r0) / opt.dr));
  const double dr = opt.dr;
  std::vector<double> r(n + 1), q(n + 1), w0(n + 1), w1(n + 1), wt0(n + 1);
  auto sample = [&](const ModeField& h, double x) -> double {
    if (x > grid.r_max()) return 0.0;
    return grid.interpolate(h.values, std::max(x, grid.r_min())).real();
  };
  for (std::size_t k = 0; k <= n; ++k) {
    r[k] = r0 + dr * static_cast<double>(k);
    if (k == 0 || k == n) continue;
    q[k] = l * (l + 1) / (r[k] * r[k]) + pot(r[k]);
    w0[k] = r[k] * sample(f, r[k]);
    wt0[k] = r[k] * sample(g, r[k]);
  }
  const std::size_t steps = t_end > 0 ? static_cast<std::size_t>(std::ceil(t_end / (opt.cfl * dr))) : 1;
  const double dt = t_end > 0 ? t_end / static_cast<double>(steps) : opt.cfl * dr;

  auto apply_a = [&](const std::vector<double>& w, std::vector<double>& out) {  // (-D2 + q) w
    out.assign(n + 1, 0.0);
    for (std::size_t k = 1; k < n; ++k) out[k] = (2.0 * w[k] - w[k - 1] - w[k + 1]) / (dr * dr) + q[k] * w[k];
  };
  auto energy = [&](const std::vector<double>& wa, const std::vector<double>& wb) {  // between levels a -> b
    std::vector<double> aw;
    apply_a(wb, aw);
    double e = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      const double v = (wb[k] - wa[k]) / dt;
      e += 0.5 * dr * (v * v + aw[k] * wa[k]);
    }
    return e;
  };

  std::vector<double> aw;
  apply_a(w0, aw);
  for (std::size_t k = 1; k < n; ++k) w1[k] = w0[k] + dt * wt0[k] - 0.5 * dt * dt * aw[k];

  // outputs: linear interpolation in time between consecutive levels; u_t from centered differences
  std::vector<std::size_t> order(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  TimeDomainResult res;
  res.dt = dt;
  res.steps = steps;
  res.fd_radii = r;
  res.fd_u.resize(times.size());
  std::vector<std::vector<double>> wout(times.size()), wtout(times.size());

  std::vector<double> wm = w0, wc = w1, wn(n + 1, 0.0);
  // level 0 (t = 0) velocity is the data itself
  std::vector<double> vel_prev = wt0;  // velocity at level 0
  std::size_t next = 0;
  const double e0 = energy(w0, w1);
  double drift = 0.0;
  std::vector<double> vel_cur(n + 1);
  for (std::size_t step = 1; step <= steps + 1 && next < order.size(); ++step) {
    // advance wc (level step) to wn (level step+1)
    apply_a(wc, aw);
    for (std::size_t k = 1; k < n; ++k) wn[k] = 2.0 * wc[k] - wm[k] - dt * dt * aw[k];
    for (std::size_t k = 1; k < n; ++k) vel_cur[k] = (wn[k] - wm[k]) / (2.0 * dt);
    const double e = energy(wc, wn);
    drift = std::max(drift, std::abs(e - e0) / std::max(std::abs(e0), 1e-300));
    // levels step-1 (wm, vel_prev) and step (wc, vel_cur) bracket [t_{step-1}, t_step]
    const double ta = dt * static_cast<double>(step - 1), tb = dt * static_cast<double>(step);
    while (next < order.size() && times[order[next]] <= tb + 1e-12 * dt) {
      const double s = std::clamp((times[order[next]] - ta) / dt, 0.0, 1.0);
      auto& wo = wout[order[next]];
      auto& vo = wtout[order[next]];
      wo.resize(n + 1);
      vo.resize(n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        wo[k] = (1 - s) * wm[k] + s * wc[k];
        vo[k] = (1 - s) * vel_prev[k] + s * vel_cur[k];
      }
      ++next;
    }
    vel_prev = vel_cur;
    wm.swap(wc);
    wc.swap(wn);
  }
  res.energy_drift = drift;

  // cubic interpolation from the uniform FD grid onto the data grid
  auto to_grid = [&](const std::vector<double>& w) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.r(i);
      const double pos = (x - r0) / dr;
      std::size_t k = static_cast<std::size_t>(std::clamp(std::floor(pos) - 1.0, 0.0, static_cast<double>(n - 3)));
      double val = 0.0;
      for (std::size_t a = 0; a < 4; ++a) {
        double li = 1.0;
        for (std::size_t b = 0; b < 4; ++b)
          if (b != a) li *= (pos - static_cast<double>(k + b)) / (static_cast<double>(a) - static_cast<double>(b));
        val += li * w[k + a];
      }
      out[static_cast<Eigen::Index>(i)] = val / x;
    }
    return out;
  };
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] == 0.0)
      res.states.push_back({0.0, f, g});
    else
      res.states.push_back({times[k], f.with_values(to_grid(wout[k])), f.with_values(to_grid(wtout[k]))});
    auto& fu = res.fd_u[k];
    fu.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fu[i] = r[i] > 0 ? wout[k][i] / r[i] : 0.0;
  }
  return res;
}

CrossValidation cross_validate(const ModeField& candidate, double t, const ModeField& f, const ModeField& g,
                               const PotentialSpec& pot, const TimeDomainOptions& opt) {
  require_same_grid(candidate, f);
  const auto ref = time_domain_solve({t}, f, g, pot, opt).states.front();
  const double nrm = weighted_l2_norm(ref.u);
  const double diff = weighted_l2_norm(ref.u.with_values(candidate.values - ref.u.values));
  return {t, nrm > 0 ? diff / nrm : diff, nrm};
}

}  // namespace decaylab
