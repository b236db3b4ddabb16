#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "decaylab/suite.hpp"

namespace decaylab {

PotentialSpec PotentialConfig::make() const {
  if (kind == "zero") return PotentialSpec::zero();
  if (kind == "bump") return PotentialSpec::scaled_bump(amplitude, lo, hi, c0, c1, delta0);
  if (kind == "sign_changing") return PotentialSpec::sign_changing(amplitude, lo, hi, c0, c1, delta0);
  fail(ErrorCode::config_error, "potential.kind: expected bump, sign_changing or zero, got '" + kind + "'");
}

ExperimentPlan ExperimentPlan::defaults() {
  ExperimentPlan p;
  for (double x = 0.25; x <= 8.0 * (1 + 1e-12); x *= std::sqrt(2.0)) p.lambdas.push_back(x);
  p.lambdas.back() = 8.0;
  p.times = {2, 4, 8, 16, 32, 64};
  for (const auto& e : list_experiments()) p.experiments.push_back(e.id);
  return p;
}

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  fail(ErrorCode::config_error, "config: " + field + ": " + msg);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad(field, "expected a number, got '" + s + "'");
  }
  if (pos != s.size()) bad(field, "expected a number, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

using Setter = std::function<void(ExperimentPlan&, const std::string& field, const std::string& value)>;

Setter num(double ExperimentPlan::*m) {
  return [m](ExperimentPlan& p, const std::string& f, const std::string& v) { p.*m = to_double(f, v); };
}
Setter tol(double Tolerances::*m) {
  return [m](ExperimentPlan& p, const std::string& f, const std::string& v) { p.tol.*m = to_double(f, v); };
}
Setter pot(double PotentialConfig::*m) {
  return [m](ExperimentPlan& p, const std::string& f, const std::string& v) { p.potential.*m = to_double(f, v); };
}
Setter positive_int(const std::function<void(ExperimentPlan&, long)>& set) {
  return [set](ExperimentPlan& p, const std::string& f, const std::string& v) {
    const double x = to_double(f, v);
    if (x != std::floor(x) || x < 0) bad(f, "expected a non-negative integer, got '" + v + "'");
    set(p, static_cast<long>(x));
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.obstacle_radius", num(&ExperimentPlan::obstacle_radius)},
      {"potential.kind", [](ExperimentPlan& p, const std::string&, const std::string& v) { p.potential.kind = v; }},
      {"potential.amplitude", pot(&PotentialConfig::amplitude)},
      {"potential.lo", pot(&PotentialConfig::lo)},
      {"potential.hi", pot(&PotentialConfig::hi)},
      {"potential.c0", pot(&PotentialConfig::c0)},
      {"potential.c1", pot(&PotentialConfig::c1)},
      {"potential.delta0", pot(&PotentialConfig::delta0)},
      {"grid.points_per_unit", num(&ExperimentPlan::points_per_unit)},
      {"spectral.lambda_max",
       [](ExperimentPlan& p, const std::string& f, const std::string& v) { p.spectral.lambda_max = to_double(f, v); }},
      {"spectral.gauss_order",
       positive_int([](ExperimentPlan& p, long x) { p.spectral.gauss_order = static_cast<std::size_t>(x); })},
      {"spectral.oscillation",
       [](ExperimentPlan& p, const std::string& f, const std::string& v) { p.spectral.oscillation = to_double(f, v); }},
      {"spectral.window_shape",
       [](ExperimentPlan& p, const std::string& f, const std::string& v) { p.spectral.window_shape = to_double(f, v); }},
      {"spectral.max_nodes",
       positive_int([](ExperimentPlan& p, long x) { p.spectral.max_nodes = static_cast<std::size_t>(x); })},
      {"data.center", num(&ExperimentPlan::data_center)},
      {"data.width", num(&ExperimentPlan::data_width)},
      {"data.energy_radius", num(&ExperimentPlan::energy_radius)},
      {"lambdas.values",
       [](ExperimentPlan& p, const std::string& f, const std::string& v) {
         p.lambdas.clear();
         for (const auto& s : split(v)) p.lambdas.push_back(to_double(f, s));
       }},
      {"times.values",
       [](ExperimentPlan& p, const std::string& f, const std::string& v) {
         p.times.clear();
         for (const auto& s : split(v)) p.times.push_back(to_double(f, s));
       }},
      {"experiments.run",
       [](ExperimentPlan& p, const std::string& f, const std::string& v) {
         p.experiments.clear();
         if (trim(v) == "all") {
           for (const auto& e : list_experiments()) p.experiments.push_back(e.id);
           return;
         }
         for (const auto& s : split(v)) {
           const auto& reg = list_experiments();
           if (std::none_of(reg.begin(), reg.end(), [&](const ExperimentInfo& e) { return e.id == s; }))
             bad(f, "unknown experiment '" + s + "'");
           p.experiments.push_back(s);
         }
       }},
      {"tolerances.dispersive_slope_band", tol(&Tolerances::dispersive_slope_band)},
      {"tolerances.kirchhoff", tol(&Tolerances::kirchhoff)},
      {"tolerances.energy_slope", tol(&Tolerances::energy_slope)},
      {"tolerances.huygens", tol(&Tolerances::huygens)},
      {"tolerances.partition", tol(&Tolerances::partition)},
      {"tolerances.kernel_constant", tol(&Tolerances::kernel_constant)},
      {"tolerances.kernel_diagonal", tol(&Tolerances::kernel_diagonal)},
      {"tolerances.resonance_stability", tol(&Tolerances::resonance_stability)},
      {"tolerances.oracle", tol(&Tolerances::oracle)},
      {"tolerances.scan_ratio", tol(&Tolerances::scan_ratio)},
      {"tolerances.inverse_limit", tol(&Tolerances::inverse_limit)},
      {"tolerances.difference_slope", tol(&Tolerances::difference_slope)},
      {"tolerances.strichartz_growth", tol(&Tolerances::strichartz_growth)},
      {"tolerances.besov_band", tol(&Tolerances::besov_band)},
      {"tolerances.besov_refinement", tol(&Tolerances::besov_refinement)},
      {"run.seed", positive_int([](ExperimentPlan& p, long x) { p.seed = static_cast<unsigned>(x); })},
      {"run.threads", positive_int([](ExperimentPlan& p, long x) { p.threads = static_cast<unsigned>(x); })},
  };
  return table;
}

// j range keys take signed integers
void set_j(ExperimentPlan& p, const std::string& f, const std::string& v) {
  const double x = to_double(f, v);
  if (x != std::floor(x)) bad(f, "expected an integer, got '" + v + "'");
  (f == "spectral.j_min" ? p.spectral.j_min : p.spectral.j_max) = static_cast<int>(x);
}

void validate(const ExperimentPlan& p) {
  if (!(p.obstacle_radius > 0.0)) bad("domain.obstacle_radius", "must be positive");
  if (!(p.points_per_unit >= 4.0)) bad("grid.points_per_unit", "must be at least 4");
  if (!(p.spectral.lambda_max > 0.0)) bad("spectral.lambda_max", "must be positive");
  if (p.spectral.gauss_order < 2) bad("spectral.gauss_order", "must be at least 2");
  if (!(p.spectral.oscillation > 0.0)) bad("spectral.oscillation", "must be positive");
  if (!(p.spectral.window_shape > 0.0)) bad("spectral.window_shape", "must be positive");
  if (p.spectral.j_min > p.spectral.j_max) bad("spectral.j_min", "must not exceed j_max");
  if (!(p.data_width > 0.0)) bad("data.width", "must be positive");
  if (!(p.energy_radius > 0.0)) bad("data.energy_radius", "must be positive");
  for (double l : p.lambdas)
    if (!(l > 0.0)) bad("lambdas.values", "must be positive");
  if (!std::is_sorted(p.lambdas.begin(), p.lambdas.end())) bad("lambdas.values", "must be increasing");
  for (double t : p.times)
    if (!(t >= 1.0)) bad("times.values", "must be >= 1");
  if (!std::is_sorted(p.times.begin(), p.times.end())) bad("times.values", "must be increasing");
  if (p.potential.kind != "zero") {
    if (!(p.potential.c0 > 0.0 && p.potential.c0 < 0.25))
      bad("potential.c0", "inadmissible potential, need 0<c0<1/4 (got " + std::to_string(p.potential.c0) + ")");
    if (!(p.potential.lo < p.potential.hi)) bad("potential.lo", "must be below potential.hi");
    try {
      const auto spec = p.potential.make();
      const auto grid = RadialGrid::build(DomainSpec::whole_space(), p.potential.hi + 1.0, 400);
      const double r = spec.first_violation(*grid);
      if (r >= 0.0) bad("potential", "inadmissible potential, bound -c0 r^-delta0 <= V <= c1 r^-delta0 fails at r=" +
                                         std::to_string(r));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::config_error) throw;
      bad("potential", e.what());
    }
  }
}

}  // namespace

ExperimentPlan parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::config_error, std::string("config: parse error: ") + e.what());
  }
  ExperimentPlan plan = ExperimentPlan::defaults();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) bad(section, "keys must live inside a [section]");
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      const std::string value = trim(node.data());
      if (field == "spectral.j_min" || field == "spectral.j_max") {
        set_j(plan, field, value);
        continue;
      }
      const auto it = setters().find(field);
      if (it == setters().end()) bad(field, "unknown key");
      it->second(plan, field, value);
    }
  }
  validate(plan);
  return plan;
}

ExperimentPlan load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_error, "config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace decaylab
