#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "decaylab/suite.hpp"

namespace decaylab {

namespace {

using nlohmann::ordered_json;

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string num(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

ordered_json jnum(double x) { return std::isnan(x) ? ordered_json(nullptr) : ordered_json(x); }
double from_jnum(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::io_error, "write failed for '" + path + "'");
}

}  // namespace

bool ReportRow::operator==(const ReportRow& o) const {
  return experiment_id == o.experiment_id && theorem_ref == o.theorem_ref && same(t_or_lambda, o.t_or_lambda) &&
         same(value, o.value) && same(bound, o.bound) && same(ratio, o.ratio) && same(slope, o.slope) &&
         same(slope_ci, o.slope_ci) && pass == o.pass;
}

std::string to_csv(const ReportBundle& b) {
  std::string out = "experiment_id,theorem_ref,t_or_lambda,value,bound,ratio,slope,slope_ci,pass\n";
  for (const auto& e : b.experiments)
    for (const auto& r : e.rows)
      out += csv_field(r.experiment_id) + "," + csv_field(r.theorem_ref) + "," + num(r.t_or_lambda) + "," +
             num(r.value) + "," + num(r.bound) + "," + num(r.ratio) + "," + num(r.slope) + "," + num(r.slope_ci) +
             "," + (r.pass ? "true" : "false") + "\n";
  return out;
}

std::string to_json(const ReportBundle& b) {
  ordered_json j;
  j["version"] = b.version;
  j["plan"] = b.plan_summary;
  j["all_passed"] = b.all_passed();
  j["experiments"] = ordered_json::array();
  for (const auto& e : b.experiments) {
    ordered_json je;
    je["id"] = e.id;
    je["title"] = e.title;
    je["theorem_ref"] = e.theorem_ref;
    je["passed"] = e.passed;
    je["error"] = e.error;
    je["summary"] = e.summary;
    je["rows"] = ordered_json::array();
    for (const auto& r : e.rows)
      je["rows"].push_back({{"experiment_id", r.experiment_id},
                            {"theorem_ref", r.theorem_ref},
                            {"t_or_lambda", jnum(r.t_or_lambda)},
                            {"value", jnum(r.value)},
                            {"bound", jnum(r.bound)},
                            {"ratio", jnum(r.ratio)},
                            {"slope", jnum(r.slope)},
                            {"slope_ci", jnum(r.slope_ci)},
                            {"pass", r.pass}});
    j["experiments"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

ReportBundle bundle_from_json(const std::string& text) {
  ReportBundle b;
  try {
    const auto j = ordered_json::parse(text);
    b.version = j.at("version").get<std::string>();
    b.plan_summary = j.at("plan").get<std::string>();
    for (const auto& je : j.at("experiments")) {
      ExperimentReport e;
      e.id = je.at("id").get<std::string>();
      e.title = je.at("title").get<std::string>();
      e.theorem_ref = je.at("theorem_ref").get<std::string>();
      e.passed = je.at("passed").get<bool>();
      e.error = je.at("error").get<std::string>();
      e.summary = je.at("summary").get<std::string>();
      for (const auto& jr : je.at("rows"))
        e.rows.push_back({jr.at("experiment_id").get<std::string>(), jr.at("theorem_ref").get<std::string>(),
                          from_jnum(jr.at("t_or_lambda")), from_jnum(jr.at("value")), from_jnum(jr.at("bound")),
                          from_jnum(jr.at("ratio")), from_jnum(jr.at("slope")), from_jnum(jr.at("slope_ci")),
                          jr.at("pass").get<bool>()});
      b.experiments.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("report json: ") + e.what());
  }
  return b;
}

void emit_csv(const ReportBundle& b, const std::string& path) { write_file(path, to_csv(b)); }
void emit_json(const ReportBundle& b, const std::string& path) { write_file(path, to_json(b)); }

}  // namespace decaylab
