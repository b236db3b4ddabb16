#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "decaylab/decaylab.h"

namespace {

int list_experiments() {
  for (size_t i = 0; i < dl_experiment_count(); ++i)
    std::printf("%-5s %-36s %s\n", dl_experiment_id(i), dl_experiment_theorem_ref(i), dl_experiment_title(i));
  return 0;
}

int run(const std::string& config, std::string out_dir, const std::string& format, unsigned threads) {
  dl_plan* plan = nullptr;
  if (dl_plan_load(config.c_str(), &plan) != DL_OK) {
    std::fprintf(stderr, "decaylab: %s\n", dl_last_error());
    return 2;
  }
  if (threads > 0) dl_plan_set_threads(plan, threads);
  dl_report* report = nullptr;
  const int rc = dl_run_suite(plan, &report);
  dl_plan_free(plan);
  if (rc != DL_OK) {
    std::fprintf(stderr, "decaylab: %s\n", dl_last_error());
    return 2;
  }
  for (size_t i = 0; i < dl_report_experiment_count(report); ++i)
    std::printf("%-5s %s  %s\n", dl_report_experiment_id(report, i),
                dl_report_experiment_passed(report, i) ? "PASS" : "FAIL", dl_report_experiment_summary(report, i));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto base = std::filesystem::path(out_dir);
  int io = DL_OK;
  if (format == "csv" || format == "both") io |= dl_report_write_csv(report, (base / "report.csv").c_str());
  if (format == "json" || format == "both") io |= dl_report_write_json(report, (base / "report.json").c_str());
  if (io != DL_OK) std::fprintf(stderr, "decaylab: %s\n", dl_last_error());
  const bool ok = dl_report_all_passed(report) && io == DL_OK;
  dl_report_free(report);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolvent, propagator and decay-estimate lab"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-experiments", list, "List registered experiments and exit");

  std::string config, format = "both";
  std::string out_dir = std::getenv("DECAYLAB_OUT_DIR") ? std::getenv("DECAYLAB_OUT_DIR") : ".";
  unsigned threads = 0;
  if (const char* env = std::getenv("DECAYLAB_THREADS"))
    threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  auto* run_cmd = app.add_subcommand("run", "Run the experiments of a plan");
  run_cmd->add_option("config", config, "Plan file (INI)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (env DECAYLAB_OUT_DIR)");
  run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  run_cmd->add_option("--threads", threads, "Worker threads (env DECAYLAB_THREADS)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (list) return list_experiments();
  if (run_cmd->parsed()) return run(config, out_dir, format, threads);
  std::fputs(app.help().c_str(), stdout);
  return 2;
}
