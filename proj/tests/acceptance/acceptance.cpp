// One line per acceptance criterion for the shipped default plan.

#include <cstdio>
#include <string>

#include "decaylab/suite.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : DECAYLAB_DEFAULT_CONFIG;
  decaylab::ExperimentPlan plan;
  try {
    plan = decaylab::load_config(path);
  } catch (const decaylab::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  const auto bundle = decaylab::run_suite(plan);
  int failed = 0;
  for (const auto& e : bundle.experiments) {
    std::printf("%-4s %s  %s: %s\n", e.id.c_str(), e.passed ? "PASS" : "FAIL", e.title.c_str(), e.summary.c_str());
    failed += e.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(bundle.experiments.size()) - failed,
              bundle.experiments.size());
  return failed == 0 ? 0 : 1;
}
