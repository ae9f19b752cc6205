#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kdvlab/config.hpp"

namespace kdv {

// One named check of the verify suite.  `residual` is the measured number
// compared against `tolerance`; description says what is being computed,
// in terms of the objects involved.
struct CheckResult {
  std::string name;
  std::string description;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  int n_pass = 0, n_fail = 0, n_skip = 0;
  bool all_pass() const { return n_fail == 0; }
};

struct CheckSpec {
  std::string name;
  std::string description;
  std::function<CheckResult(const Config&, std::uint64_t seed)> run;
};

// Registry of every invariant the modules declare; the harness test asserts
// this name set matches the documented list exactly.
const std::vector<CheckSpec>& check_registry();

// Runs all checks (or the `only` subset) with one seeded generator;
// deterministic for a fixed (config, seed).
VerifyReport run_verify(const Config& cfg, std::uint64_t seed,
                        const std::vector<std::string>& only = {});

void write_report_csv(const std::string& path, const VerifyReport& report,
                      const Config& cfg, std::uint64_t seed);

}  // namespace kdv
