#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace limterm {

struct CaseResult {
  int criterion = 0;
  std::string suite;
  std::string name;
  std::string alpha;
  std::string instance;
  bool pass = true;
  std::size_t checks = 0;
  std::string witness;

  std::string key() const { return suite + "/" + name; }
};

/// The property cases behind one acceptance criterion (1..9), ordered by key.
std::vector<CaseResult> run_criterion(int criterion, std::uint64_t seed);

/// `all`, `transfinite`, `diagrams` or `ab5`.
std::vector<CaseResult> run_suite(const std::string& name, std::uint64_t seed);

std::vector<std::string> suite_names();
std::vector<int> suite_criteria(const std::string& name);

/// One line per case: `PASS transfinite/limit-terms/w alpha=w instance=... checks=N`.
std::string format_cases(const std::vector<CaseResult>& cases);

/// {"seed":..., "suite":..., "pass":..., "cases":[{case, alpha, instance, verdict, witness, checks}...]}
std::string cases_to_json(const std::string& suite, std::uint64_t seed, const std::vector<CaseResult>& cases);

} // namespace limterm
