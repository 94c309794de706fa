#include "limterm/suites.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace limterm;

namespace {

constexpr std::uint64_t kSeed = 1;

const char* const kTitles[] = {
    "",
    "lim satisfies (L1) and (L2) on the battery for every tested alpha",
    "sums computed through limits equal direct sums on finite support",
    "lim over a successor length returns the last entry",
    "restricted sums agree with direct sums below alpha",
    "the sum term is a summation term, exhaustively and semantically",
    "finitary limit terms are refuted at limits and exist at successors",
    "inverse limits of levelwise surjections are surjective; retraction is a section",
    "eta, diagonal and limit-term verdicts agree across theories",
    "sums of constant nonzero families over w diverge",
};

struct Invocation {
  std::string name;
  std::string args;
  int exit_code;
};

const std::vector<Invocation>& invocations() {
  static const std::vector<Invocation> list{
      {"01-ordinal-add", "ordinal add w+3 w", 0},
      {"02-term-eval", "term eval '(sum w basis)' --module Z/4 --asg '[0,2)->0; [2,3)->1; [3,5)->0; [5,6)->2; [6,w)->0'",
       0},
      {"03-limterm-eval", "limterm eval --alpha w --module Z/4 --seq '[0,w)->1'", 0},
      {"04-limterm-refute", "limterm refute --mod 2 --alpha w --candidate '(+ x0 x3)'", 0},
      {"05-sumterm-from-lim", "sumterm from-lim --module 'Z/2 x Z/3' --seq '[0,4)->(0,0); [4,5)->(1,2); [5,w)->(0,0); "
                              "[w,w+1)->(1,1)'",
       0},
      {"06-check-l1l2", "check l1l2 --alpha w^2 --seed 7", 0},
      {"07-check-l1l2-tampered", "check l1l2 --alpha w --evaluator first --seed 3", 1},
      {"08-diagram-limit", "--json diagram limit {golden}/doubling.json", 0},
      {"09-suite-ab5", "--json suite run ab5 --seed 1", 0},
      {"10-ab5-check", "ab5 check --theory inf-add --mod 2 --set w --seed 5", 0},
  };
  return list;
}

struct Run {
  std::string output;
  int code = -1;
};

Run run_cli(const std::string& args) {
  std::string cmd = args;
  const std::string placeholder = "{golden}";
  for (auto pos = cmd.find(placeholder); pos != std::string::npos; pos = cmd.find(placeholder)) {
    cmd.replace(pos, placeholder.size(), LIMTERM_GOLDEN_DIR);
  }
  cmd = std::string("'") + LIMTERM_CLI + "' " + cmd + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden_path(const Invocation& inv) { return std::string(LIMTERM_GOLDEN_DIR) + "/" + inv.name + ".txt"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool cli_determinism(bool update, std::string& detail) {
  std::size_t ok = 0;
  for (const auto& inv : invocations()) {
    const auto first = run_cli(inv.args);
    const auto second = run_cli(inv.args);
    if (update) {
      std::ofstream(golden_path(inv), std::ios::binary) << first.output;
    }
    const auto golden = slurp(golden_path(inv));
    std::string why;
    if (first.output != second.output) why = "two runs differ";
    else if (first.code != inv.exit_code) why = "exit " + std::to_string(first.code) + ", expected " + std::to_string(inv.exit_code);
    else if (first.output != golden) why = "differs from " + golden_path(inv);
    if (why.empty()) {
      ++ok;
    } else if (detail.empty()) {
      detail = inv.name + ": " + why;
    }
  }
  const bool pass = ok == invocations().size();
  if (pass) detail = std::to_string(ok) + " invocations byte-identical across runs and to golden files";
  return pass;
}

} // namespace

int main(int argc, char** argv) {
  const bool update = argc > 1 && std::string(argv[1]) == "--update-golden";
  int failures = 0;
  for (int k = 1; k <= 9; ++k) {
    const auto cases = run_criterion(k, kSeed);
    std::size_t checks = 0;
    const CaseResult* bad = nullptr;
    for (const auto& c : cases) {
      checks += c.checks;
      if (!c.pass && bad == nullptr) bad = &c;
    }
    const bool pass = bad == nullptr && !cases.empty();
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << k << ": " << kTitles[k] << " (" << cases.size()
              << " cases, " << checks << " checks)";
    if (bad != nullptr) std::cout << "  first failure " << bad->key() << ": " << bad->witness;
    std::cout << "\n" << std::flush;
  }
  std::string detail;
  const bool pass = cli_determinism(update, detail);
  failures += pass ? 0 : 1;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion 10: CLI reports are deterministic (" << detail << ")\n";
  return failures == 0 ? 0 : 1;
}
