#include "limterm/ab5.hpp"
#include "limterm/diagrams.hpp"
#include "limterm/error.hpp"
#include "limterm/suites.hpp"
#include "limterm/transfinite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace limterm;
using Json = nlohmann::ordered_json;

namespace {

struct Output {
  std::string text;
  Json json = Json::object();
  int code = 0;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

FiniteModule finite_module(const std::string& text) {
  const auto inst = parse_instance(text);
  if (const auto* m = std::get_if<FiniteModule>(&inst)) {
    return *m;
  }
  fail(ErrorKind::InfiniteCarrier, "expected a finite module, got " + text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::Parse, "cannot read " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void expect_length(const PwcSeq<Element>& s, const Ordinal& alpha) {
  if (s.length() != alpha) {
    fail(ErrorKind::LengthMismatch, "sequence has length " + s.length().to_string() + ", expected " + alpha.to_string());
  }
}

// ordinal ------------------------------------------------------------------

Output ordinal_binary(const std::string& op, const std::string& a_text, const std::string& b_text) {
  const auto a = Ordinal::parse(a_text);
  const auto b = Ordinal::parse(b_text);
  Output out;
  out.json["op"] = op;
  if (op == "add") {
    out.text = (a + b).to_string();
  } else if (op == "compare") {
    const auto c = a <=> b;
    out.text = c < 0 ? "LT" : c > 0 ? "GT" : "EQ";
  } else if (op == "sub") {
    out.text = left_subtract(a, b).to_string();
  } else {
    const auto n = interval_cardinality(a, b);
    out.text = n ? std::to_string(*n) : "infinite";
  }
  out.json["result"] = out.text;
  out.text += "\n";
  return out;
}

Output ordinal_classify(const std::string& text) {
  const auto c = classify(Ordinal::parse(text));
  Output out;
  switch (c.kind) {
  case OrdinalKind::Zero:
    out.text = "Zero";
    break;
  case OrdinalKind::Successor:
    out.text = "Successor(" + c.predecessor->to_string() + ")";
    out.json["predecessor"] = c.predecessor->to_string();
    break;
  case OrdinalKind::Limit:
    out.text = "Limit";
    break;
  }
  out.json = Json{{"op", "classify"}, {"result", out.text}};
  out.text += "\n";
  return out;
}

// term ---------------------------------------------------------------------

Family parse_substitution(const std::string& text) {
  return parse_pwc<Term>(text, [](std::string_view v) { return Term::parse(v); });
}

Output term_command(const std::string& op, const std::string& text, const std::string& sigma,
                    const std::string& module, const std::string& asg, const std::string& theory) {
  const auto t = Term::parse(text);
  Output out;
  out.json["op"] = op;
  if (op == "parse") {
    out.text = t.to_string();
  } else if (op == "bound") {
    out.text = variable_bound(t).to_string();
  } else if (op == "collapse") {
    out.text = collapse_to_one(t).to_string();
  } else if (op == "subst") {
    out.text = substitute(t, parse_substitution(sigma)).to_string();
  } else {
    const auto inst = parse_instance(module);
    if (const auto* free = std::get_if<FreeModule>(&inst)) {
      out.text = eval(t, *free, parse_substitution(asg)).to_string();
    } else {
      const auto& m = std::get<FiniteModule>(inst);
      std::optional<Theory> th;
      if (!theory.empty()) th = Theory::parse(theory);
      out.text = m.format_element(eval(t, m, parse_assignment(asg, m), th));
    }
  }
  out.json["result"] = out.text;
  out.text += "\n";
  return out;
}

// limterm / sumterm --------------------------------------------------------

Output limterm_eval(const std::string& alpha_text, const std::string& module, const std::string& seq, bool telescoped) {
  const auto alpha = Ordinal::parse(alpha_text);
  if (alpha.is_zero()) {
    fail(ErrorKind::InvalidAlpha, "limit terms need alpha >= 1");
  }
  const auto m = finite_module(module);
  const auto s = parse_assignment(seq, m);
  expect_length(s, alpha);
  const auto value = telescoped ? lim_eval_telescoped(m, s) : lim_eval(m, s);
  Output out;
  out.text = m.format_element(value) + "\n";
  out.json = Json{{"alpha", alpha.to_string()}, {"instance", m.to_string()}, {"result", m.format_element(value)}};
  return out;
}

Output limterm_build(const std::string& alpha_text) {
  const auto t = build_lim_term(Ordinal::parse(alpha_text));
  Output out;
  out.text = t.to_string() + "\n";
  out.json = Json{{"alpha", alpha_text}, {"term", t.to_string()}};
  return out;
}

Output limterm_refute(std::uint64_t n, const std::string& alpha_text, const std::string& candidate) {
  const auto alpha = Ordinal::parse(alpha_text);
  const auto verdict = refute_limit_term_finitary(n, alpha);
  Output out;
  out.json["theory"] = "add mod " + std::to_string(n);
  out.json["alpha"] = alpha.to_string();
  if (const auto* e = std::get_if<LimitTermExists>(&verdict)) {
    out.text = "Exists " + e->term.to_string() + "\n";
    out.json["verdict"] = "exists";
    out.json["term"] = e->term.to_string();
    return out;
  }
  const auto& cert = std::get<RefutationCertificate>(verdict);
  out.text = "Refuted: no term of add mod " + std::to_string(n) + " satisfies (L1) and (L2) at " + alpha.to_string() + "\n";
  out.json["verdict"] = "refuted";
  if (!candidate.empty()) {
    const auto inst = cert.instantiate(Term::parse(candidate));
    const auto m = FiniteModule::cyclic(n);
    out.text += "candidate: " + candidate + "\n";
    out.text += "bound: " + inst.bound.to_string() + "\n";
    out.text += "constant 1 -> " + m.format_element(inst.out_constant) + (inst.violates_l2 ? "  (violates L2)" : "") + "\n";
    out.text += format_assignment(inst.zero_below_bound, m) + " -> " + m.format_element(inst.out_zero_below) +
                (inst.violates_l1 ? "  (violates L1)" : "") + "\n";
    out.json["candidate"] = candidate;
    out.json["bound"] = inst.bound.to_string();
    out.json["violates_l1"] = inst.violates_l1;
    out.json["violates_l2"] = inst.violates_l2;
  }
  return out;
}

Output sumterm_command(const std::string& op, const std::string& module, const std::string& seq,
                       const std::string& alpha_text, const std::string& beta_text) {
  const auto m = finite_module(module);
  const auto s = parse_assignment(seq, m);
  Element value;
  if (op == "eval") {
    value = infinitary_sum(m, s);
  } else if (op == "from-lim") {
    value = sum_eval_from_lim(m, s);
  } else {
    const auto alpha = Ordinal::parse(alpha_text);
    const auto beta = Ordinal::parse(beta_text);
    value = restrict_sum(alpha, beta)(m, s);
  }
  Output out;
  out.text = m.format_element(value) + "\n";
  out.json = Json{{"op", op}, {"instance", m.to_string()}, {"result", m.format_element(value)}};
  return out;
}

// check --------------------------------------------------------------------

Evaluator named_evaluator(const std::string& name, const std::string& term) {
  if (!term.empty()) return term_evaluator(Term::parse(term));
  if (name == "lim") return lim_evaluator();
  if (name == "sum") return sum_evaluator();
  if (name == "first") {
    return [](const FiniteModule& m, const PwcSeq<Element>& s) {
      return s.length().is_zero() ? m.zero_element() : s.value_at(Ordinal{});
    };
  }
  if (name == "zero") {
    return [](const FiniteModule& m, const PwcSeq<Element>&) { return m.zero_element(); };
  }
  if (name == "double") {
    return [](const FiniteModule& m, const PwcSeq<Element>& s) { return m.scale(2, infinitary_sum(m, s)); };
  }
  fail(ErrorKind::Parse, "unknown evaluator '" + name + "' (expected lim, sum, first, zero or double)");
}

Output check_l1l2(const std::string& alpha_text, std::uint64_t seed, std::size_t trials, const std::string& evaluator,
                  const std::string& term, bool exhaustive) {
  const auto alpha = Ordinal::parse(alpha_text);
  if (alpha.is_zero()) {
    fail(ErrorKind::InvalidAlpha, "limit terms need alpha >= 1");
  }
  const auto f = named_evaluator(evaluator, term);
  const auto battery = standard_battery();
  Rng rng(seed);
  L1Options options;
  options.trials = trials;
  options.exhaustive = exhaustive;
  const auto report = check_limit_term(f, std::nullopt, alpha, battery, options, rng);
  Output out;
  std::string instances;
  for (const auto& i : report.instances_tested) instances += (instances.empty() ? "" : ", ") + i;
  const std::string name = term.empty() ? evaluator : term;
  std::ostringstream text;
  text << "seed: " << seed << "\n"
       << "alpha: " << alpha.to_string() << "\n"
       << "evaluator: " << name << "\n"
       << "instances: " << instances << "\n"
       << "trials: " << report.trials << "\n"
       << "(L1) " << (report.l1.pass ? "PASS" : "FAIL") << "  comparisons=" << report.l1.comparisons << "\n";
  if (report.l1.witness) text << "     " << describe(*report.l1.witness) << "\n";
  text << "(L2) " << (report.l2.pass ? "PASS" : "FAIL") << "  comparisons=" << report.l2.comparisons << "\n";
  if (report.l2.witness) text << "     " << describe(*report.l2.witness) << "\n";
  text << (report.pass() ? "PASS" : "FAIL") << "\n";
  out.text = text.str();
  out.json = Json{{"seed", seed},
                  {"case", "l1l2"},
                  {"alpha", alpha.to_string()},
                  {"instance", instances},
                  {"evaluator", name},
                  {"trials", report.trials},
                  {"verdict", report.pass() ? "pass" : "fail"},
                  {"witness", report.l1.witness   ? describe(*report.l1.witness)
                              : report.l2.witness ? describe(*report.l2.witness)
                                                  : ""}};
  out.code = report.pass() ? 0 : 1;
  return out;
}

Output check_summation(const std::string& set_text, std::uint64_t seed, std::size_t trials, const std::string& evaluator,
                       const std::string& term) {
  const auto x = Ordinal::parse(set_text);
  const auto f = named_evaluator(evaluator, term);
  Rng rng(seed);
  const auto result = summation_term_check(f, x, standard_battery(), trials, rng);
  Output out;
  const std::string name = term.empty() ? evaluator : term;
  out.text = "seed: " + std::to_string(seed) + "\nset: " + x.to_string() + "\nevaluator: " + name +
             "\ntrials: " + std::to_string(result.trials) + "\n" + (result.pass ? "PASS" : "FAIL") + "\n";
  if (!result.pass) out.text += "     " + result.witness + "\n";
  out.json = Json{{"seed", seed},      {"case", "summation"},   {"alpha", x.to_string()},
                  {"instance", "battery"}, {"evaluator", name}, {"trials", result.trials},
                  {"verdict", result.pass ? "pass" : "fail"}, {"witness", result.witness}};
  out.code = result.pass ? 0 : 1;
  return out;
}

// diagram ------------------------------------------------------------------

Json limit_json(const LimitObject& lim) {
  return Json{{"module", lim.module.to_string()}, {"size", lim.module.size()}, {"depth", lim.depth}};
}

Output diagram_limit(const std::string& path, std::size_t depth) {
  const auto sys = parse_system_json(read_file(path));
  const auto lim = limit_object(sys, depth);
  Output out;
  out.text = "index: " + sys.index().to_string() + "\nlimit: " + lim.module.to_string() +
             "\nstabilization depth: " + std::to_string(lim.depth) + "\n";
  out.json = limit_json(lim);
  out.json["index"] = sys.index().to_string();
  return out;
}

Output diagram_surject(const std::string& path, std::size_t depth) {
  const auto f = parse_morphism_json(read_file(path));
  const auto r = check_inverse_limit_surjectivity(f, depth);
  Output out;
  out.text = "source limit: " + std::to_string(r.source_limit_size) + " elements, depth " +
             std::to_string(r.source_depth) + "\ntarget limit: " + std::to_string(r.target_limit_size) +
             " elements, depth " + std::to_string(r.target_depth) + "\n" + (r.pass ? "PASS" : "FAIL") + "\n";
  out.json = Json{{"case", "surjectivity"},
                  {"verdict", r.pass ? "pass" : "fail"},
                  {"source_depth", r.source_depth},
                  {"target_depth", r.target_depth},
                  {"witness", r.missed ? "missed thread" : ""}};
  out.code = r.pass ? 0 : 1;
  return out;
}

Output diagram_shriek(const std::string& module, std::size_t beta, const std::string& alpha_text) {
  const auto m = finite_module(module);
  const auto sys = beta_shriek(m, beta, Ordinal::parse(alpha_text));
  const auto lim = limit_object(sys);
  Output out;
  out.text = system_to_json(sys) + "\nlimit: " + lim.module.to_string() + "\n";
  out.json = Json{{"system", Json::parse(system_to_json(sys))}, {"limit", limit_json(lim)}};
  return out;
}

Output diagram_random(std::uint64_t seed, const std::string& path) {
  Rng rng(seed);
  const auto f = random_quotient_morphism(rng);
  const auto text = morphism_to_json(f);
  Output out;
  if (!path.empty()) {
    std::ofstream file(path);
    file << text << "\n";
    out.text = "seed: " + std::to_string(seed) + "\nwrote " + path + "\n";
  } else {
    out.text = text + "\n";
  }
  out.json = Json{{"seed", seed}, {"morphism", Json::parse(text)}};
  return out;
}

Output diagram_section(const std::string& path, std::uint64_t seed) {
  const auto sys = parse_system_json(read_file(path));
  Rng rng(seed);
  const auto theory = Theory::additive(system_exponent(sys), true);
  const auto r = lim_to_prod_section_check(sys, theory, rng);
  Output out;
  out.text = "seed: " + std::to_string(seed) + "\nthreads: " + std::to_string(r.threads_checked) +
             "\nproduct elements: " + std::to_string(r.products_checked) + "\n" + (r.pass ? "PASS" : "FAIL") + "\n";
  if (!r.pass) out.text += "     " + r.failure + "\n";
  out.json = Json{{"seed", seed}, {"case", "section"}, {"verdict", r.pass ? "pass" : "fail"}, {"witness", r.failure}};
  out.code = r.pass ? 0 : 1;
  return out;
}

// suite / ab5 --------------------------------------------------------------

Output suite_run(const std::string& name, std::uint64_t seed) {
  const auto cases = run_suite(name, seed);
  std::size_t passed = 0;
  for (const auto& c : cases) passed += c.pass ? 1 : 0;
  const bool ok = passed == cases.size();
  Output out;
  out.text = "seed: " + std::to_string(seed) + "\nsuite: " + name + "\n" + format_cases(cases) +
             "summary: " + std::to_string(cases.size()) + " cases, " + std::to_string(passed) + " passed, " +
             std::to_string(cases.size() - passed) + " failed\n" + (ok ? "PASS" : "FAIL") + "\n";
  out.json = Json::parse(cases_to_json(name, seed, cases));
  out.code = ok ? 0 : 1;
  return out;
}

Output ab5_check(std::uint64_t ring, const std::string& theory_name, std::uint64_t mod, const std::string& set_text,
                 std::uint64_t seed) {
  Theory theory = Theory::additive(1, false);
  if (ring != 0) {
    theory = Theory::additive(ring, theory_name == "inf-add");
  } else if (mod != 0) {
    if (theory_name != "add" && theory_name != "inf-add") {
      fail(ErrorKind::Parse, "unknown theory '" + theory_name + "' (expected add or inf-add)");
    }
    theory = Theory::additive(mod, theory_name == "inf-add");
  } else {
    fail(ErrorKind::Parse, "give --ring <n> or --mod <n>");
  }
  const auto x = Ordinal::parse(set_text);
  Rng rng(seed);
  const auto eta = eta_surjective_decision(theory, x, rng);
  const auto diag = diagonal_factorization(theory, x, rng);
  const auto key = key_diagram_check(theory, Ordinal::omega(), standard_battery(), rng);
  const bool agree = eta.surjective == diag.factors;
  Output out;
  out.text = "seed: " + std::to_string(seed) + "\ntheory: " + theory.to_string() + "\nset: " + x.to_string() +
             "\neta surjective: " + yes_no(eta.surjective) + "  (" + eta.certificate + ")" +
             "\ndiagonal factors: " + yes_no(diag.factors) + "  (" + diag.certificate + ")" +
             "\nlimit term at w: " + yes_no(key.exact) + "  (" + key.evidence + ")" +
             "\nconditions agree: " + yes_no(agree) + "\n";
  out.json = Json{{"seed", seed},
                  {"case", "ab5"},
                  {"alpha", x.to_string()},
                  {"instance", theory.to_string()},
                  {"eta_surjective", eta.surjective},
                  {"diagonal_factors", diag.factors},
                  {"limit_term", key.exact},
                  {"verdict", agree ? "pass" : "fail"},
                  {"witness", eta.certificate}};
  out.code = agree ? 0 : 1;
  return out;
}

bool word_in(const std::string& message, const std::string& tok) {
  for (auto pos = message.find(tok); pos != std::string::npos; pos = message.find(tok, pos + 1)) {
    const bool left = pos == 0 || message[pos - 1] == ' ' || message[pos - 1] == ':';
    const auto end = pos + tok.size();
    const bool right = end == message.size() || message[end] == ' ' || message[end] == ',';
    if (left && right) return true;
  }
  return false;
}

/// The argument an error refers to: one named in the message, else the first word
/// that is not a subcommand of the chain walked so far.
std::string locate(const CLI::App& app, const std::string& message, int argc, char** argv) {
  for (int i = argc - 1; i >= 1; --i) {
    const std::string tok = argv[i];
    if (tok.size() > 1 && word_in(message, tok)) {
      return " at argument " + std::to_string(i) + " '" + tok + "'";
    }
  }
  const CLI::App* cur = &app;
  for (int i = 1; i < argc; ++i) {
    const std::string tok = argv[i];
    if (tok.rfind("-", 0) == 0) continue;
    const CLI::App* next = cur->get_subcommand_no_throw(tok);
    if (next == nullptr) {
      return cur->get_subcommands({}).empty() ? "" : " at argument " + std::to_string(i) + " '" + tok + "'";
    }
    cur = next;
  }
  return "";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordinal-indexed limit and summation terms over Z/n-modules"};
  app.name("limterm");
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false;
  std::uint64_t seed = 0;
  app.add_flag("--json", json, "Emit a JSON report");
  app.add_option("--seed", seed, "Seed for randomized checks (echoed in the report)")->capture_default_str();

  std::function<Output()> action;
  std::string a, b, c, module, seq, alpha, beta, sigma, theory, evaluator = "lim", term_text, file, out_path;
  std::string set = "w", theory_kind = "add";
  std::size_t trials = 100, depth = 16, beta_index = 0;
  std::uint64_t ring = 0, mod = 0;
  bool telescoped = false, exhaustive = false;

  // ordinal
  auto* ordinal = app.add_subcommand("ordinal", "Ordinal arithmetic below epsilon_0");
  ordinal->require_subcommand(1);
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"add", "A + B"}, {"compare", "LT, EQ or GT"}, {"sub", "the G with A + G = B"}, {"card", "size of [A, B)"}}) {
    auto* sub = ordinal->add_subcommand(name, help);
    sub->add_option("a", a, "ordinal")->required();
    sub->add_option("b", b, "ordinal")->required();
    sub->callback([&, op = name] { action = [&, op] { return ordinal_binary(op, a, b); }; });
  }
  auto* classify_cmd = ordinal->add_subcommand("classify", "Zero, Successor(pred) or Limit");
  classify_cmd->add_option("a", a, "ordinal")->required();
  classify_cmd->callback([&] { action = [&] { return ordinal_classify(a); }; });

  // term
  auto* term = app.add_subcommand("term", "Parse, substitute and evaluate terms");
  term->require_subcommand(1);
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"parse", "print the canonical form"}, {"bound", "least variable bound"},
           {"collapse", "collapse all variables to x0"}, {"subst", "substitute --sigma"},
           {"eval", "evaluate in --module at --asg"}}) {
    auto* sub = term->add_subcommand(name, help);
    sub->add_option("term", a, "term, e.g. \"(+ x0 x1)\"")->required();
    if (name == "subst") sub->add_option("--sigma", sigma, "family of terms, e.g. \"[0,w)->x1\"")->required();
    if (name == "eval") {
      sub->add_option("--module", module, "Z/4, Z/2 x Z/4 or free(add-inf mod 2, w)")->required();
      sub->add_option("--asg", seq, "assignment, e.g. \"[0,w)->1\"")->required();
      sub->add_option("--theory", theory, "add mod n or add-inf mod n");
    }
    sub->callback([&, op = name] { action = [&, op] { return term_command(op, a, sigma, module, seq, theory); }; });
  }

  // limterm
  auto* limterm_cmd = app.add_subcommand("limterm", "Limit terms");
  limterm_cmd->require_subcommand(1);
  auto* lim_eval_cmd = limterm_cmd->add_subcommand("eval", "lim over a piecewise constant family");
  lim_eval_cmd->add_option("--alpha", alpha, "index ordinal")->required();
  lim_eval_cmd->add_option("--module", module, "finite module")->required();
  lim_eval_cmd->add_option("--seq", seq, "family, e.g. \"[0,w)->1\"")->required();
  lim_eval_cmd->add_flag("--telescoped", telescoped, "use the value of the last piece");
  lim_eval_cmd->callback([&] { action = [&] { return limterm_eval(alpha, module, seq, telescoped); }; });
  auto* lim_build = limterm_cmd->add_subcommand("build", "the limit term over alpha");
  lim_build->add_option("--alpha", alpha, "index ordinal")->required();
  lim_build->callback([&] { action = [&] { return limterm_build(alpha); }; });
  auto* lim_refute = limterm_cmd->add_subcommand("refute", "limit terms in the finitary theory add mod n");
  lim_refute->add_option("--mod", mod, "modulus n")->required();
  lim_refute->add_option("--alpha", alpha, "index ordinal")->required();
  lim_refute->add_option("--candidate", term_text, "instantiate the certificate on this term");
  lim_refute->callback([&] { action = [&] { return limterm_refute(mod, alpha, term_text); }; });

  // sumterm
  auto* sumterm = app.add_subcommand("sumterm", "Summation terms");
  sumterm->require_subcommand(1);
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"eval", "sum of a finite-support family"}, {"from-lim", "the same sum computed through limits"},
           {"restrict", "Sum over alpha restricted to beta"}}) {
    auto* sub = sumterm->add_subcommand(name, help);
    sub->add_option("--module", module, "finite module")->required();
    sub->add_option("--seq", seq, "family")->required();
    if (name == "restrict") {
      sub->add_option("--alpha", alpha, "ambient ordinal")->required();
      sub->add_option("--beta", beta, "restricted ordinal")->required();
    }
    sub->callback([&, op = name] { action = [&, op] { return sumterm_command(op, module, seq, alpha, beta); }; });
  }

  // check
  auto* check = app.add_subcommand("check", "Property checks over the standard battery");
  check->require_subcommand(1);
  auto* l1l2 = check->add_subcommand("l1l2", "(L1) and (L2) for an evaluator");
  l1l2->add_option("--alpha", alpha, "index ordinal")->required();
  l1l2->add_option("--trials", trials, "random inputs per instance")->capture_default_str();
  l1l2->add_option("--evaluator", evaluator, "lim, sum, first, zero or double")->capture_default_str();
  l1l2->add_option("--term", term_text, "check this term instead");
  l1l2->add_flag("--exhaustive", exhaustive, "also every family with at most 3 pieces");
  l1l2->callback([&] { action = [&] { return check_l1l2(alpha, seed, trials, evaluator, term_text, exhaustive); }; });
  auto* summation = check->add_subcommand("summation", "finite summation on finite-support families");
  summation->add_option("--set", set, "index set")->capture_default_str();
  summation->add_option("--trials", trials, "random families")->capture_default_str();
  summation->add_option("--evaluator", evaluator, "sum, double, lim, first or zero")->capture_default_str();
  summation->add_option("--term", term_text, "check this term instead");
  summation->callback([&] { action = [&] { return check_summation(set, seed, trials, evaluator, term_text); }; });

  // diagram
  auto* diagram = app.add_subcommand("diagram", "Inverse systems of finite modules");
  diagram->require_subcommand(1);
  auto* dlimit = diagram->add_subcommand("limit", "limit of a system file");
  dlimit->add_option("file", file, "system JSON")->required();
  dlimit->add_option("--depth", depth, "maximum stabilization depth")->capture_default_str();
  dlimit->callback([&] { action = [&] { return diagram_limit(file, depth); }; });
  auto* dsurj = diagram->add_subcommand("surject", "is the induced map on limits surjective");
  dsurj->add_option("file", file, "morphism JSON")->required();
  dsurj->add_option("--depth", depth, "maximum stabilization depth")->capture_default_str();
  dsurj->callback([&] { action = [&] { return diagram_surject(file, depth); }; });
  auto* dshriek = diagram->add_subcommand("shriek", "the system that is M up to beta and 0 above");
  dshriek->add_option("--module", module, "finite module")->required();
  dshriek->add_option("--beta", beta_index, "last nonzero level")->required();
  dshriek->add_option("--alpha", alpha, "index: a positive natural or w")->required();
  dshriek->callback([&] { action = [&] { return diagram_shriek(module, beta_index, alpha); }; });
  auto* drandom = diagram->add_subcommand("random", "a random levelwise surjective morphism");
  drandom->add_option("--out", out_path, "write the morphism here");
  drandom->callback([&] { action = [&] { return diagram_random(seed, out_path); }; });
  auto* dsection = diagram->add_subcommand("section", "the retraction of the product onto the limit");
  dsection->add_option("file", file, "system JSON")->required();
  dsection->callback([&] { action = [&] { return diagram_section(file, seed); }; });

  // suite
  auto* suite = app.add_subcommand("suite", "Acceptance suites");
  suite->require_subcommand(1);
  auto* run = suite->add_subcommand("run", "run a suite");
  run->add_option("name", c, "all, transfinite, diagrams or ab5")->required();
  run->callback([&] { action = [&] { return suite_run(c, seed); }; });

  // ab5
  auto* ab5 = app.add_subcommand("ab5", "The three equivalent conditions for a theory");
  ab5->require_subcommand(1);
  auto* ab5check = ab5->add_subcommand("check", "eta, diagonal and limit terms");
  ab5check->add_option("--ring", ring, "finitary theory add mod n");
  ab5check->add_option("--theory", theory_kind, "add or inf-add")->capture_default_str();
  ab5check->add_option("--mod", mod, "modulus for --theory");
  ab5check->add_option("--set", set, "index set: a natural or w")->capture_default_str();
  ab5check->callback([&] { action = [&] { return ab5_check(ring, theory_kind, mod, set, seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error" << locate(app, e.what(), argc, argv) << ": " << e.what() << "\n";
    std::cerr << "run with --help for the grammar\n";
    return 2;
  }

  try {
    const Output out = action();
    if (json) {
      std::cout << out.json.dump(2) << "\n";
    } else {
      std::cout << out.text;
    }
    return out.code;
  } catch (const Error& e) {
    if (json) {
      std::cout << Json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return e.kind() == ErrorKind::Parse ? 2 : 1;
  }
}
