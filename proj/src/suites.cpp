#include "limterm/suites.hpp"

#include "limterm/ab5.hpp"
#include "limterm/diagrams.hpp"
#include "limterm/error.hpp"
#include "limterm/transfinite.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>

namespace limterm {

namespace {

std::vector<Ordinal> test_ordinals() {
  std::vector<Ordinal> out;
  for (const char* s : {"1", "2", "5", "w", "w+1", "w+3", "w*2", "w^2", "w^2+w+1"}) out.push_back(Ordinal::parse(s));
  return out;
}

std::string battery_name(const std::vector<FiniteModule>& battery) {
  std::string out;
  for (const auto& m : battery) {
    if (!out.empty()) out += ", ";
    out += m.to_string();
  }
  return out;
}

std::uint64_t salt_of(const std::string& key) {
  // FNV-1a, so case streams depend only on the case key.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng case_rng(std::uint64_t seed, const std::string& key) { return Rng{seed}.fork(salt_of(key)); }

CaseResult make_case(int criterion, std::string suite, std::string name, std::string alpha, std::string instance) {
  CaseResult c;
  c.criterion = criterion;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.alpha = std::move(alpha);
  c.instance = std::move(instance);
  return c;
}

/// Runs `body`, turning an escaped library error into a failed case.
void guarded(CaseResult& c, const std::function<void(CaseResult&)>& body) {
  try {
    body(c);
  } catch (const Error& e) {
    c.pass = false;
    c.witness = std::string("unexpected error: ") + e.what();
  }
}

// 1 -------------------------------------------------------------------------

std::vector<CaseResult> limit_terms(std::uint64_t seed) {
  std::vector<CaseResult> out;
  const auto battery = standard_battery();
  for (const auto& alpha : test_ordinals()) {
    auto c = make_case(1, "transfinite", "limit-terms/" + alpha.to_string(), alpha.to_string(), battery_name(battery));
    guarded(c, [&](CaseResult& c) {
      auto rng = case_rng(seed, c.key());
      L1Options options;
      options.trials = 100;
      options.exhaustive = true;
      const auto report = check_limit_term(lim_evaluator(), build_lim_term(alpha), alpha, battery, options, rng);
      c.pass = report.pass();
      c.checks = report.l1.comparisons + report.l2.comparisons;
      if (report.l1.witness) c.witness = "(L1) " + describe(*report.l1.witness);
      if (report.l2.witness) c.witness = "(L2) " + describe(*report.l2.witness);
    });
    out.push_back(std::move(c));
  }
  return out;
}

// 2 -------------------------------------------------------------------------

std::vector<Ordinal> support_points() {
  std::vector<Ordinal> out;
  for (const char* s : {"0", "1", "2", "w", "w+1", "w^2"}) out.push_back(Ordinal::parse(s));
  return out;
}

std::vector<Ordinal> support_lengths() {
  std::vector<Ordinal> out;
  for (const char* s : {"5", "w", "w+3", "w*2", "w^2"}) out.push_back(Ordinal::parse(s));
  return out;
}

bool same_outcome(const FiniteModule& m, const PwcSeq<Element>& s, std::string& witness) {
  const auto direct = infinitary_sum(m, s);
  const auto via_lim = sum_eval_from_lim(m, s);
  if (direct == via_lim) return true;
  witness = "in " + m.to_string() + ", " + format_assignment(s, m) + ": sum " + m.format_element(direct) +
            ", through limits " + m.format_element(via_lim);
  return false;
}

std::vector<CaseResult> sums_from_limits(std::uint64_t seed) {
  std::vector<CaseResult> out;
  for (const auto& m : standard_battery()) {
    auto c = make_case(2, "transfinite", "sum-from-lim/exhaustive/" + m.to_string(), "5, w, w+3, w*2, w^2",
                       m.to_string());
    guarded(c, [&](CaseResult& c) {
      std::vector<Element> nonzero;
      for (std::size_t i = 1; i < m.size(); ++i) nonzero.push_back(m.element_at(i));
      for (const auto& length : support_lengths()) {
        std::vector<Ordinal> pts;
        for (const auto& p : support_points()) {
          if (p < length) pts.push_back(p);
        }
        // Every support of size <= 3 and every choice of nonzero values on it.
        std::function<bool(std::size_t, std::vector<std::pair<Ordinal, Element>>&)> rec =
            [&](std::size_t from, std::vector<std::pair<Ordinal, Element>>& entries) {
              ++c.checks;
              if (!same_outcome(m, PwcSeq<Element>::from_support(length, entries, m.zero_element()), c.witness)) {
                return false;
              }
              if (entries.size() == 3) return true;
              for (std::size_t i = from; i < pts.size(); ++i) {
                for (const auto& v : nonzero) {
                  entries.emplace_back(pts[i], v);
                  const bool ok = rec(i + 1, entries);
                  entries.pop_back();
                  if (!ok) return false;
                }
              }
              return true;
            };
        std::vector<std::pair<Ordinal, Element>> entries;
        if (!rec(0, entries)) {
          c.pass = false;
          return;
        }
      }
    });
    out.push_back(std::move(c));
  }
  auto c = make_case(2, "transfinite", "sum-from-lim/random", "5, w, w+3, w*2, w^2", "battery");
  guarded(c, [&](CaseResult& c) {
    auto rng = case_rng(seed, c.key());
    const auto battery = standard_battery();
    const auto lengths = support_lengths();
    for (std::size_t i = 0; i < 500; ++i) {
      const auto& m = battery[rng.below(battery.size())];
      const auto& length = lengths[rng.below(lengths.size())];
      ++c.checks;
      if (!same_outcome(m, random_finite_support(rng, m, length, 6), c.witness)) {
        c.pass = false;
        return;
      }
    }
  });
  out.push_back(std::move(c));
  return out;
}

// 3 -------------------------------------------------------------------------

std::vector<CaseResult> successor_law(std::uint64_t) {
  std::vector<CaseResult> out;
  for (const auto& m : {FiniteModule::cyclic(2), FiniteModule::cyclic(4)}) {
    auto c = make_case(3, "transfinite", "successor-law/" + m.to_string(), "1..6", m.to_string());
    guarded(c, [&](CaseResult& c) {
      for (std::uint64_t n = 1; n <= 6; ++n) {
        std::size_t count = 1;
        for (std::uint64_t i = 0; i < n; ++i) count *= m.size();
        for (std::size_t code = 0; code < count; ++code) {
          std::vector<std::pair<Ordinal, Element>> entries;
          std::size_t rest = code;
          for (std::uint64_t i = 0; i < n; ++i) {
            entries.emplace_back(Ordinal{i}, m.element_at(rest % m.size()));
            rest /= m.size();
          }
          const auto s = PwcSeq<Element>::from_support(Ordinal{n}, entries, m.zero_element());
          ++c.checks;
          const auto got = lim_eval(m, s);
          if (got != entries.back().second) {
            c.pass = false;
            c.witness = "lim of " + format_assignment(s, m) + " is " + m.format_element(got);
            return;
          }
        }
      }
    });
    out.push_back(std::move(c));
  }
  return out;
}

// 4 -------------------------------------------------------------------------

std::vector<CaseResult> compatibility(std::uint64_t seed) {
  std::vector<CaseResult> out;
  const auto battery = standard_battery();
  for (const auto& alpha : test_ordinals()) {
    auto c = make_case(4, "transfinite", "restrict-sum/" + alpha.to_string(), alpha.to_string(), battery_name(battery));
    guarded(c, [&](CaseResult& c) {
      auto rng = case_rng(seed, c.key());
      auto betas = candidate_points(alpha);
      betas.insert(betas.begin(), Ordinal{});
      for (const auto& beta : betas) {
        const auto restricted = restrict_sum(alpha, beta);
        for (const auto& m : battery) {
          for (std::size_t i = 0; i < 10; ++i) {
            const auto s = random_finite_support(rng, m, beta, 4);
            ++c.checks;
            const auto a = restricted(m, s);
            const auto b = infinitary_sum(m, s);
            if (a != b) {
              c.pass = false;
              c.witness = "beta=" + beta.to_string() + " in " + m.to_string() + ": " + format_assignment(s, m) +
                          " restricted " + m.format_element(a) + ", direct " + m.format_element(b);
              return;
            }
          }
          // Divergence is preserved by zero extension.
          const auto s = random_family(rng, m, beta, 3);
          const bool direct_diverges = !s.support_if_finite(m.zero_element()).has_value();
          bool restricted_diverges = false;
          try {
            restricted(m, s);
          } catch (const Error& e) {
            restricted_diverges = e.kind() == ErrorKind::DivergentSum;
          }
          ++c.checks;
          if (direct_diverges != restricted_diverges) {
            c.pass = false;
            c.witness = "beta=" + beta.to_string() + " in " + m.to_string() + ": divergence of " +
                        format_assignment(s, m) + " changed under zero extension";
            return;
          }
        }
      }
    });
    out.push_back(std::move(c));
  }
  return out;
}

// 5 -------------------------------------------------------------------------

std::vector<CaseResult> summation_terms(std::uint64_t seed) {
  std::vector<CaseResult> out;
  const auto battery = standard_battery();
  std::vector<Ordinal> sets;
  for (std::uint64_t k = 1; k <= 6; ++k) sets.emplace_back(k);
  sets.push_back(Ordinal::omega());
  for (const auto& x : sets) {
    auto c = make_case(5, "ab5", "summation-term/" + x.to_string(), x.to_string(), battery_name(battery));
    guarded(c, [&](CaseResult& c) {
      auto rng = case_rng(seed, c.key());
      for (std::uint64_t n : {2, 6, 12}) {
        const auto d = diagonal_factorization(Theory::additive(n, true), x, rng);
        c.checks += d.checked;
        if (!d.factors) {
          c.pass = false;
          c.witness = "Z/" + std::to_string(n) + ": " + d.certificate;
          return;
        }
      }
      const auto semantic = summation_term_check(term_evaluator(build_sum_term(x)), x, battery, 500, rng);
      c.checks += semantic.trials;
      if (!semantic.pass) {
        c.pass = false;
        c.witness = semantic.witness;
        return;
      }
      for (const auto& a : summation_criterion_audit(x, 12, battery, 200, rng)) {
        ++c.checks;
        if (!a.agree()) {
          c.pass = false;
          c.witness = "candidate '" + a.name + "' " + a.term.to_string() + ": constant family " +
                      (a.constant_family ? "yes" : "no") + ", summation " + (a.summation ? "yes" : "no");
          return;
        }
      }
    });
    out.push_back(std::move(c));
  }
  return out;
}

// 6 -------------------------------------------------------------------------

std::vector<CaseResult> finitary_refutation(std::uint64_t seed) {
  std::vector<CaseResult> out;
  for (std::uint64_t n = 2; n <= 6; ++n) {
    for (const char* a : {"w", "w*2", "w^2"}) {
      const auto alpha = Ordinal::parse(a);
      auto c = make_case(6, "transfinite", "finitary/Z/" + std::to_string(n) + "/" + alpha.to_string(),
                         alpha.to_string(), "Z/" + std::to_string(n));
      guarded(c, [&](CaseResult& c) {
        auto rng = case_rng(seed, c.key());
        const auto verdict = refute_limit_term_finitary(n, alpha);
        const auto* cert = std::get_if<RefutationCertificate>(&verdict);
        if (!cert) {
          c.pass = false;
          c.witness = "expected a refutation";
          return;
        }
        std::vector<Term> candidates{Term::zero(), Term::var(0)};
        for (const auto& p : candidate_points(alpha)) candidates.push_back(Term::var(p));
        for (std::size_t i = 0; i < 100; ++i) candidates.push_back(random_finitary_term(rng, n, alpha, 5));
        for (const auto& t : candidates) {
          ++c.checks;
          const auto inst = cert->instantiate(t);
          if (!inst.refutes()) {
            c.pass = false;
            c.witness = "certificate does not refute " + t.to_string();
            return;
          }
        }
      });
      out.push_back(std::move(c));
    }
    auto c = make_case(6, "transfinite", "finitary/Z/" + std::to_string(n) + "/successors", "1..6",
                       "Z/" + std::to_string(n));
    guarded(c, [&](CaseResult& c) {
      auto rng = case_rng(seed, c.key());
      const auto theory = Theory::additive(n, false);
      const std::vector<FiniteModule> modules{FiniteModule::cyclic(n)};
      for (std::uint64_t a = 1; a <= 6; ++a) {
        const auto verdict = refute_limit_term_finitary(n, Ordinal{a});
        const auto* e = std::get_if<LimitTermExists>(&verdict);
        if (!e) {
          c.pass = false;
          c.witness = "no limit term for alpha = " + std::to_string(a);
          return;
        }
        const Term t = e->term;
        const Evaluator f = [&](const FiniteModule& m, const PwcSeq<Element>& s) { return eval(t, m, s, theory); };
        L1Options options;
        options.trials = 50;
        options.exhaustive = true;
        const auto report = check_limit_term(f, t, Ordinal{a}, modules, options, rng);
        c.checks += report.l1.comparisons + report.l2.comparisons;
        if (!report.pass()) {
          c.pass = false;
          c.witness = "limit term " + t.to_string() + " fails at alpha = " + std::to_string(a);
          return;
        }
      }
    });
    out.push_back(std::move(c));
  }
  return out;
}

// 7 -------------------------------------------------------------------------

std::vector<CaseResult> inverse_limits(std::uint64_t seed) {
  std::vector<CaseResult> out;
  auto surj = make_case(7, "diagrams", "surjectivity", "w", "random systems, levels <= 8");
  auto section = make_case(7, "diagrams", "section", "w", "random systems, levels <= 8");
  auto natural = make_case(7, "diagrams", "naturality", "w", "random systems, levels <= 8");
  auto rng = case_rng(seed, "diagrams/random-morphisms");
  for (std::size_t i = 0; i < 200 && surj.pass && section.pass && natural.pass; ++i) {
    guarded(surj, [&](CaseResult& c) {
      const auto f = random_quotient_morphism(rng);
      const auto r = check_inverse_limit_surjectivity(f, 4);
      ++c.checks;
      if (!r.pass) {
        c.pass = false;
        c.witness = "morphism #" + std::to_string(i) + " misses a thread: " + morphism_to_json(f);
        return;
      }
      if (i < 50) {
        const auto theory = Theory::additive(system_exponent(f.source()), true);
        guarded(section, [&](CaseResult& s) {
          const auto rep = lim_to_prod_section_check(f.source(), theory, rng);
          ++s.checks;
          if (!rep.pass) {
            s.pass = false;
            s.witness = "system #" + std::to_string(i) + ": " + rep.failure;
          }
        });
        guarded(natural, [&](CaseResult& s) {
          const auto rep = retraction_naturality_check(f, theory, rng);
          ++s.checks;
          if (!rep.pass) {
            s.pass = false;
            s.witness = "morphism #" + std::to_string(i) + ": " + rep.failure;
          }
        });
      }
    });
  }
  out.push_back(std::move(natural));
  out.push_back(std::move(section));
  out.push_back(std::move(surj));
  return out;
}

// 8 -------------------------------------------------------------------------

std::vector<CaseResult> equivalence(std::uint64_t seed) {
  std::vector<CaseResult> out;
  auto rng = case_rng(seed, "ab5/equivalence");
  std::vector<AuditRow> rows;
  try {
    rows = equivalence_audit(6, rng);
  } catch (const Error& e) {
    auto c = make_case(8, "ab5", "equivalence", "w", "Z/1..Z/6");
    c.pass = false;
    c.witness = std::string("unexpected error: ") + e.what();
    return {c};
  }
  for (const auto& row : rows) {
    const std::string theory = std::string(row.infinitary ? "add-inf" : "add") + " mod " + std::to_string(row.modulus);
    auto c = make_case(8, "ab5", "equivalence/" + theory, "w", "Z/" + std::to_string(row.modulus));
    c.checks = 3;
    c.pass = row.agree();
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    c.witness = std::string("inverse limits ") + yn(row.inverse_limits) + ", eta " + yn(row.eta) + ", diagonal " +
                yn(row.diagonal) + "; " + row.evidence;
    out.push_back(std::move(c));
  }
  return out;
}

// 9 -------------------------------------------------------------------------

std::vector<CaseResult> divergence(std::uint64_t) {
  std::vector<CaseResult> out;
  for (const auto& m : standard_battery()) {
    auto c = make_case(9, "ab5", "divergence/" + m.to_string(), "w", m.to_string());
    guarded(c, [&](CaseResult& c) {
      const Term sigma = build_sum_term(Ordinal::omega());
      for (std::size_t i = 1; i < m.size(); ++i) {
        const auto s = PwcSeq<Element>::constant(Ordinal::omega(), m.element_at(i));
        const std::vector<std::pair<std::string, std::function<void()>>> routes{
            {"sum", [&] { infinitary_sum(m, s); }},
            {"sum through limits", [&] { sum_eval_from_lim(m, s); }},
            {"sum term", [&] { eval(sigma, m, s); }}};
        for (const auto& [name, run] : routes) {
          ++c.checks;
          bool diverged = false;
          try {
            run();
          } catch (const Error& e) {
            diverged = e.kind() == ErrorKind::DivergentSum;
          }
          if (!diverged) {
            c.pass = false;
            c.witness = name + " of the constant family " + m.format_element(m.element_at(i)) + " did not diverge";
            return;
          }
        }
      }
    });
    out.push_back(std::move(c));
  }
  return out;
}

} // namespace

std::vector<CaseResult> run_criterion(int criterion, std::uint64_t seed) {
  static const std::map<int, std::function<std::vector<CaseResult>(std::uint64_t)>> table{
      {1, limit_terms},   {2, sums_from_limits}, {3, successor_law}, {4, compatibility}, {5, summation_terms},
      {6, finitary_refutation}, {7, inverse_limits}, {8, equivalence}, {9, divergence}};
  auto it = table.find(criterion);
  if (it == table.end()) {
    fail(ErrorKind::IndexOutOfRange, "no suite for criterion " + std::to_string(criterion));
  }
  auto cases = it->second(seed);
  std::stable_sort(cases.begin(), cases.end(), [](const CaseResult& a, const CaseResult& b) { return a.key() < b.key(); });
  return cases;
}

std::vector<std::string> suite_names() { return {"all", "transfinite", "diagrams", "ab5"}; }

std::vector<int> suite_criteria(const std::string& name) {
  if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9};
  if (name == "transfinite") return {1, 2, 3, 4, 6};
  if (name == "diagrams") return {7};
  if (name == "ab5") return {5, 8, 9};
  fail(ErrorKind::Parse, "unknown suite '" + name + "' (expected all, transfinite, diagrams or ab5)");
}

std::vector<CaseResult> run_suite(const std::string& name, std::uint64_t seed) {
  std::vector<CaseResult> all;
  for (int k : suite_criteria(name)) {
    auto cases = run_criterion(k, seed);
    all.insert(all.end(), cases.begin(), cases.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const CaseResult& a, const CaseResult& b) { return a.key() < b.key(); });
  return all;
}

std::string format_cases(const std::vector<CaseResult>& cases) {
  std::string out;
  for (const auto& c : cases) {
    out += std::string(c.pass ? "PASS " : "FAIL ") + c.key() + "  alpha=" + c.alpha + "  instance=" + c.instance +
           "  checks=" + std::to_string(c.checks) + "\n";
    if (!c.witness.empty() && (!c.pass || c.criterion == 8)) {
      out += "     " + c.witness + "\n";
    }
  }
  return out;
}

std::string cases_to_json(const std::string& suite, std::uint64_t seed, const std::vector<CaseResult>& cases) {
  nlohmann::ordered_json doc;
  doc["suite"] = suite;
  doc["seed"] = seed;
  doc["pass"] = std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; });
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cases) {
    nlohmann::ordered_json j;
    j["case"] = c.key();
    j["alpha"] = c.alpha;
    j["instance"] = c.instance;
    j["verdict"] = c.pass ? "pass" : "fail";
    j["witness"] = c.witness;
    j["checks"] = c.checks;
    arr.push_back(std::move(j));
  }
  doc["cases"] = std::move(arr);
  return doc.dump(2);
}

} // namespace limterm
