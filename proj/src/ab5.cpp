#include "limterm/ab5.hpp"

#include "limterm/error.hpp"

#include <algorithm>
#include <set>

namespace limterm {

bool supported_index_set(const Ordinal& x) { return x.is_finite() || x == Ordinal::omega(); }

namespace {

void require_additive(const Theory& theory) {
  if (!theory.is_additive()) {
    fail(ErrorKind::TheoryMismatch, "needs an additive theory, got " + theory.to_string());
  }
}

void require_index_set(const Ordinal& x) {
  if (!supported_index_set(x)) {
    fail(ErrorKind::InvalidAlpha, "index sets are finite or w, not " + x.to_string());
  }
}

PwcSeq<Element> indicator(const FiniteModule& m, const Ordinal& x, const Ordinal& at) {
  return PwcSeq<Element>::from_support(x, {{at, m.element_at(1 % m.size())}}, m.zero_element());
}

Term combine(std::vector<Term> parts) {
  if (parts.empty()) {
    return Term::zero();
  }
  Term acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Term::plus(acc, parts[i]);
  return acc;
}

Term finite_sum_term(std::uint64_t k) {
  std::vector<Term> vars;
  for (std::uint64_t i = 0; i < k; ++i) vars.push_back(Term::var(i));
  return combine(std::move(vars));
}

/// Every family in (Z/n)^k when there are at most `cap` of them.
std::optional<std::vector<PwcSeq<Element>>> all_finite_families(const FiniteModule& m, std::uint64_t k,
                                                                 std::size_t cap) {
  std::size_t count = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    count *= m.size();
    if (count > cap) return std::nullopt;
  }
  std::vector<PwcSeq<Element>> out;
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<std::pair<Ordinal, Element>> entries;
    std::size_t c = code;
    for (std::uint64_t i = 0; i < k; ++i) {
      entries.emplace_back(Ordinal{i}, m.element_at(c % m.size()));
      c /= m.size();
    }
    out.push_back(PwcSeq<Element>::from_support(Ordinal{k}, entries, m.zero_element()));
  }
  return out;
}

bool preimage_matches(const PwcSeq<Element>& family, const Term& pre, const Theory& theory,
                      const std::vector<Ordinal>& points) {
  const auto comps = indicator_components(pre, family.length(), points, theory);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (comps[i] != family.value_at(points[i])) return false;
  }
  return true;
}

} // namespace

std::vector<Ordinal> index_samples(const Ordinal& x) {
  if (const auto k = x.finite_value()) {
    std::vector<Ordinal> out;
    for (std::uint64_t i = 0; i < *k; ++i) out.emplace_back(i);
    return out;
  }
  std::set<Ordinal> pts{Ordinal{0}, Ordinal{8}, Ordinal{13}, Ordinal{100}};
  for (const auto& p : candidate_points(x)) pts.insert(p);
  std::vector<Ordinal> out;
  for (const auto& p : pts) {
    if (p < x) out.push_back(p);
  }
  return out;
}

std::vector<Element> indicator_components(const Term& t, const Ordinal& x, const std::vector<Ordinal>& points,
                                          const Theory& theory) {
  const auto m = FiniteModule::cyclic(theory.modulus());
  std::vector<Element> out;
  for (const auto& y : points) {
    out.push_back(eval(t, m, indicator(m, x, y), theory));
  }
  return out;
}

Term eta_preimage(const PwcSeq<Element>& family, bool infinitary) {
  std::vector<Term> parts;
  for (std::size_t i = 0; i < family.piece_count(); ++i) {
    const auto& p = family.pieces()[i];
    const auto r = p.value.at(0);
    if (r == 0) continue;
    const Ordinal& end = family.piece_end(i);
    if (infinitary) {
      const Ordinal len = left_subtract(p.start, end);
      parts.push_back(Term::scal(r, Term::sum(Basis{len, p.start})));
      continue;
    }
    const auto count = interval_cardinality(p.start, end);
    if (!count) {
      fail(ErrorKind::TheoryMismatch, "finitary terms cannot reach the infinite piece starting at " +
                                          p.start.to_string());
    }
    for (std::uint64_t k = 0; k < *count; ++k) {
      parts.push_back(Term::scal(r, Term::var(p.start + Ordinal{k})));
    }
  }
  return combine(std::move(parts));
}

EtaVerdict eta_surjective_decision(const Theory& theory, const Ordinal& x, Rng& rng) {
  require_additive(theory);
  require_index_set(x);
  const auto n = theory.modulus();
  const auto m = FiniteModule::cyclic(n);
  EtaVerdict v;
  v.modulus = n;
  v.infinitary = theory.is_infinitary();
  v.set = x;
  const auto points = index_samples(x);

  auto verify_preimages = [&](const std::vector<PwcSeq<Element>>& families) {
    for (const auto& fam : families) {
      const Term pre = eta_preimage(fam, theory.is_infinitary());
      validate(pre, theory, x);
      if (!preimage_matches(fam, pre, theory, points)) {
        fail(ErrorKind::Internal, "preimage " + pre.to_string() + " misses " + format_assignment(fam, m));
      }
      ++v.checked;
    }
  };

  if (const auto k = x.finite_value()) {
    auto families = all_finite_families(m, *k, 50000);
    if (!families) {
      families.emplace();
      for (std::size_t i = 0; i < 500; ++i) families->push_back(random_family(rng, m, x, 4));
    }
    verify_preimages(*families);
    v.surjective = true;
    v.certificate = "sum of scalar multiples of the generators; verified on " + std::to_string(v.checked) + " families";
    return v;
  }
  if (n == 1) {
    v.surjective = true;
    v.checked = 1;
    v.certificate = "P = 0, so P^(w) -> P^w is a map between singletons";
    return v;
  }
  if (theory.is_infinitary()) {
    std::vector<PwcSeq<Element>> families;
    for (const auto& c : m.elements()) families.push_back(PwcSeq<Element>::constant(x, c));
    for (std::size_t i = 0; i < 200; ++i) families.push_back(random_family(rng, m, x, 4));
    verify_preimages(families);
    v.surjective = true;
    v.certificate = "sum over each piece scaled by its value; verified on " + std::to_string(v.checked) + " families";
    return v;
  }
  // Every finitary term mentions finitely many generators, so its image vanishes
  // beyond them and never equals the constant family 1.
  for (std::uint64_t bound = 1; bound <= 6; ++bound) {
    for (std::size_t i = 0; i < 50; ++i) {
      const Term t = random_finitary_term(rng, n, Ordinal{bound}, 4);
      if (!(variable_bound(t) <= Ordinal{bound})) {
        fail(ErrorKind::Internal, "finitary term with unbounded support");
      }
      const auto beyond = indicator_components(t, x, {Ordinal{bound}}, theory);
      if (beyond[0] != m.zero_element()) {
        fail(ErrorKind::Internal, "finitary term " + t.to_string() + " sees generator " + std::to_string(bound));
      }
      ++v.checked;
    }
  }
  v.surjective = false;
  v.certificate = "the constant family 1 has infinite support; images of " + std::to_string(v.checked) +
                  " finitary terms vanish beyond their variables (truncations 1..6)";
  return v;
}

DiagonalVerdict diagonal_factorization(const Theory& theory, const Ordinal& x, Rng& rng) {
  require_additive(theory);
  require_index_set(x);
  const auto n = theory.modulus();
  const auto m = FiniteModule::cyclic(n);
  DiagonalVerdict v;
  std::optional<Term> sigma;
  if (theory.is_infinitary()) {
    sigma = build_sum_term(x);
  } else if (const auto k = x.finite_value()) {
    sigma = finite_sum_term(*k);
  } else if (n == 1) {
    sigma = Term::zero();
  }
  if (!sigma) {
    const auto eta = eta_surjective_decision(theory, x, rng);
    v.factors = false;
    v.checked = eta.checked;
    v.certificate = "no summation term over " + x.to_string() + ": " + eta.certificate;
    return v;
  }
  const auto points = index_samples(x);
  const auto comps = indicator_components(*sigma, x, points, theory);
  const Element one = m.element_at(1 % m.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (comps[i] != one) {
      fail(ErrorKind::Internal, "p_" + points[i].to_string() + "(" + sigma->to_string() + ") is not the generator");
    }
  }
  v.factors = true;
  v.sigma = sigma;
  v.checked = points.size();
  v.certificate = "p_x(" + sigma->to_string() + ") = 1 at " + std::to_string(points.size()) + " sampled x";
  return v;
}

SummationCheck summation_term_check(const Evaluator& f, const Ordinal& x, const std::vector<FiniteModule>& battery,
                                    std::size_t trials, Rng& rng) {
  SummationCheck out;
  auto pool = index_samples(x);
  for (const auto& p : candidate_points(x)) pool.push_back(p);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (std::size_t i = 0; i < trials && !battery.empty(); ++i) {
    const auto& m = battery[i % battery.size()];
    // Distinct indices drawn from the pool, each with a nonzero value.
    auto candidates = pool;
    std::vector<std::pair<Ordinal, Element>> entries;
    const auto count = std::min<std::size_t>(rng.below(5), candidates.size());
    for (std::size_t j = 0; j < count; ++j) {
      const auto pick = j + rng.below(candidates.size() - j);
      std::swap(candidates[j], candidates[pick]);
      const Element value = m.size() > 1 ? m.element_at(1 + rng.below(m.size() - 1)) : m.zero_element();
      entries.emplace_back(candidates[j], value);
    }
    Element expected = m.zero_element();
    for (const auto& e : entries) expected = m.add(expected, e.second);
    const auto family = PwcSeq<Element>::from_support(x, entries, m.zero_element());
    ++out.trials;
    std::string got;
    try {
      const auto value = f(m, family);
      if (value == expected) continue;
      got = m.format_element(value);
    } catch (const Error& e) {
      got = std::string("error (") + e.what() + ")";
    }
    out.pass = false;
    out.witness = "in " + m.to_string() + ", support " + format_assignment(family, m) + ": got " + got +
                  ", expected " + m.format_element(expected);
    return out;
  }
  return out;
}

SummationCheck naturality_factorization_check(const Theory& theory, const Ordinal& x, const FiniteModule& m,
                                              std::size_t trials, Rng& rng) {
  SummationCheck out;
  if (theory.modulus() % m.exponent() != 0) {
    fail(ErrorKind::TheoryMismatch, m.to_string() + " is not a module over Z/" + std::to_string(theory.modulus()));
  }
  const auto diag = diagonal_factorization(theory, x, rng);
  if (!diag.factors) {
    out.pass = false;
    out.witness = "the diagonal does not factor: " + diag.certificate;
    return out;
  }
  // f = prod f_x o diagonal = (eval through the coproduct) o sigma, so the y-th
  // component of f(1) is p_y(sigma) * m_y.
  const auto points = index_samples(x);
  const auto p = indicator_components(*diag.sigma, x, points, theory);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto family = random_family(rng, m, x, 4);
    ++out.trials;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const auto& my = family.value_at(points[j]);
      if (m.scale(p[j].at(0), my) != my) {
        out.pass = false;
        out.witness = "component " + points[j].to_string() + " of " + format_assignment(family, m);
        return out;
      }
    }
  }
  return out;
}

std::vector<AuditRow> equivalence_audit(std::uint64_t max_modulus, Rng& rng, std::size_t trials) {
  std::vector<AuditRow> rows;
  std::vector<Ordinal> sets;
  for (std::uint64_t k = 1; k <= 6; ++k) sets.emplace_back(k);
  sets.push_back(Ordinal::omega());
  for (std::uint64_t n = 1; n <= max_modulus; ++n) {
    for (bool infinitary : {false, true}) {
      const auto theory = Theory::additive(n, infinitary);
      AuditRow row;
      row.modulus = n;
      row.infinitary = infinitary;
      const auto key = key_diagram_check(theory, Ordinal::omega(), standard_battery(), rng, trials);
      row.inverse_limits = key.exact;
      row.eta = true;
      row.diagonal = true;
      for (const auto& x : sets) {
        row.eta = row.eta && eta_surjective_decision(theory, x, rng).surjective;
        row.diagonal = row.diagonal && diagonal_factorization(theory, x, rng).factors;
      }
      row.evidence = key.evidence;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<CandidateAudit> summation_criterion_audit(const Ordinal& x, std::uint64_t modulus,
                                                      const std::vector<FiniteModule>& battery, std::size_t trials,
                                                      Rng& rng) {
  require_index_set(x);
  const auto theory = Theory::additive(modulus, true);
  const Term sigma = build_sum_term(x);
  std::vector<std::pair<std::string, Term>> candidates{{"sum", sigma}, {"double sum", Term::scal(2, sigma)}};
  if (!x.is_zero()) {
    const Term lim = build_lim_term(x);
    candidates.emplace_back("lim", lim);
    candidates.emplace_back("sum plus lim", Term::plus(sigma, lim));
    candidates.emplace_back("first variable", Term::var(0));
    const Ordinal cut = x.is_finite() ? Ordinal{*x.finite_value() - 1} : Ordinal{3};
    candidates.emplace_back("truncated sum", Term::sum(Basis{cut, Ordinal{}}));
  }
  const auto points = index_samples(x);
  const auto m = FiniteModule::cyclic(modulus);
  const Element one = m.element_at(1 % m.size());
  std::vector<CandidateAudit> out;
  for (auto& [name, t] : candidates) {
    CandidateAudit a{name, t};
    const auto comps = indicator_components(t, x, points, theory);
    a.constant_family = std::all_of(comps.begin(), comps.end(), [&](const Element& e) { return e == one; });
    a.summation = summation_term_check(term_evaluator(t), x, battery, trials, rng).pass;
    out.push_back(std::move(a));
  }
  return out;
}

} // namespace limterm
