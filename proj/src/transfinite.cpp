#include "limterm/transfinite.hpp"

#include "limterm/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace limterm {

// ---------------------------------------------------------------------------
// lim through sums

namespace {

class RunningLimit {
public:
  RunningLimit(const FiniteModule& m, const PwcSeq<Element>& s) : m_(m), s_(s) {}

  /// lim of the prefix of s of length beta.
  Element of_prefix(const Ordinal& beta) {
    if (beta.is_zero()) {
      return m_.zero_element();
    }
    if (auto it = memo_.find(beta); it != memo_.end()) {
      return it->second;
    }
    const auto prefix = s_.prefix(beta);
    const auto& pieces = prefix.pieces();

    // lim_{d<g} s_d as a function of g < beta: 0 at g = 0, and the value of
    // piece i on [b_i + 1, b_{i+1} + 1).
    std::vector<typename PwcSeq<Element>::Piece> running{{Ordinal{}, m_.zero_element()}};
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Ordinal first = pieces[i].start.successor();
      if (!(first < beta)) {
        break;
      }
      Element value = of_prefix(first);
      const Ordinal& last = prefix.piece_end(i);
      if (last < beta && first < last) {
        const Element check = of_prefix(last);
        if (check != value) {
          fail(ErrorKind::Internal, "running limit not constant on [" + first.to_string() + "," +
                                        last.successor().to_string() + ")");
        }
      }
      running.push_back({first, std::move(value)});
    }
    const auto lim_below = PwcSeq<Element>::from_pieces(beta, std::move(running));
    const auto diff = zip_map(prefix, lim_below, [&](const Element& a, const Element& b) { return m_.sub(a, b); });
    if (!diff.support_if_finite(m_.zero_element())) {
      fail(ErrorKind::Internal, "difference family of a piecewise constant family has infinite support");
    }
    Element out = infinitary_sum(m_, diff);
    memo_.emplace(beta, out);
    return out;
  }

private:
  const FiniteModule& m_;
  const PwcSeq<Element>& s_;
  std::map<Ordinal, Element> memo_;
};

Element sum_from_lim(const FiniteModule& m, const PwcSeq<Element>& s) {
  if (s.length().is_zero()) {
    return m.zero_element();
  }
  const auto support = s.support_if_finite(m.zero_element());
  if (!support) {
    fail(ErrorKind::DivergentSum, "family of length " + s.length().to_string() + " in " + m.to_string() +
                                      " has infinite support");
  }
  const auto [lambda, n] = split_finite_tail(s.length());
  Element acc = m.zero_element();
  if (!lambda.is_zero()) {
    // Partial sums below a limit change only just after support points.
    std::vector<typename PwcSeq<Element>::Piece> partial{{Ordinal{}, m.zero_element()}};
    for (const auto& [index, value] : *support) {
      if (index < lambda) {
        const Ordinal next = index.successor();
        partial.push_back({next, sum_from_lim(m, s.prefix(next))});
      }
    }
    acc = lim_eval(m, PwcSeq<Element>::from_pieces(lambda, std::move(partial)));
  }
  for (const auto& [index, value] : *support) {
    if (index >= lambda) {
      acc = m.add(acc, value);
    }
  }
  return acc;
}

} // namespace

Element lim_eval(const FiniteModule& m, const PwcSeq<Element>& s) {
  RunningLimit r(m, s);
  return r.of_prefix(s.length());
}

Element lim_eval_telescoped(const FiniteModule& m, const PwcSeq<Element>& s) {
  if (s.length().is_zero()) {
    return m.zero_element();
  }
  return s.pieces().back().value;
}

Term lim_eval(const FreeModule& m, const Family& s) {
  if (!m.theory.is_infinitary()) {
    fail(ErrorKind::TheoryMismatch, "no limit terms in " + m.theory.to_string());
  }
  return Term::lim(s);
}

Element sum_eval_from_lim(const FiniteModule& m, const PwcSeq<Element>& s) { return sum_from_lim(m, s); }

Term build_lim_term(const Ordinal& alpha) {
  if (alpha.is_zero()) {
    fail(ErrorKind::InvalidAlpha, "limit terms need alpha >= 1");
  }
  return Term::lim(Family::identity(alpha));
}

Term build_sum_term(const Ordinal& x) { return Term::sum(Family::identity(x)); }

Evaluator lim_evaluator() {
  return [](const FiniteModule& m, const PwcSeq<Element>& s) { return lim_eval(m, s); };
}

Evaluator sum_evaluator() {
  return [](const FiniteModule& m, const PwcSeq<Element>& s) { return infinitary_sum(m, s); };
}

Evaluator term_evaluator(Term t) {
  return [t = std::move(t)](const FiniteModule& m, const PwcSeq<Element>& s) { return eval(t, m, s); };
}

Evaluator restrict_sum(const Ordinal& alpha, const Ordinal& beta) {
  if (!(beta < alpha)) {
    fail(ErrorKind::IndexOutOfRange, "restriction to " + beta.to_string() + " needs beta < " + alpha.to_string());
  }
  return [alpha, beta](const FiniteModule& m, const PwcSeq<Element>& s) {
    if (s.length() != beta) {
      fail(ErrorKind::LengthMismatch,
           "family of length " + s.length().to_string() + " given to a sum restricted to " + beta.to_string());
    }
    return infinitary_sum(m, s.zero_extend(alpha, m.zero_element()));
  };
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<Ordinal> candidate_points(const Ordinal& alpha) {
  static const std::vector<Ordinal> universe = [] {
    std::vector<Ordinal> u;
    for (const char* text : {"1", "2", "3", "5", "w", "w+1", "w+2", "w*2", "w*2+1", "w*3", "w^2", "w^2+1", "w^2+w",
                             "w^2+w+1", "w^2+w*2", "w^2*2", "w^3", "w^w", "w^w+1"}) {
      u.push_back(Ordinal::parse(text));
    }
    return u;
  }();
  std::set<Ordinal> out;
  for (const auto& p : universe) {
    if (p < alpha) out.insert(p);
  }
  const auto [lambda, n] = split_finite_tail(alpha);
  out.insert(lambda);
  out.insert(lambda.successor());
  for (std::uint64_t k = 1; k < n && k < 4; ++k) {
    out.insert(lambda + Ordinal{n - k});
  }
  std::vector<Ordinal> pts;
  for (const auto& p : out) {
    if (!p.is_zero() && p < alpha) pts.push_back(p);
  }
  return pts;
}

std::vector<Ordinal> spread_points(const Ordinal& alpha, std::size_t cap) {
  auto pts = candidate_points(alpha);
  if (pts.size() <= cap || cap == 0) {
    return cap == 0 ? std::vector<Ordinal>{} : pts;
  }
  std::vector<Ordinal> out;
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t idx = cap == 1 ? pts.size() - 1 : (i * (pts.size() - 1) + (cap - 1) / 2) / (cap - 1);
    if (out.empty() || out.back() != pts[idx]) out.push_back(pts[idx]);
  }
  return out;
}

namespace {

Element random_element(Rng& rng, const FiniteModule& m) { return m.element_at(rng.below(m.size())); }

std::vector<Ordinal> choose_sorted(Rng& rng, std::vector<Ordinal> pool, std::size_t k) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

} // namespace

PwcSeq<Element> random_family(Rng& rng, const FiniteModule& m, const Ordinal& length, std::size_t max_pieces) {
  if (length.is_zero()) {
    return {};
  }
  const std::size_t k = 1 + rng.below(std::max<std::size_t>(max_pieces, 1));
  std::vector<typename PwcSeq<Element>::Piece> pieces{{Ordinal{}, random_element(rng, m)}};
  for (auto& b : choose_sorted(rng, candidate_points(length), k - 1)) {
    pieces.push_back({b, random_element(rng, m)});
  }
  return PwcSeq<Element>::from_pieces(length, std::move(pieces));
}

PwcSeq<Element> random_finite_support(Rng& rng, const FiniteModule& m, const Ordinal& length,
                                      std::size_t max_support) {
  auto pool = candidate_points(length);
  if (!length.is_zero()) pool.insert(pool.begin(), Ordinal{});
  const auto chosen = choose_sorted(rng, pool, rng.below(max_support + 1));
  std::vector<std::pair<Ordinal, Element>> entries;
  for (const auto& x : chosen) {
    Element v = m.size() > 1 ? m.element_at(1 + rng.below(m.size() - 1)) : m.zero_element();
    entries.emplace_back(x, std::move(v));
  }
  return PwcSeq<Element>::from_support(length, entries, m.zero_element());
}

std::vector<PwcSeq<Element>> all_families(const FiniteModule& m, const Ordinal& length,
                                          const std::vector<Ordinal>& points, std::size_t max_pieces) {
  std::vector<PwcSeq<Element>> out;
  if (length.is_zero()) {
    out.emplace_back();
    return out;
  }
  const auto elems = m.elements();
  std::vector<Ordinal> starts;
  // Breakpoint subsets in lexicographic order, then value tuples without equal neighbours.
  auto emit_values = [&](const std::vector<Ordinal>& bps) {
    std::vector<std::size_t> v(bps.size(), 0);
    while (true) {
      bool ok = true;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] == v[i - 1]) ok = false;
      }
      if (ok) {
        std::vector<typename PwcSeq<Element>::Piece> pieces;
        for (std::size_t i = 0; i < bps.size(); ++i) pieces.push_back({bps[i], elems[v[i]]});
        out.push_back(PwcSeq<Element>::from_pieces(length, std::move(pieces)));
      }
      std::size_t i = v.size();
      while (i > 0 && v[i - 1] + 1 == elems.size()) v[--i] = 0;
      if (i == 0) break;
      ++v[i - 1];
    }
  };
  std::vector<Ordinal> pts;
  for (const auto& p : points) {
    if (!p.is_zero() && p < length) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::function<void(std::size_t, std::vector<Ordinal>&)> rec = [&](std::size_t from, std::vector<Ordinal>& bps) {
    emit_values(bps);
    if (bps.size() >= max_pieces) return;
    for (std::size_t i = from; i < pts.size(); ++i) {
      bps.push_back(pts[i]);
      rec(i + 1, bps);
      bps.pop_back();
    }
  };
  std::vector<Ordinal> bps{Ordinal{}};
  rec(0, bps);
  return out;
}

// ---------------------------------------------------------------------------
// (L1) and (L2)

namespace {

struct Outcome {
  std::optional<Element> value;
  std::string error;

  bool operator==(const Outcome& o) const { return value == o.value && error == o.error; }
};

Outcome run(const Evaluator& f, const FiniteModule& m, const PwcSeq<Element>& s) {
  try {
    return Outcome{f(m, s), {}};
  } catch (const Error& e) {
    return Outcome{std::nullopt, e.what()};
  }
}

std::string render(const FiniteModule& m, const Outcome& o) {
  return o.value ? m.format_element(*o.value) : "error (" + o.error + ")";
}

std::vector<Ordinal> l1_betas(const PwcSeq<Element>& s) {
  std::set<Ordinal> out{Ordinal{1}};
  for (const auto& b : s.breakpoints()) {
    out.insert(b);
    out.insert(b.successor());
  }
  std::vector<Ordinal> betas;
  for (const auto& b : out) {
    if (!b.is_zero() && b < s.length()) betas.push_back(b);
  }
  return betas;
}

} // namespace

L1Result check_L1(const Evaluator& f, const Ordinal& alpha, const std::vector<FiniteModule>& battery,
                  const L1Options& options, Rng& rng) {
  L1Result result;
  for (const auto& m : battery) {
    const auto elems = m.elements();
    std::vector<std::pair<PwcSeq<Element>, bool>> inputs; // (input, add a random prefix variant)
    for (std::size_t i = 0; i < options.trials; ++i) {
      inputs.emplace_back(random_family(rng, m, alpha, options.max_pieces), true);
    }
    if (options.exhaustive && m.size() <= options.exhaustive_max_carrier) {
      for (auto& s : all_families(m, alpha, spread_points(alpha, options.exhaustive_points), 3)) {
        inputs.emplace_back(std::move(s), false);
      }
    }
    for (const auto& [s, random_prefix] : inputs) {
      const Outcome base = run(f, m, s);
      for (const auto& beta : l1_betas(s)) {
        const auto tail = s.final_segment(beta);
        std::vector<PwcSeq<Element>> variants;
        for (const auto& c : elems) {
          variants.push_back(PwcSeq<Element>::concat(PwcSeq<Element>::constant(beta, c), tail));
        }
        if (random_prefix) {
          variants.push_back(PwcSeq<Element>::concat(random_family(rng, m, beta, 3), tail));
        }
        for (const auto& v : variants) {
          ++result.comparisons;
          const Outcome other = run(f, m, v);
          if (!(other == base)) {
            result.pass = false;
            result.witness = L1Witness{m, beta, s, v, render(m, base), render(m, other)};
            return result;
          }
        }
      }
    }
  }
  return result;
}

L2Result check_L2(const Evaluator& f, const Ordinal& alpha, const std::vector<FiniteModule>& battery) {
  L2Result result;
  for (const auto& m : battery) {
    for (const auto& c : m.elements()) {
      ++result.comparisons;
      const Outcome out = run(f, m, PwcSeq<Element>::constant(alpha, c));
      if (out.value != c) {
        result.pass = false;
        result.witness = L2Witness{m, c, render(m, out)};
        return result;
      }
    }
  }
  return result;
}

LimitTermReport check_limit_term(const Evaluator& f, std::optional<Term> term, const Ordinal& alpha,
                                 const std::vector<FiniteModule>& battery, const L1Options& options, Rng& rng) {
  LimitTermReport report;
  report.alpha = alpha;
  report.term = std::move(term);
  report.l1 = check_L1(f, alpha, battery, options, rng);
  report.l2 = check_L2(f, alpha, battery);
  for (const auto& m : battery) {
    report.instances_tested.push_back(m.to_string());
  }
  report.trials = options.trials * battery.size();
  return report;
}

std::string describe(const L1Witness& w) {
  return "in " + w.instance.to_string() + ", inputs agreeing from " + w.beta.to_string() + " on differ: f(" +
         format_assignment(w.first, w.instance) + ") = " + w.first_out + ", f(" +
         format_assignment(w.second, w.instance) + ") = " + w.second_out;
}

std::string describe(const L2Witness& w) {
  return "in " + w.instance.to_string() + ", constant family " + w.instance.format_element(w.constant) +
         " evaluates to " + w.output;
}

// ---------------------------------------------------------------------------
// Finitary theory

RefutationInstance RefutationCertificate::instantiate(const Term& candidate) const {
  const Theory theory = Theory::additive(modulus_, false);
  validate(candidate, theory, alpha_);
  const FiniteModule m = FiniteModule::cyclic(modulus_);
  const Element one = m.element_at(1 % m.size());
  RefutationInstance out;
  out.bound = variable_bound(candidate);
  out.constant_one = PwcSeq<Element>::constant(alpha_, one);
  out.zero_below_bound = PwcSeq<Element>::concat(PwcSeq<Element>::constant(out.bound, m.zero_element()),
                                                 PwcSeq<Element>::constant(left_subtract(out.bound, alpha_), one));
  out.out_constant = eval(candidate, m, out.constant_one, theory);
  out.out_zero_below = eval(candidate, m, out.zero_below_bound, theory);
  out.violates_l2 = out.out_constant != one;
  out.violates_l1 = out.out_constant != out.out_zero_below;
  return out;
}

LimitTermVerdict refute_limit_term_finitary(std::uint64_t modulus, const Ordinal& alpha) {
  if (modulus == 0) {
    fail(ErrorKind::TheoryMismatch, "modulus must be at least 1");
  }
  const auto c = classify(alpha);
  switch (c.kind) {
  case OrdinalKind::Zero:
    fail(ErrorKind::InvalidAlpha, "limit terms need alpha >= 1");
  case OrdinalKind::Successor:
    return LimitTermExists{Term::var(*c.predecessor)};
  case OrdinalKind::Limit:
    break;
  }
  if (modulus == 1) {
    return LimitTermExists{Term::zero()};
  }
  return RefutationCertificate{modulus, alpha};
}

Term random_finitary_term(Rng& rng, std::uint64_t modulus, const Ordinal& bound, std::size_t depth) {
  if (depth == 0 || rng.below(3) == 0) {
    if (bound.is_zero() || rng.below(5) == 0) {
      return Term::zero();
    }
    auto pool = candidate_points(bound);
    pool.insert(pool.begin(), Ordinal{});
    return Term::var(pool[rng.below(pool.size())]);
  }
  switch (rng.below(3)) {
  case 0:
    return Term::plus(random_finitary_term(rng, modulus, bound, depth - 1),
                      random_finitary_term(rng, modulus, bound, depth - 1));
  case 1:
    return Term::neg(random_finitary_term(rng, modulus, bound, depth - 1));
  default:
    return Term::scal(rng.below(modulus), random_finitary_term(rng, modulus, bound, depth - 1));
  }
}

} // namespace limterm
