#include "generators.hpp"

#include "limterm/eval.hpp"
#include "limterm/transfinite.hpp"

#include <catch_amalgamated.hpp>

using namespace limterm;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

// lim over a finite prefix, straight from the recursion lim_b = sum_{g<b} (s_g - lim_g).
Element dense_lim(const FiniteModule& m, const std::vector<Element>& s) {
  std::vector<Element> lim{m.zero_element()};
  for (std::size_t b = 1; b <= s.size(); ++b) {
    Element acc = m.zero_element();
    for (std::size_t g = 0; g < b; ++g) acc = m.add(acc, m.sub(s[g], lim[g]));
    lim.push_back(acc);
  }
  return lim.back();
}

std::vector<Element> expand(const PwcSeq<Element>& s) {
  std::vector<Element> out;
  for (std::uint64_t i = 0; i < *s.length().finite_value(); ++i) out.push_back(s.value_at(i));
  return out;
}

// Direct sum over the support.
Element direct_sum(const FiniteModule& m, const PwcSeq<Element>& s) {
  Element acc = m.zero_element();
  const auto support = s.support_if_finite(m.zero_element());
  for (const auto& [i, v] : *support) acc = m.add(acc, v);
  return acc;
}

PwcSeq<Element> random_support(Rng& rng, const FiniteModule& m, const Ordinal& len, std::size_t k) {
  std::vector<std::pair<Ordinal, Element>> entries;
  for (const auto& p : gen::points_below(rng, len, k)) {
    if (rng.coin()) entries.push_back({p, gen::random_element(rng, m)});
  }
  return PwcSeq<Element>::from_support(len, entries, m.zero_element());
}

} // namespace

TEST_CASE("limits of finite families are the last entry") {
  Rng rng(51);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_module(rng);
    const auto s = gen::random_family(rng, m, 1 + rng.below(8));
    const auto d = expand(s);
    CHECK(lim_eval(m, s) == dense_lim(m, d));
    CHECK(lim_eval(m, s) == d.back());
  }
}

TEST_CASE("limit examples") {
  const auto z4 = FiniteModule::cyclic(4);
  CHECK(lim_eval(z4, PwcSeq<Element>::constant(O("w^2"), Element{3})) == Element{3});
  const auto s = parse_assignment("[0,w)->1; [w,w*2)->3", z4);
  // Difference sequence of s against its running limit: s_0 at 0, b - a at w, zero elsewhere.
  const auto diff = PwcSeq<Element>::from_support(O("w*2"), {{0, Element{1}}, {O("w"), z4.sub(Element{3}, Element{1})}},
                                                  z4.zero_element());
  CHECK(lim_eval(z4, s) == direct_sum(z4, diff));
  CHECK(lim_eval(z4, s) == Element{3});
  CHECK(lim_eval(z4, PwcSeq<Element>{}) == Element{0});
}

TEST_CASE("the recursion agrees with the last piece on every length") {
  Rng rng(52);
  for (int i = 0; i < 500; ++i) {
    const auto m = gen::random_module(rng);
    const auto s = gen::random_family(rng, m, gen::random_positive_ordinal(rng), 5);
    INFO(format_assignment(s, m));
    CHECK(lim_eval(m, s) == lim_eval_telescoped(m, s));
    CHECK(lim_eval(m, s) == s.pieces().back().value);
  }
}

TEST_CASE("sums examples") {
  const auto z6 = FiniteModule::cyclic(6);
  const auto s = PwcSeq<Element>::from_support(O("w"), {{2, Element{1}}, {5, Element{4}}}, Element{0});
  CHECK(sum_eval_from_lim(z6, s) == Element{5});
  CHECK(sum_eval_from_lim(z6, PwcSeq<Element>::constant(O("w"), Element{0})) == Element{0});
  CHECK(sum_eval_from_lim(z6, PwcSeq<Element>::from_support(O("w+1"), {{O("w"), Element{2}}}, Element{0})) ==
        Element{2});
  CHECK_THROWS_AS(sum_eval_from_lim(z6, PwcSeq<Element>::constant(O("w"), Element{1})), Error);
}

TEST_CASE("sums through limits agree with direct sums") {
  Rng rng(53);
  for (int i = 0; i < 500; ++i) {
    const auto m = gen::random_module(rng);
    const auto s = random_support(rng, m, gen::random_positive_ordinal(rng), 6);
    INFO(format_assignment(s, m));
    const auto d = direct_sum(m, s);
    CHECK(sum_eval_from_lim(m, s) == d);
    CHECK(infinitary_sum(m, s) == d);
    CHECK(eval(build_sum_term(s.length()), m, s) == d);
  }
}

TEST_CASE("restricted sums") {
  const auto z4 = FiniteModule::cyclic(4);
  CHECK(restrict_sum(O("w"), 3)(z4, parse_assignment("[0,1)->1; [1,2)->2; [2,3)->3", z4)) == Element{2});
  const auto s = PwcSeq<Element>::from_support(O("w"), {{1, Element{3}}, {7, Element{3}}}, Element{0});
  CHECK(restrict_sum(O("w*2"), O("w"))(z4, s) == infinitary_sum(z4, s));
  CHECK_THROWS_AS(restrict_sum(O("w*2"), O("w"))(z4, PwcSeq<Element>::constant(O("w"), Element{1})), Error);
  CHECK_THROWS_AS(restrict_sum(O("w"), O("w")), Error);
  Rng rng(54);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_module(rng);
    const auto alpha = gen::random_positive_ordinal(rng);
    const auto pts = gen::points_below(rng, alpha, 4);
    const auto& beta = pts[rng.below(pts.size())];
    if (beta.is_zero()) continue;
    const auto t = random_support(rng, m, beta, 4);
    CHECK(restrict_sum(alpha, beta)(m, t) == direct_sum(m, t));
  }
}

TEST_CASE("limit terms") {
  CHECK_THROWS_AS(build_lim_term(0), Error);
  const auto one = build_lim_term(1);
  const auto z4 = FiniteModule::cyclic(4);
  CHECK(eval(one, z4, PwcSeq<Element>::constant(1, Element{3})) == Element{3});
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    const auto m = gen::random_module(rng);
    const auto alpha = gen::random_positive_ordinal(rng);
    const auto s = gen::random_family(rng, m, alpha);
    CHECK(eval(build_lim_term(alpha), m, s) == lim_eval(m, s));
  }
  const FreeModule fin{Theory::additive(2, false), O("w")};
  CHECK_THROWS_AS(lim_eval(fin, Family::identity(O("w"))), Error);
}

TEST_CASE("L1 and L2 hold for lim and fail for impostors") {
  const auto battery = standard_battery();
  for (const char* a : {"1", "3", "w", "w+3", "w^2+1", "w*2"}) {
    Rng rng(56);
    INFO(a);
    L1Options opts;
    opts.trials = 30;
    CHECK(check_L1(lim_evaluator(), O(a), battery, opts, rng).pass);
    CHECK(check_L2(lim_evaluator(), O(a), battery).pass);
  }
  Rng rng(57);
  const Evaluator first = [](const FiniteModule&, const PwcSeq<Element>& s) { return s.value_at(0); };
  const auto l1 = check_L1(first, O("w"), battery, {}, rng);
  REQUIRE_FALSE(l1.pass);
  REQUIRE(l1.witness.has_value());
  CHECK(l1.witness->first.final_segment(l1.witness->beta) == l1.witness->second.final_segment(l1.witness->beta));
  CHECK(first(l1.witness->instance, l1.witness->first) != first(l1.witness->instance, l1.witness->second));

  const Evaluator zero = [](const FiniteModule& m, const PwcSeq<Element>&) { return m.zero_element(); };
  const auto l2 = check_L2(zero, O("w"), battery);
  REQUIRE_FALSE(l2.pass);
  CHECK(l2.witness->instance == FiniteModule::cyclic(2));
  CHECK(l2.witness->constant == Element{1});
}

TEST_CASE("finitary limit terms exist only at successors") {
  CHECK(std::holds_alternative<RefutationCertificate>(refute_limit_term_finitary(2, O("w"))));
  const auto five = refute_limit_term_finitary(2, 5);
  REQUIRE(std::holds_alternative<LimitTermExists>(five));
  CHECK(std::get<LimitTermExists>(five).term == Term::var(4));
  CHECK(std::holds_alternative<LimitTermExists>(refute_limit_term_finitary(1, O("w"))));

  Rng rng(58);
  for (std::uint64_t n = 2; n <= 6; ++n) {
    for (const char* a : {"w", "w*2", "w^2"}) {
      const auto verdict = refute_limit_term_finitary(n, O(a));
      REQUIRE(std::holds_alternative<RefutationCertificate>(verdict));
      const auto& cert = std::get<RefutationCertificate>(verdict);
      const auto m = FiniteModule::cyclic(n);
      for (int i = 0; i < 20; ++i) {
        const auto bound = gen::points_below(rng, O(a), 4).back() + 1;
        const auto t = gen::random_term(rng, bound, 3, false);
        const auto inst = cert.instantiate(t);
        CHECK(inst.refutes());
        CHECK(inst.out_constant == eval(t, m, inst.constant_one));
        CHECK(inst.out_zero_below == eval(t, m, inst.zero_below_bound));
        CHECK(inst.constant_one.final_segment(inst.bound) == inst.zero_below_bound.final_segment(inst.bound));
      }
    }
  }
}
