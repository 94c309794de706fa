#include "generators.hpp"

#include "limterm/eval.hpp"

#include <catch_amalgamated.hpp>

#include <numeric>
#include <set>

using namespace limterm;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }
Term T(const char* s) { return Term::parse(s); }

Homomorphism times(std::uint64_t r, const FiniteModule& m) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < m.shape().size(); ++i) {
    Element e = m.zero_element();
    e[i] = 1;
    gens.push_back(m.scale(r, e));
  }
  return Homomorphism::from_generators(m, m, gens);
}

// Brute-force submodule generated by a set: close under addition from 0.
std::set<std::size_t> closure(const FiniteModule& m, const std::vector<std::size_t>& gens) {
  std::set<std::size_t> s{m.index_of(m.zero_element())};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto a : std::vector<std::size_t>(s.begin(), s.end())) {
      for (auto g : gens) {
        if (s.insert(m.index_of(m.add(m.element_at(a), m.element_at(g)))).second) grew = true;
      }
    }
  }
  return s;
}

} // namespace

TEST_CASE("carrier sizes") {
  CHECK(FiniteModule({2, 4}).size() == 8);
  CHECK(FiniteModule::zero().size() == 1);
  CHECK(product({FiniteModule::cyclic(2), FiniteModule::cyclic(2), FiniteModule::cyclic(3)}).size() == 12);
  CHECK(FiniteModule({2, 4}).to_string() == "Z/2 x Z/4");
  CHECK(FiniteModule({2, 4}).exponent() == 4);
  CHECK(to_string(parse_instance("free(add-inf mod 2, w)")) == "free(add-inf mod 2, w)");
  CHECK_THROWS_AS(elements(parse_instance("free(add mod 3, 2)")), Error);
}

TEST_CASE("element indexing is a bijection") {
  for (const auto& m : {FiniteModule({2, 4}), FiniteModule({3}), FiniteModule({2, 2, 3})}) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      CHECK(m.index_of(m.element_at(i)) == i);
      CHECK(m.parse_element(m.format_element(m.element_at(i))) == m.element_at(i));
    }
  }
}

TEST_CASE("images") {
  const auto z4 = FiniteModule::cyclic(4);
  const auto im = image(times(2, z4));
  CHECK(im.module.size() == 2);
  CHECK(image(Homomorphism::zero(FiniteModule::cyclic(3), FiniteModule::cyclic(3))).module.size() == 1);
  CHECK(image(Homomorphism::identity(FiniteModule::cyclic(6))).module.size() == 6);
  CHECK(compose(im.inclusion, im.corestriction) == times(2, z4));
}

TEST_CASE("regular epimorphisms") {
  const auto z4 = FiniteModule::cyclic(4);
  const auto z2 = FiniteModule::cyclic(2);
  CHECK(is_regular_epi(Homomorphism::from_generators(z4, z2, {Element{1}})));
  CHECK_FALSE(is_regular_epi(times(2, z4)));
  CHECK(is_regular_epi(Homomorphism::identity(z4)));
}

TEST_CASE("non-homomorphisms are rejected with a witness") {
  const auto z4 = FiniteModule::cyclic(4);
  const auto z2 = FiniteModule::cyclic(2);
  const auto v = find_hom_violation(z4, z2, {0, 1, 1, 0});
  REQUIRE(v.has_value());
  const auto sum = z4.index_of(z4.add(z4.element_at(v->a), z4.element_at(v->b)));
  const std::vector<std::size_t> table{0, 1, 1, 0};
  CHECK((table[v->a] + table[v->b]) % 2 != table[sum]);
  try {
    (void)Homomorphism::from_table(z4, z2, {0, 1, 1, 0});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHomomorphism);
  }
  CHECK_THROWS_AS(Homomorphism::from_generators(z2, z4, {Element{1}}), Error);
}

TEST_CASE("random homomorphisms satisfy the laws and first isomorphism theorem") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto a = gen::random_module(rng);
    const auto b = gen::random_module(rng);
    std::vector<std::size_t> table(a.size());
    for (auto& x : table) x = rng.below(b.size());
    const auto bad = find_hom_violation(a, b, table);
    bool brute_ok = true;
    for (std::size_t x = 0; x < a.size(); ++x) {
      for (std::size_t y = 0; y < a.size(); ++y) {
        const auto s = a.index_of(a.add(a.element_at(x), a.element_at(y)));
        if (b.index_of(b.add(b.element_at(table[x]), b.element_at(table[y]))) != table[s]) brute_ok = false;
      }
    }
    CHECK(bad.has_value() != brute_ok);
  }
  for (int i = 0; i < 200; ++i) {
    const auto a = gen::random_module(rng);
    const auto b = gen::random_module(rng);
    std::vector<Element> gens;
    for (std::size_t k = 0; k < a.shape().size(); ++k) {
      // A generator of order n_k must go to an element killed by n_k.
      Element e = gen::random_element(rng, b);
      while (b.scale(a.shape()[k], e) != b.zero_element()) e = gen::random_element(rng, b);
      gens.push_back(e);
    }
    const auto f = Homomorphism::from_generators(a, b, gens);
    std::size_t kernel = 0;
    std::set<std::size_t> hit;
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (f.apply_index(x) == b.index_of(b.zero_element())) ++kernel;
      hit.insert(f.apply_index(x));
    }
    const auto im = image(f);
    CHECK(im.module.size() == hit.size());
    CHECK(im.module.size() * kernel == a.size());
    CHECK(is_regular_epi(f) == (hit.size() == b.size()));
  }
}

TEST_CASE("spans, submodules and quotients") {
  Rng rng(42);
  for (int i = 0; i < 150; ++i) {
    const auto m = gen::random_module(rng);
    std::vector<std::size_t> gens;
    for (std::uint64_t k = rng.below(3); k > 0; --k) gens.push_back(rng.below(m.size()));
    const auto sp = span(m, gens);
    const auto brute = closure(m, gens);
    CHECK(std::vector<std::size_t>(brute.begin(), brute.end()) == sp);
    const auto sub = submodule(m, sp);
    CHECK(sub.module.size() == sp.size());
    const auto& d = sub.module.shape();
    for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] % d[k - 1] == 0);
    std::set<std::size_t> included;
    for (std::size_t x = 0; x < sub.module.size(); ++x) included.insert(sub.inclusion.apply_index(x));
    CHECK(included == brute);
    const auto q = quotient(m, sp);
    CHECK(q.module.size() * sp.size() == m.size());
    CHECK(is_regular_epi(q.projection));
    for (auto s : sp) CHECK(q.projection.apply_index(s) == q.module.index_of(q.module.zero_element()));
  }
  const auto z4 = FiniteModule::cyclic(4);
  CHECK_THROWS_AS(submodule(z4, {0, 1}), Error);
}

TEST_CASE("sums of finite-support families") {
  const auto z4 = FiniteModule::cyclic(4);
  CHECK(infinitary_sum(z4, parse_assignment("[0,1)->1; [1,w)->0; [w,w+1)->2", z4)) == Element{3});
  try {
    (void)infinitary_sum(FiniteModule::cyclic(2), PwcSeq<Element>::constant(O("w"), Element{1}));
    FAIL("summed a divergent family");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivergentSum);
  }
  const FreeModule free{Theory::additive(2, true), O("w")};
  CHECK(infinitary_sum(free, Family::identity(O("w"))) == T("(sum w basis)"));
}

TEST_CASE("evaluation examples") {
  const auto z4 = FiniteModule::cyclic(4);
  const auto asg = PwcSeq<Element>::from_support(O("w"), {{2, Element{1}}, {5, Element{2}}}, Element{0});
  CHECK(eval(T("(sum w basis)"), z4, asg) == Element{3});
  try {
    (void)eval(T("(sum w [0,w)->x0)"), FiniteModule::cyclic(2), PwcSeq<Element>::constant(1, Element{1}));
    FAIL("summed a divergent family");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivergentSum);
  }
  CHECK(eval(T("x[w]"), z4, parse_assignment("[0,w)->0; [w,w+1)->3", z4)) == Element{3});
  const auto z3 = FiniteModule::cyclic(3);
  const FreeExtension f(z3, parse_assignment("[0,1)->1; [1,2)->2", z3));
  CHECK(f(T("(+ x0 x1)")) == Element{0});
  CHECK(f(T("x1")) == Element{2});
  const FreeExtension g(FiniteModule::cyclic(2), PwcSeq<Element>::from_support(O("w"), {{4, Element{1}}}, Element{0}));
  CHECK(g(T("(sum w basis)")) == Element{1});
  CHECK_THROWS_AS(eval(T("(sum w basis)"), z4, asg, Theory::parse("add mod 4")), Error);
  CHECK_THROWS_AS(eval(T("x0"), z4, asg, Theory::parse("add mod 3")), Error);
  CHECK_THROWS_AS(eval(T("x[w]"), z4, asg), Error);
}

TEST_CASE("evaluation of finitary terms agrees with a direct interpreter") {
  Rng rng(43);
  std::function<Element(const Term&, const FiniteModule&, const PwcSeq<Element>&)> direct =
      [&](const Term& t, const FiniteModule& m, const PwcSeq<Element>& a) -> Element {
    if (t.kind() == Term::Kind::Var) return a.value_at(t.var_index());
    if (t.symbol() == "zero") return m.zero_element();
    if (t.symbol() == "+") return m.add(direct(t.args()[0], m, a), direct(t.args()[1], m, a));
    if (t.symbol() == "-") return m.neg(direct(t.args()[0], m, a));
    return m.scale(t.param(), direct(t.args()[0], m, a));
  };
  for (int i = 0; i < 500; ++i) {
    const auto m = gen::random_module(rng);
    const auto x = gen::random_positive_ordinal(rng);
    const auto t = gen::random_term(rng, x, 4, false);
    const auto a = gen::random_family(rng, m, x);
    CHECK(eval(t, m, a) == direct(t, m, a));
  }
}

TEST_CASE("evaluation commutes with substitution") {
  Rng rng(44);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_module(rng);
    const auto x = gen::random_positive_ordinal(rng);
    const std::uint64_t y = 1 + rng.below(4);
    const auto t = gen::random_term(rng, x, 3, false);
    const Family sigma = gen::random_seq<Term>(rng, x, 3, [&] { return gen::random_term(rng, y, 2, false); });
    const auto a = gen::random_family(rng, m, y);
    const auto inner = sigma.pieces().map([&](const Term& s) { return eval(s, m, a); });
    CHECK(eval(substitute(t, sigma), m, a) == eval(t, m, inner));
  }
}
