#include "generators.hpp"

#include "limterm/eval.hpp"

#include <catch_amalgamated.hpp>

using namespace limterm;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }
Term T(const char* s) { return Term::parse(s); }

Family subst(const char* s) {
  return parse_pwc<Term>(s, [](std::string_view v) { return Term::parse(v); });
}

} // namespace

TEST_CASE("substitution examples") {
  CHECK(substitute(T("x0"), subst("[0,1)->x3")) == T("x3"));
  CHECK(substitute(T("(+ x0 x1)"), subst("[0,1)->zero; [1,2)->x2")) == T("(+ zero x2)"));
  CHECK(substitute(T("(sum w [0,w)->x0)"), subst("[0,1)->x1")) == T("(sum w [0,w)->x1)"));
  CHECK_THROWS_AS(substitute(T("x5"), subst("[0,3)->x0")), Error);
}

TEST_CASE("collapse examples") {
  CHECK(collapse_to_one(T("x[w^2+3]")) == T("x0"));
  CHECK(collapse_to_one(T("(+ x2 x5)")) == T("(+ x0 x0)"));
  const auto c = collapse_to_one(T("(sum w [0,1)->x0 [1,w)->zero)"));
  const auto m = FiniteModule::cyclic(2);
  CHECK(eval(c, m, PwcSeq<Element>::constant(1, Element{1})) == Element{1});
}

TEST_CASE("variable bound") {
  CHECK(variable_bound(T("zero")) == O("0"));
  CHECK(variable_bound(T("(+ x3 x1)")) == O("4"));
  CHECK(variable_bound(T("(sum w basis)")) == O("w"));
  CHECK(variable_bound(T("(lim w basis@w)")) == O("w*2"));
  CHECK(variable_bound(T("(sum w [0,2)->x[w] [2,w)->zero)")) == O("w+1"));
}

TEST_CASE("theories validate terms") {
  const auto fin = Theory::parse("add mod 4");
  const auto inf = Theory::parse("add-inf mod 4");
  const auto sig = Theory::parse("sig f/2 c/0");
  CHECK_NOTHROW(validate(T("(+ x0 (scal 3 x1))"), fin, 2));
  CHECK_THROWS_AS(validate(T("(sum w basis)"), fin, O("w")), Error);
  CHECK_NOTHROW(validate(T("(sum w basis)"), inf, O("w")));
  CHECK_THROWS_AS(validate(T("(sum w basis)"), inf, 5), Error);
  CHECK_NOTHROW(validate(T("(f x0 (c))"), sig, 1));
  CHECK_THROWS_AS(validate(T("(f x0)"), sig, 1), Error);
  CHECK(sig.arity_of("f") == std::optional<std::size_t>{2});
  CHECK(Theory::parse(inf.to_string()) == inf);
}

TEST_CASE("term parse errors") {
  for (const char* bad : {"", "(+ x0", "(sum w)", "x", "(sum w [0,3)->x0)", "(lim 0 basis) junk"}) {
    INFO(bad);
    try {
      (void)T(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::InvalidSequence));
    }
  }
}

TEST_CASE("text round trip") {
  Rng rng(31);
  for (int i = 0; i < 400; ++i) {
    const auto t = gen::random_term(rng, gen::random_positive_ordinal(rng), 3, true);
    INFO(t.to_string());
    CHECK(Term::parse(t.to_string()) == t);
  }
}

TEST_CASE("substitution satisfies the monad laws") {
  Rng rng(32);
  for (int i = 0; i < 300; ++i) {
    const auto x = gen::random_positive_ordinal(rng);
    const auto y = gen::random_positive_ordinal(rng);
    const auto z = gen::random_positive_ordinal(rng);
    const auto t = gen::random_term(rng, x, 3, true);
    INFO(t.to_string());
    CHECK(substitute(t, Family::identity(x)) == t);
    const Family sigma = gen::random_seq<Term>(rng, x, 3, [&] { return gen::random_term(rng, y, 2, true); });
    const Family tau = gen::random_seq<Term>(rng, y, 3, [&] { return gen::random_term(rng, z, 2, true); });
    for (const auto& p : gen::points_below(rng, x, 3)) CHECK(substitute(Term::var(p), sigma) == sigma.at(p));
    CHECK(substitute(substitute(t, sigma), tau) == substitute(t, compose(sigma, tau)));
    CHECK(variable_bound(substitute(t, sigma)) <= y);
  }
}

TEST_CASE("collapse agrees with substituting the constant family") {
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const auto x = gen::random_positive_ordinal(rng);
    const auto t = gen::random_term(rng, x, 3, true);
    CHECK(collapse_to_one(t) == substitute(t, Family::constant(x, Term::var(0))));
    CHECK(variable_bound(collapse_to_one(t)) <= O("1"));
  }
}
