#include "generators.hpp"

#include "limterm/error.hpp"
#include "limterm/ordinal.hpp"

#include <catch_amalgamated.hpp>

using namespace limterm;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

// Addition on the coefficient model: the terms of a below b's leading exponent are absorbed.
gen::Cnf model_add(const gen::Cnf& a, const gen::Cnf& b) {
  std::size_t lead = b.size();
  for (std::size_t e = b.size(); e-- > 0;) {
    if (b[e] != 0) {
      lead = e;
      break;
    }
  }
  if (lead == b.size()) return a;
  gen::Cnf out(a.size(), 0);
  for (std::size_t e = lead; e < a.size(); ++e) out[e] = a[e];
  for (std::size_t e = 0; e <= lead; ++e) out[e] += b[e];
  return out;
}

int model_compare(const gen::Cnf& a, const gen::Cnf& b) {
  for (std::size_t e = a.size(); e-- > 0;) {
    if (a[e] != b[e]) return a[e] < b[e] ? -1 : 1;
  }
  return 0;
}

} // namespace

TEST_CASE("ordinal comparison examples") {
  CHECK(O("0") < O("1"));
  CHECK(O("w") == O("w"));
  CHECK(O("w+1") < O("w*2"));
  CHECK(O("w^w") > O("w^5*9+3"));
  CHECK(O("w^(w+1)") > O("w^w*7"));
}

TEST_CASE("ordinal addition examples") {
  CHECK(O("1") + O("w") == O("w"));
  CHECK(O("w") + O("1") == O("w+1"));
  CHECK(O("w+3") + O("w") == O("w*2"));
  CHECK((O("w^2+w") + O("w^2*2+5")).to_string() == "w^2*3+5");
  CHECK(O("1+w") == O("w"));
}

TEST_CASE("classification examples") {
  CHECK(classify(O("w")).kind == OrdinalKind::Limit);
  const auto c = classify(O("w^2+5"));
  REQUIRE(c.kind == OrdinalKind::Successor);
  CHECK(*c.predecessor == O("w^2+4"));
  CHECK(classify(O("0")).kind == OrdinalKind::Zero);
  CHECK_FALSE(classify(O("0")).predecessor.has_value());
}

TEST_CASE("left subtraction examples") {
  CHECK(left_subtract(O("w"), O("w*2")) == O("w"));
  CHECK(left_subtract(O("3"), O("w")) == O("w"));
  CHECK(left_subtract(O("w+1"), O("w+4")) == O("3"));
  try {
    (void)left_subtract(O("w+1"), O("w"));
    FAIL("expected Underflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Underflow);
  }
}

TEST_CASE("interval cardinality examples") {
  CHECK(interval_cardinality(O("w"), O("w+3")) == std::optional<std::uint64_t>{3});
  CHECK_FALSE(interval_cardinality(O("0"), O("w")).has_value());
  CHECK_FALSE(interval_cardinality(O("w"), O("w*2")).has_value());
  CHECK_THROWS_AS(interval_cardinality(O("w+1"), O("w")), Error);
}

TEST_CASE("parse errors are reported") {
  for (const char* bad : {"", "w+", "w^", "x", "3*w", "w*0", "(w", "w^(2"}) {
    INFO(bad);
    try {
      (void)O(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
    }
  }
}

TEST_CASE("addition and order agree with the coefficient model") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = gen::random_cnf(rng);
    const auto b = gen::random_cnf(rng);
    INFO(gen::cnf_text(a) << " , " << gen::cnf_text(b));
    CHECK(gen::ordinal_of(a) + gen::ordinal_of(b) == gen::ordinal_of(model_add(a, b)));
    const int cmp = model_compare(a, b);
    const auto ord = gen::ordinal_of(a) <=> gen::ordinal_of(b);
    CHECK((cmp < 0) == (ord < 0));
    CHECK((cmp == 0) == (ord == 0));
  }
}

TEST_CASE("text round trip") {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto a = gen::random_ordinal(rng);
    CHECK(Ordinal::parse(a.to_string()) == a);
  }
  const auto big = O("w^(w^2+1)*3+w^w+7");
  CHECK(Ordinal::parse(big.to_string()) == big);
}

TEST_CASE("addition laws") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto a = gen::random_ordinal(rng);
    const auto b = gen::random_ordinal(rng);
    const auto c = gen::random_ordinal(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + Ordinal{} == a);
    CHECK(Ordinal{} + a == a);
    CHECK(a <= a + b);
    CHECK(b <= a + b);
    if (b < c) CHECK(a + b < a + c);
  }
}

TEST_CASE("left subtraction inverts addition") {
  Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    const auto a = gen::random_ordinal(rng);
    const auto g = gen::random_ordinal(rng);
    CHECK(left_subtract(a, a + g) == g);
    const auto b = gen::random_ordinal(rng);
    if (a <= b) CHECK(a + left_subtract(a, b) == b);
  }
}

TEST_CASE("classification and finite tails are consistent") {
  Rng rng(15);
  for (int i = 0; i < 1000; ++i) {
    const auto a = gen::random_ordinal(rng);
    const auto c = classify(a);
    const auto [lambda, n] = split_finite_tail(a);
    CHECK(lambda + n == a);
    CHECK((lambda.is_zero() || lambda.is_limit()));
    switch (c.kind) {
    case OrdinalKind::Zero:
      CHECK(a.is_zero());
      break;
    case OrdinalKind::Successor:
      CHECK(c.predecessor->successor() == a);
      CHECK(n > 0);
      break;
    case OrdinalKind::Limit:
      CHECK(n == 0);
      CHECK(a.is_limit());
      break;
    }
    const auto m = gen::random_ordinal(rng);
    const auto card = interval_cardinality(a, a + m);
    CHECK(card.has_value() == m.is_finite());
    if (card) CHECK(Ordinal{*card} == m);
  }
}
