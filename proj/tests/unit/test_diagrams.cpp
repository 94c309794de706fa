#include "generators.hpp"

#include "limterm/diagrams.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace limterm;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

const FiniteModule Z2 = FiniteModule::cyclic(2);
const FiniteModule Z4 = FiniteModule::cyclic(4);

Homomorphism times(std::uint64_t r, const FiniteModule& m) { return Homomorphism::from_generators(m, m, {Element{r}}); }
Homomorphism reduce(const FiniteModule& from, const FiniteModule& to) {
  return Homomorphism::from_generators(from, to, {Element{1}});
}

// Elements of the deepest sampled level pushed down to the last prefix level one map at a time.
std::vector<std::size_t> brute_stable_image(const InverseSystem& sys, std::size_t periods) {
  const auto n = sys.prefix_length();
  const auto top = n - 1 + sys.tail()->period * periods;
  std::set<std::size_t> s;
  for (std::size_t i = 0; i < sys.level(top).size(); ++i) s.insert(i);
  for (std::size_t k = top; k-- > n - 1;) {
    std::set<std::size_t> next;
    for (auto i : s) next.insert(sys.map(k).apply_index(i));
    s = std::move(next);
  }
  return {s.begin(), s.end()};
}

// Compatible tuples in the product of the levels of a finite system.
std::size_t brute_thread_count(const InverseSystem& sys) {
  const auto n = sys.prefix_length();
  std::size_t count = 0;
  std::vector<std::size_t> tuple(n, 0);
  while (true) {
    bool ok = true;
    for (std::size_t k = 0; k + 1 < n && ok; ++k) ok = sys.map(k).apply_index(tuple[k + 1]) == tuple[k];
    if (ok) ++count;
    std::size_t k = 0;
    while (k < n && ++tuple[k] == sys.level(k).size()) tuple[k++] = 0;
    if (k == n) return count;
  }
}

InverseSystem random_finite_system(Rng& rng, std::size_t n) {
  std::vector<FiniteModule> levels;
  std::vector<Homomorphism> maps;
  for (std::size_t k = 0; k < n; ++k) levels.push_back(gen::random_module(rng));
  for (std::size_t k = 0; k + 1 < n; ++k) maps.push_back(random_hom(rng, levels[k + 1], levels[k]));
  return InverseSystem::finite(levels, maps);
}

} // namespace

TEST_CASE("shriek systems") {
  const auto a = beta_shriek(Z2, 0, 3);
  REQUIRE(a.prefix_length() == 3);
  CHECK(a.level(0) == Z2);
  CHECK(a.level(1).size() == 1);
  CHECK(a.level(2).size() == 1);
  const auto b = beta_shriek(Z4, 2, 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(b.level(k) == Z4);
  for (std::size_t k = 0; k < 2; ++k) CHECK(b.map(k) == Homomorphism::identity(Z4));
  CHECK_NOTHROW(beta_shriek_morphism(Z4, 0, 2, 3));
  CHECK_NOTHROW(beta_shriek_morphism(Z4, 1, 3, Ordinal::omega()));
  CHECK_THROWS_AS(beta_shriek_morphism(Z4, 2, 1, 3), Error);
}

TEST_CASE("limits of shriek systems") {
  for (std::size_t beta = 0; beta < 4; ++beta) {
    CHECK(limit_object(beta_shriek(Z4, beta, 4)).module.size() == (beta == 3 ? 4U : 1U));
    CHECK(limit_object(beta_shriek(Z4, beta, Ordinal::omega())).module.size() == 1);
  }
}

TEST_CASE("morphisms out of a shriek system are torsion elements at beta") {
  Rng rng(61);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng.below(3);
    const auto sys = random_finite_system(rng, n);
    const std::size_t beta = rng.below(n);
    const std::uint64_t order = 2 + rng.below(3);
    const auto cyc = FiniteModule::cyclic(order);
    const auto source = beta_shriek(cyc, beta, n);
    std::size_t morphisms = 0;
    std::vector<std::size_t> pick(beta + 1, 0);
    while (true) {
      try {
        std::vector<Homomorphism> levels;
        for (std::size_t k = 0; k < n; ++k) {
          levels.push_back(k <= beta ? Homomorphism::from_generators(cyc, sys.level(k), {sys.level(k).element_at(pick[k])})
                                     : Homomorphism::zero(source.level(k), sys.level(k)));
        }
        SystemMorphism f{source, sys, levels};
        ++morphisms;
      } catch (const Error&) {
      }
      std::size_t k = 0;
      while (k <= beta && ++pick[k] == sys.level(k).size()) pick[k++] = 0;
      if (k > beta) break;
    }
    std::size_t torsion = 0;
    const auto& mb = sys.level(beta);
    for (const auto& x : mb.elements()) torsion += mb.scale(order, x) == mb.zero_element() ? 1 : 0;
    CHECK(morphisms == torsion);
  }
}

TEST_CASE("limit examples") {
  const auto constant = InverseSystem::constant_tail({Z4}, {});
  const auto c = limit_object(constant);
  CHECK(c.module.size() == 4);
  CHECK(c.depth == 0);
  const auto tower = InverseSystem::constant_tail({Z2, Z4}, {reduce(Z4, Z2)});
  CHECK(limit_object(tower).module.size() == 4);
  CHECK(brute_stable_image(tower, 3).size() == 4);
  const auto doubling = InverseSystem::constant_tail({Z4}, {}, times(2, Z4));
  const auto d = limit_object(doubling);
  CHECK(d.module.size() == 1);
  CHECK(d.depth == 2);
  CHECK_THROWS_AS(limit_object(doubling, 1), Error);
}

TEST_CASE("limits of finite systems count compatible tuples") {
  Rng rng(62);
  for (int i = 0; i < 100; ++i) {
    const auto sys = random_finite_system(rng, 1 + rng.below(4));
    CHECK(limit_object(sys).module.size() == brute_thread_count(sys));
  }
}

TEST_CASE("limits of omega systems agree with brute-force images") {
  Rng rng(63);
  for (int i = 0; i < 200; ++i) {
    const auto sys = random_system(rng);
    const auto lim = limit_object(sys);
    auto stable = lim.stable_image;
    std::sort(stable.begin(), stable.end());
    CHECK(stable == brute_stable_image(sys, 20));
    CHECK(lim.module.size() == stable.size());
    for (const auto& x : lim.module.elements()) {
      for (std::size_t k = 0; k < sys.prefix_length() + 3 * sys.tail()->period; ++k) {
        CHECK(sys.map(k)(lim.component(sys, x, k + 1)) == lim.component(sys, x, k));
      }
      CHECK(lim.from_head(lim.head(x)) == std::optional<Element>{x});
    }
  }
}

TEST_CASE("surjectivity on limits") {
  const auto a = InverseSystem::constant_tail({Z4}, {});
  const auto b = InverseSystem::constant_tail({Z2}, {});
  const auto q = SystemMorphism{a, b, {reduce(Z4, Z2)}};
  CHECK(check_inverse_limit_surjectivity(q).pass);
  try {
    (void)check_inverse_limit_surjectivity(SystemMorphism{a, a, {times(2, Z4)}});
    FAIL("accepted a non-epi level");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LevelwiseNotEpi);
  }
  const auto two = InverseSystem::finite({Z4, Z4}, {Homomorphism::identity(Z4)});
  CHECK_THROWS_AS((SystemMorphism{two, two, {Homomorphism::identity(Z4), times(3, Z4)}}), Error);

  Rng rng(64);
  for (int i = 0; i < 100; ++i) {
    const auto f = random_quotient_morphism(rng);
    const auto r = check_inverse_limit_surjectivity(f);
    CHECK(r.pass);
    CHECK(r.source_depth <= 4);
    const auto ls = limit_object(f.source());
    const auto lt = limit_object(f.target());
    const auto g = induced_map(f, ls, lt);
    CHECK(is_regular_epi(g));
  }
}

TEST_CASE("file round trip") {
  Rng rng(65);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_quotient_morphism(rng);
    const auto text = morphism_to_json(f);
    CHECK(morphism_to_json(parse_morphism_json(text)) == text);
    const auto s = system_to_json(f.source());
    CHECK(system_to_json(parse_system_json(s)) == s);
  }
  const std::string repeat = R"({"index":"w","prefix":["Z/2","Z/4","Z/4"],"maps":[[0,1,0,1],[0,3,2,1]],
    "tail":"repeat-last-block","block":2,"closing_map":[0,3,2,1]})";
  const auto sys = parse_system_json(repeat);
  CHECK(sys.tail()->period == 2);
  CHECK(sys.level(5) == Z4);
  CHECK(limit_object(sys).module.size() == 4);
  try {
    (void)parse_system_json(R"({"index":"2","prefix":["Z/2","Z/3"],"maps":[[0,1]]})");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("/maps/0") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_system_json("{\"index\": "), Error);
}

TEST_CASE("retraction of the product onto the limit") {
  const auto inf = Theory::additive(4, true);
  const auto constant = InverseSystem::constant_tail({Z4}, {});
  const auto lim = limit_object(constant);
  for (const auto& c : Z4.elements()) {
    const auto r = retract(constant, lim, ProductElement{{}, c}, inf);
    REQUIRE(r.thread.has_value());
    CHECK(lim.head(*r.thread) == c);
  }
  CHECK_THROWS_AS(retract(constant, lim, ProductElement{{}, Element{1}}, Theory::additive(4, false)), Error);

  Rng rng(66);
  for (int i = 0; i < 30; ++i) {
    const auto sys = random_system(rng);
    const auto th = Theory::additive(system_exponent(sys), true);
    CHECK(lim_to_prod_section_check(sys, th, rng).pass);
    const auto fin = random_finite_system(rng, 1 + rng.below(3));
    CHECK(lim_to_prod_section_check(fin, Theory::additive(system_exponent(fin), true), rng).pass);
    const auto f = random_quotient_morphism(rng);
    CHECK(retraction_naturality_check(f, Theory::additive(system_exponent(f.source()), true), rng).pass);
  }
}

TEST_CASE("key diagram") {
  Rng rng(67);
  const auto battery = standard_battery();
  CHECK(key_diagram_check(Theory::additive(2, true), O("w"), battery, rng).exact);
  CHECK_FALSE(key_diagram_check(Theory::additive(2, false), O("w"), battery, rng).exact);
  CHECK(key_diagram_check(Theory::additive(3, false), 4, battery, rng).exact);
}
