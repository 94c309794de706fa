#include "limterm/module.hpp"

#include "limterm/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

namespace limterm {

FiniteModule::FiniteModule(std::vector<std::uint64_t> shape) : shape_(std::move(shape)) {
  if (shape_.empty()) {
    shape_.push_back(1);
  }
  for (auto n : shape_) {
    if (n == 0) {
      fail(ErrorKind::InfiniteCarrier, "Z/0 is not a finite module");
    }
    size_ *= n;
  }
}

std::uint64_t FiniteModule::exponent() const {
  std::uint64_t e = 1;
  for (auto n : shape_) {
    e = std::lcm(e, n);
  }
  return e;
}

Element FiniteModule::add(const Element& a, const Element& b) const {
  Element out(shape_.size());
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    out[i] = (a[i] + b[i]) % shape_[i];
  }
  return out;
}

Element FiniteModule::neg(const Element& a) const {
  Element out(shape_.size());
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    out[i] = (shape_[i] - a[i]) % shape_[i];
  }
  return out;
}

Element FiniteModule::sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

Element FiniteModule::scale(std::uint64_t r, const Element& a) const {
  Element out(shape_.size());
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    out[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r % shape_[i]) * a[i]) % shape_[i]);
  }
  return out;
}

bool FiniteModule::contains(const Element& a) const {
  if (a.size() != shape_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (a[i] >= shape_[i]) {
      return false;
    }
  }
  return true;
}

std::size_t FiniteModule::index_of(const Element& a) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    idx = idx * shape_[i] + a[i];
  }
  return idx;
}

Element FiniteModule::element_at(std::size_t index) const {
  Element out(shape_.size());
  for (std::size_t i = shape_.size(); i-- > 0;) {
    out[i] = index % shape_[i];
    index /= shape_[i];
  }
  return out;
}

std::vector<Element> FiniteModule::elements() const {
  std::vector<Element> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    out.push_back(element_at(i));
  }
  return out;
}

std::string FiniteModule::to_string() const {
  std::string out;
  for (auto n : shape_) {
    if (!out.empty()) out += " x ";
    out += "Z/" + std::to_string(n);
  }
  return out;
}

std::string FiniteModule::format_element(const Element& a) const {
  if (a.size() == 1) {
    return std::to_string(a[0]);
  }
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(a[i]);
  }
  return out + ')';
}

Element FiniteModule::parse_element(std::string_view text) const {
  auto bad = [&](const std::string& why) -> Element {
    fail(ErrorKind::Parse, "element '" + std::string(text) + "' of " + to_string() + ": " + why);
  };
  std::string body;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) body += c;
  }
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
    body = body.substr(1, body.size() - 2);
  }
  Element out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = std::min(body.find(',', pos), body.size());
    const std::string part = body.substr(pos, comma - pos);
    if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return bad("expected a natural number component");
    }
    out.push_back(std::stoull(part));
    pos = comma + 1;
  }
  if (out.size() != shape_.size()) {
    return bad("expected " + std::to_string(shape_.size()) + " components");
  }
  // Components are reduced, so `5` in Z/4 means 1.
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] %= shape_[i];
  }
  return out;
}

FiniteModule product(const std::vector<FiniteModule>& factors) {
  std::vector<std::uint64_t> shape;
  for (const auto& f : factors) {
    shape.insert(shape.end(), f.shape().begin(), f.shape().end());
  }
  return FiniteModule{shape};
}

ModuleInstance parse_instance(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
  };
  s = trim(s);
  if (s.rfind("free(", 0) == 0) {
    if (s.back() != ')') {
      fail(ErrorKind::Parse, "instance '" + s + "': missing ')'");
    }
    const auto comma = s.rfind(',');
    if (comma == std::string::npos) {
      fail(ErrorKind::Parse, "instance '" + s + "': expected free(<theory>, <ordinal>)");
    }
    Theory theory = Theory::parse(trim(s.substr(5, comma - 5)));
    Ordinal vars = Ordinal::parse(trim(s.substr(comma + 1, s.size() - comma - 2)));
    return FreeModule{std::move(theory), std::move(vars)};
  }
  std::vector<std::uint64_t> shape;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto x = s.find(" x ", pos);
    const std::string part = trim(s.substr(pos, x == std::string::npos ? std::string::npos : x - pos));
    if (part.size() < 3 || part.rfind("Z/", 0) != 0 ||
        !std::all_of(part.begin() + 2, part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      fail(ErrorKind::Parse, "instance '" + s + "': expected Z/<n>, got '" + part + "'");
    }
    const auto n = std::stoull(part.substr(2));
    if (n == 0) {
      fail(ErrorKind::Parse, "instance '" + s + "': Z/0 is not finite");
    }
    shape.push_back(n);
    if (x == std::string::npos) break;
    pos = x + 3;
  }
  return FiniteModule{shape};
}

std::string to_string(const ModuleInstance& m) {
  if (const auto* f = std::get_if<FiniteModule>(&m)) {
    return f->to_string();
  }
  const auto& fm = std::get<FreeModule>(m);
  return "free(" + fm.theory.to_string() + ", " + fm.variables.to_string() + ")";
}

std::vector<Element> elements(const ModuleInstance& m) {
  if (const auto* f = std::get_if<FiniteModule>(&m)) {
    return f->elements();
  }
  fail(ErrorKind::InfiniteCarrier, "free module " + to_string(m) + " has no finite enumeration");
}

std::vector<FiniteModule> standard_battery() {
  return {FiniteModule::cyclic(2), FiniteModule::cyclic(3), FiniteModule::cyclic(4), FiniteModule{{2, 2}},
          FiniteModule::cyclic(6)};
}

// ---------------------------------------------------------------------------
// Homomorphisms

std::optional<HomViolation> find_hom_violation(const FiniteModule& domain, const FiniteModule& codomain,
                                               const std::vector<std::size_t>& table) {
  if (table.size() != domain.size()) {
    return HomViolation{0, 0, "table has " + std::to_string(table.size()) + " entries, domain has " +
                                  std::to_string(domain.size()) + " elements"};
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] >= codomain.size()) {
      return HomViolation{i, i, "image index " + std::to_string(table[i]) + " outside the codomain"};
    }
  }
  const auto elems = domain.elements();
  auto f = [&](const Element& x) { return codomain.element_at(table[domain.index_of(x)]); };
  if (table[domain.index_of(domain.zero_element())] != codomain.index_of(codomain.zero_element())) {
    return HomViolation{0, 0, "f(0) != 0"};
  }
  for (std::size_t a = 0; a < elems.size(); ++a) {
    if (f(domain.neg(elems[a])) != codomain.neg(f(elems[a]))) {
      return HomViolation{a, a, "f(-a) != -f(a)"};
    }
    for (std::size_t b = a; b < elems.size(); ++b) {
      if (f(domain.add(elems[a], elems[b])) != codomain.add(f(elems[a]), f(elems[b]))) {
        return HomViolation{a, b, "f(a+b) != f(a)+f(b)"};
      }
    }
    const auto e = std::lcm(domain.exponent(), codomain.exponent());
    for (std::uint64_t r = 0; r < e; ++r) {
      if (f(domain.scale(r, elems[a])) != codomain.scale(r, f(elems[a]))) {
        return HomViolation{a, a, "f(r*a) != r*f(a) for r=" + std::to_string(r)};
      }
    }
  }
  return std::nullopt;
}

Homomorphism Homomorphism::from_table(FiniteModule domain, FiniteModule codomain, std::vector<std::size_t> table) {
  if (auto v = find_hom_violation(domain, codomain, table)) {
    std::string where;
    if (v->a < domain.size() && v->b < domain.size()) {
      where = " at a=" + domain.format_element(domain.element_at(v->a)) +
              ", b=" + domain.format_element(domain.element_at(v->b));
    }
    fail(ErrorKind::NotHomomorphism, domain.to_string() + " -> " + codomain.to_string() + ": " + v->law + where);
  }
  return Homomorphism{std::move(domain), std::move(codomain), std::move(table)};
}

Homomorphism Homomorphism::from_images(FiniteModule domain, FiniteModule codomain, const std::vector<Element>& images) {
  std::vector<std::size_t> table;
  table.reserve(images.size());
  for (const auto& y : images) {
    if (!codomain.contains(y)) {
      fail(ErrorKind::NotHomomorphism, "image is not an element of " + codomain.to_string());
    }
    table.push_back(codomain.index_of(y));
  }
  return from_table(std::move(domain), std::move(codomain), std::move(table));
}

Homomorphism Homomorphism::from_generators(FiniteModule domain, FiniteModule codomain,
                                           const std::vector<Element>& gens) {
  if (gens.size() != domain.shape().size()) {
    fail(ErrorKind::NotHomomorphism, "expected " + std::to_string(domain.shape().size()) + " generator images");
  }
  std::vector<std::size_t> table(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Element x = domain.element_at(i);
    Element y = codomain.zero_element();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      y = codomain.add(y, codomain.scale(x[g], gens[g]));
    }
    table[i] = codomain.index_of(y);
  }
  return from_table(std::move(domain), std::move(codomain), std::move(table));
}

Homomorphism Homomorphism::identity(const FiniteModule& m) {
  std::vector<std::size_t> table(m.size());
  std::iota(table.begin(), table.end(), std::size_t{0});
  return Homomorphism{m, m, std::move(table)};
}

Homomorphism Homomorphism::zero(const FiniteModule& domain, const FiniteModule& codomain) {
  return Homomorphism{domain, codomain, std::vector<std::size_t>(domain.size(), 0)};
}

Element Homomorphism::operator()(const Element& x) const {
  return codomain_.element_at(table_[domain_.index_of(x)]);
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  if (!(f.codomain() == g.domain())) {
    fail(ErrorKind::NotHomomorphism, "cannot compose: " + f.codomain().to_string() + " vs " + g.domain().to_string());
  }
  std::vector<std::size_t> table(f.domain().size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = g.apply_index(f.apply_index(i));
  }
  return Homomorphism::from_table(f.domain(), g.codomain(), std::move(table));
}

bool is_regular_epi(const Homomorphism& f) {
  std::vector<bool> hit(f.codomain().size(), false);
  for (auto i : f.table()) {
    hit[i] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// Cyclic decomposition of finite abelian groups given by an addition table.

namespace {

struct GroupTable {
  std::size_t size = 0;
  std::size_t zero = 0;
  std::vector<std::size_t> sum; // sum[a * size + b]

  std::size_t add(std::size_t a, std::size_t b) const { return sum[a * size + b]; }
};

std::size_t order_of(const GroupTable& g, std::size_t x) {
  std::size_t k = 1;
  std::size_t acc = x;
  while (acc != g.zero) {
    acc = g.add(acc, x);
    ++k;
  }
  return k;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Invariant factors d_1 | d_2 | ... | d_r (all > 1) from element order counts.
std::vector<std::uint64_t> invariant_factors(const GroupTable& g, const std::vector<std::size_t>& orders) {
  // For each prime p: #{x : p^k x = 0} = p^{s_k}; s_k - s_{k-1} counts the
  // cyclic p-factors of order >= p^k.
  std::map<std::uint64_t, std::vector<std::uint64_t>> parts; // p -> exponents, descending
  for (auto p : prime_factors(g.size)) {
    std::vector<std::size_t> level_count; // number of factors with exponent >= k
    std::uint64_t pk = 1;
    std::size_t prev_s = 0;
    for (int k = 1;; ++k) {
      pk *= p;
      std::size_t count = 0;
      for (auto o : orders) {
        if (pk % o == 0) ++count;
      }
      std::size_t s = 0;
      for (std::size_t c = count; c > 1; c /= p) ++s;
      if (s == prev_s) break;
      level_count.push_back(s - prev_s);
      prev_s = s;
    }
    // Conjugate partition: exponents of the cyclic p-factors.
    std::vector<std::uint64_t> exps;
    const std::size_t factors = level_count.empty() ? 0 : level_count[0];
    for (std::size_t i = 0; i < factors; ++i) {
      std::uint64_t e = 0;
      for (auto c : level_count) {
        if (c > i) ++e;
      }
      exps.push_back(e);
    }
    parts[p] = exps; // descending
  }
  std::size_t r = 0;
  for (const auto& [p, exps] : parts) r = std::max(r, exps.size());
  std::vector<std::uint64_t> d(r, 1); // d[0] largest
  for (const auto& [p, exps] : parts) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      for (std::uint64_t e = 0; e < exps[i]; ++e) d[i] *= p;
    }
  }
  std::reverse(d.begin(), d.end());
  return d;
}

std::vector<std::size_t> closure(const GroupTable& g, const std::vector<std::size_t>& gens) {
  std::vector<bool> in(g.size, false);
  std::vector<std::size_t> members{g.zero};
  in[g.zero] = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (auto x : gens) {
      const auto y = g.add(members[i], x);
      if (!in[y]) {
        in[y] = true;
        members.push_back(y);
      }
    }
  }
  return members;
}

bool choose_basis(const GroupTable& g, const std::vector<std::size_t>& orders, const std::vector<std::uint64_t>& d,
                  std::size_t next, std::vector<std::size_t>& chosen, std::size_t span_size) {
  if (next == d.size()) {
    return true;
  }
  // d is ascending; fill from the largest factor down.
  const auto want = d[d.size() - 1 - next];
  for (std::size_t x = 0; x < g.size; ++x) {
    if (orders[x] != want) continue;
    chosen.push_back(x);
    if (closure(g, chosen).size() == span_size * want && choose_basis(g, orders, d, next + 1, chosen, span_size * want)) {
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

struct Decomposition {
  FiniteModule module;
  std::vector<std::size_t> to_table; // module element index -> table element
};

Decomposition decompose(const GroupTable& g) {
  std::vector<std::size_t> orders(g.size);
  for (std::size_t x = 0; x < g.size; ++x) {
    orders[x] = order_of(g, x);
  }
  const auto d = invariant_factors(g, orders);
  std::vector<std::size_t> basis;
  if (!choose_basis(g, orders, d, 0, basis, 1)) {
    fail(ErrorKind::Internal, "no cyclic basis found for a group of order " + std::to_string(g.size));
  }
  std::reverse(basis.begin(), basis.end()); // align with ascending d
  FiniteModule module{d};
  std::vector<std::size_t> to_table(module.size());
  for (std::size_t i = 0; i < module.size(); ++i) {
    const Element c = module.element_at(i);
    std::size_t acc = g.zero;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      for (std::uint64_t t = 0; t < c[k]; ++t) acc = g.add(acc, basis[k]);
    }
    to_table[i] = acc;
  }
  return Decomposition{std::move(module), std::move(to_table)};
}

} // namespace

std::vector<std::size_t> span(const FiniteModule& m, const std::vector<std::size_t>& gens) {
  std::vector<bool> in(m.size(), false);
  const auto z = m.index_of(m.zero_element());
  std::vector<std::size_t> members{z};
  in[z] = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Element a = m.element_at(members[i]);
    for (auto gi : gens) {
      const auto y = m.index_of(m.add(a, m.element_at(gi)));
      if (!in[y]) {
        in[y] = true;
        members.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

Subobject submodule(const FiniteModule& m, const std::vector<std::size_t>& member_indices) {
  std::vector<std::size_t> members = member_indices;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < members.size(); ++i) {
    local[members[i]] = i;
  }
  const auto zero_idx = m.index_of(m.zero_element());
  if (!local.count(zero_idx)) {
    fail(ErrorKind::NotHomomorphism, "subset of " + m.to_string() + " does not contain 0");
  }
  GroupTable g;
  g.size = members.size();
  g.zero = local.at(zero_idx);
  g.sum.resize(g.size * g.size);
  for (std::size_t a = 0; a < g.size; ++a) {
    const Element ea = m.element_at(members[a]);
    for (std::uint64_t r = 0; r < m.exponent(); ++r) {
      if (!local.count(m.index_of(m.scale(r, ea)))) {
        fail(ErrorKind::NotHomomorphism, "subset of " + m.to_string() + " not closed under scalar " + std::to_string(r));
      }
    }
    for (std::size_t b = 0; b < g.size; ++b) {
      const auto s = m.index_of(m.add(ea, m.element_at(members[b])));
      auto it = local.find(s);
      if (it == local.end()) {
        fail(ErrorKind::NotHomomorphism, "subset of " + m.to_string() + " not closed under +");
      }
      g.sum[a * g.size + b] = it->second;
    }
  }
  auto dec = decompose(g);
  std::vector<std::size_t> table(dec.module.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = members[dec.to_table[i]];
  }
  auto inclusion = Homomorphism::from_table(dec.module, m, std::move(table));
  return Subobject{std::move(dec.module), std::move(inclusion)};
}

Image image(const Homomorphism& f) {
  std::vector<std::size_t> members(f.table().begin(), f.table().end());
  auto sub = submodule(f.codomain(), members);
  std::map<std::size_t, std::size_t> back;
  for (std::size_t i = 0; i < sub.module.size(); ++i) {
    back[sub.inclusion.apply_index(i)] = i;
  }
  std::vector<std::size_t> core(f.domain().size());
  for (std::size_t i = 0; i < core.size(); ++i) {
    core[i] = back.at(f.apply_index(i));
  }
  auto corestriction = Homomorphism::from_table(f.domain(), sub.module, std::move(core));
  return Image{std::move(sub.module), std::move(sub.inclusion), std::move(corestriction)};
}

Quotient quotient(const FiniteModule& m, const std::vector<std::size_t>& subgroup_indices) {
  const auto k = span(m, subgroup_indices);
  // Coset representative: least index in x + K.
  std::vector<std::size_t> rep(m.size());
  std::map<std::size_t, std::size_t> coset_id;
  std::vector<std::size_t> reps;
  for (std::size_t x = 0; x < m.size(); ++x) {
    const Element ex = m.element_at(x);
    std::size_t best = x;
    for (auto y : k) {
      best = std::min(best, m.index_of(m.add(ex, m.element_at(y))));
    }
    rep[x] = best;
    if (!coset_id.count(best)) {
      coset_id[best] = reps.size();
      reps.push_back(best);
    }
  }
  GroupTable g;
  g.size = reps.size();
  g.zero = coset_id.at(rep[m.index_of(m.zero_element())]);
  g.sum.resize(g.size * g.size);
  for (std::size_t a = 0; a < g.size; ++a) {
    for (std::size_t b = 0; b < g.size; ++b) {
      const auto s = m.index_of(m.add(m.element_at(reps[a]), m.element_at(reps[b])));
      g.sum[a * g.size + b] = coset_id.at(rep[s]);
    }
  }
  auto dec = decompose(g);
  std::vector<std::size_t> from_coset(g.size);
  for (std::size_t i = 0; i < dec.to_table.size(); ++i) {
    from_coset[dec.to_table[i]] = i;
  }
  std::vector<std::size_t> table(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) {
    table[x] = from_coset[coset_id.at(rep[x])];
  }
  auto projection = Homomorphism::from_table(m, dec.module, std::move(table));
  return Quotient{std::move(dec.module), std::move(projection)};
}

// ---------------------------------------------------------------------------

Element infinitary_sum(const FiniteModule& m, const PwcSeq<Element>& s) {
  const auto support = s.support_if_finite(m.zero_element());
  if (!support) {
    fail(ErrorKind::DivergentSum, "family over " + s.length().to_string() + " in " + m.to_string() +
                                      " has infinite support");
  }
  Element acc = m.zero_element();
  for (const auto& [index, value] : *support) {
    acc = m.add(acc, value);
  }
  return acc;
}

Term infinitary_sum(const FreeModule& m, const Family& s) {
  if (!m.theory.is_infinitary()) {
    fail(ErrorKind::TheoryMismatch, "no summation terms in " + m.theory.to_string());
  }
  return Term::sum(s);
}

} // namespace limterm
