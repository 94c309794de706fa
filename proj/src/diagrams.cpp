#include "limterm/diagrams.hpp"

#include "limterm/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace limterm {

namespace {

void expect_hom(const Homomorphism& f, const FiniteModule& domain, const FiniteModule& codomain,
                const std::string& what) {
  if (!(f.domain() == domain) || !(f.codomain() == codomain)) {
    fail(ErrorKind::NotHomomorphism, what + " goes " + f.domain().to_string() + " -> " + f.codomain().to_string() +
                                         ", expected " + domain.to_string() + " -> " + codomain.to_string());
  }
}

} // namespace

InverseSystem::InverseSystem(std::vector<FiniteModule> levels, std::vector<Homomorphism> maps, std::optional<Tail> tail)
    : levels_(std::move(levels)), maps_(std::move(maps)), tail_(std::move(tail)) {
  if (levels_.empty()) {
    fail(ErrorKind::InvalidAlpha, "an inverse system needs at least one level");
  }
  if (maps_.size() + 1 != levels_.size()) {
    fail(ErrorKind::LengthMismatch, std::to_string(levels_.size()) + " levels need " +
                                        std::to_string(levels_.size() - 1) + " maps, got " +
                                        std::to_string(maps_.size()));
  }
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    expect_hom(maps_[k], levels_[k + 1], levels_[k], "map " + std::to_string(k + 1) + " -> " + std::to_string(k));
  }
  if (tail_) {
    const auto n = levels_.size();
    if (tail_->period == 0 || tail_->period > n) {
      fail(ErrorKind::InvalidSequence,
           "tail block of length " + std::to_string(tail_->period) + " with " + std::to_string(n) + " prefix levels");
    }
    expect_hom(tail_->closing, levels_[n - tail_->period], levels_[n - 1], "closing map");
  }
}

InverseSystem InverseSystem::finite(std::vector<FiniteModule> levels, std::vector<Homomorphism> maps) {
  return InverseSystem{std::move(levels), std::move(maps), std::nullopt};
}

InverseSystem InverseSystem::omega(std::vector<FiniteModule> prefix, std::vector<Homomorphism> maps, Tail tail) {
  return InverseSystem{std::move(prefix), std::move(maps), std::move(tail)};
}

InverseSystem InverseSystem::constant_tail(std::vector<FiniteModule> prefix, std::vector<Homomorphism> maps,
                                           std::optional<Homomorphism> tail_map) {
  if (prefix.empty()) {
    fail(ErrorKind::InvalidAlpha, "an inverse system needs at least one level");
  }
  Homomorphism closing = tail_map ? *tail_map : Homomorphism::identity(prefix.back());
  return InverseSystem{std::move(prefix), std::move(maps), Tail{1, std::move(closing)}};
}

Ordinal InverseSystem::index() const { return tail_ ? Ordinal::omega() : Ordinal{levels_.size()}; }

const FiniteModule& InverseSystem::level(std::size_t k) const {
  const auto n = levels_.size();
  if (k < n) {
    return levels_[k];
  }
  if (!tail_) {
    fail(ErrorKind::IndexOutOfRange, "level " + std::to_string(k) + " of a system indexed by " + std::to_string(n));
  }
  return levels_[n - tail_->period + (k - n) % tail_->period];
}

const Homomorphism& InverseSystem::map(std::size_t k) const {
  const auto n = levels_.size();
  if (k + 1 < n) {
    return maps_[k];
  }
  if (!tail_) {
    fail(ErrorKind::IndexOutOfRange, "map from level " + std::to_string(k + 1) + " of a system indexed by " +
                                         std::to_string(n));
  }
  const auto r = (k + 1 - n) % tail_->period;
  return r == 0 ? tail_->closing : maps_[n - tail_->period + r - 1];
}

Homomorphism InverseSystem::transition(std::size_t to, std::size_t from) const {
  if (to > from) {
    fail(ErrorKind::IndexOutOfRange, "transition from level " + std::to_string(from) + " up to " + std::to_string(to));
  }
  const auto& top = level(from);
  std::vector<std::size_t> table(top.size());
  std::iota(table.begin(), table.end(), std::size_t{0});
  for (std::size_t k = from; k > to; --k) {
    const auto& f = map(k - 1);
    for (auto& x : table) x = f.apply_index(x);
  }
  return Homomorphism::from_table(top, level(to), std::move(table));
}

// ---------------------------------------------------------------------------

SystemMorphism::SystemMorphism(InverseSystem source, InverseSystem target, std::vector<Homomorphism> levels)
    : source_(std::move(source)), target_(std::move(target)), levels_(std::move(levels)) {
  if (source_.index() != target_.index() || source_.prefix_length() != target_.prefix_length()) {
    fail(ErrorKind::LengthMismatch, "morphism between systems of different shape");
  }
  if (source_.is_omega() && source_.tail()->period != target_.tail()->period) {
    fail(ErrorKind::LengthMismatch, "morphism between systems with different tail blocks");
  }
  const auto n = source_.prefix_length();
  if (levels_.size() != n) {
    fail(ErrorKind::LengthMismatch, "morphism needs " + std::to_string(n) + " level maps, got " +
                                        std::to_string(levels_.size()));
  }
  for (std::size_t k = 0; k < n; ++k) {
    expect_hom(levels_[k], source_.level(k), target_.level(k), "level " + std::to_string(k));
  }
  const std::size_t squares = source_.is_omega() ? n : n - 1;
  for (std::size_t k = 0; k < squares; ++k) {
    const auto& upper = at(k + 1);
    const auto& lower = at(k);
    const auto& a = source_.map(k);
    const auto& b = target_.map(k);
    for (std::size_t x = 0; x < upper.domain().size(); ++x) {
      if (lower.apply_index(a.apply_index(x)) != b.apply_index(upper.apply_index(x))) {
        fail(ErrorKind::NotHomomorphism, "square at levels " + std::to_string(k) + "," + std::to_string(k + 1) +
                                             " fails at " + upper.domain().format_element(upper.domain().element_at(x)));
      }
    }
  }
}

const Homomorphism& SystemMorphism::at(std::size_t k) const {
  const auto n = levels_.size();
  if (k < n) {
    return levels_[k];
  }
  if (!source_.is_omega()) {
    fail(ErrorKind::IndexOutOfRange, "level " + std::to_string(k) + " of a morphism over " + std::to_string(n));
  }
  const auto p = source_.tail()->period;
  return levels_[n - p + (k - n) % p];
}

SystemMorphism compose(const SystemMorphism& g, const SystemMorphism& f) {
  std::vector<Homomorphism> levels;
  for (std::size_t k = 0; k < f.levels().size(); ++k) {
    levels.push_back(compose(g.at(k), f.at(k)));
  }
  return SystemMorphism{f.source(), g.target(), std::move(levels)};
}

SystemMorphism identity_morphism(const InverseSystem& sys) {
  std::vector<Homomorphism> levels;
  for (std::size_t k = 0; k < sys.prefix_length(); ++k) {
    levels.push_back(Homomorphism::identity(sys.level(k)));
  }
  return SystemMorphism{sys, sys, std::move(levels)};
}

// ---------------------------------------------------------------------------

namespace {

std::size_t shriek_prefix(std::size_t beta, const Ordinal& alpha) {
  if (alpha == Ordinal::omega()) {
    return beta + 2;
  }
  const auto n = alpha.finite_value();
  if (!n || *n == 0) {
    fail(ErrorKind::InvalidAlpha, "concrete systems are indexed by a positive natural number or w, not " +
                                      alpha.to_string());
  }
  if (beta >= *n) {
    fail(ErrorKind::IndexOutOfRange, "beta = " + std::to_string(beta) + " is not below " + alpha.to_string());
  }
  return *n;
}

InverseSystem shriek_system(const FiniteModule& m, std::size_t beta, std::size_t n, bool omega) {
  const FiniteModule zero = FiniteModule::zero();
  std::vector<FiniteModule> levels;
  std::vector<Homomorphism> maps;
  for (std::size_t k = 0; k < n; ++k) {
    levels.push_back(k <= beta ? m : zero);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    maps.push_back(k + 1 <= beta ? Homomorphism::identity(m) : Homomorphism::zero(levels[k + 1], levels[k]));
  }
  if (omega) {
    return InverseSystem::constant_tail(std::move(levels), std::move(maps));
  }
  return InverseSystem::finite(std::move(levels), std::move(maps));
}

} // namespace

InverseSystem beta_shriek(const FiniteModule& m, std::size_t beta, const Ordinal& alpha) {
  return shriek_system(m, beta, shriek_prefix(beta, alpha), alpha == Ordinal::omega());
}

SystemMorphism beta_shriek_morphism(const FiniteModule& m, std::size_t beta, std::size_t beta_prime,
                                    const Ordinal& alpha) {
  if (beta > beta_prime) {
    fail(ErrorKind::IndexOutOfRange, "no morphism from beta = " + std::to_string(beta) + " to beta' = " +
                                         std::to_string(beta_prime));
  }
  const auto n = shriek_prefix(beta_prime, alpha);
  const bool omega = alpha == Ordinal::omega();
  auto source = shriek_system(m, beta, n, omega);
  auto target = shriek_system(m, beta_prime, n, omega);
  std::vector<Homomorphism> levels;
  for (std::size_t k = 0; k < n; ++k) {
    levels.push_back(k <= beta ? Homomorphism::identity(m) : Homomorphism::zero(source.level(k), target.level(k)));
  }
  return SystemMorphism{std::move(source), std::move(target), std::move(levels)};
}

// ---------------------------------------------------------------------------

Element LimitObject::component(const InverseSystem& sys, const Element& x, std::size_t k) const {
  const auto n = sys.prefix_length();
  Element h = head(x);
  if (k < n) {
    return sys.transition(k, n - 1)(h);
  }
  // Lift the head through whole tail periods; the period map is a bijection
  // on the stable image.
  const auto p = sys.tail()->period;
  const auto periods = (k - (n - 1) + p - 1) / p;
  const auto period_map = sys.transition(n - 1, n - 1 + p);
  const auto& top = sys.level(n - 1);
  for (std::size_t i = 0; i < periods; ++i) {
    const auto target = top.index_of(h);
    auto it = std::find_if(stable_image.begin(), stable_image.end(),
                           [&](std::size_t s) { return period_map.apply_index(s) == target; });
    if (it == stable_image.end()) {
      fail(ErrorKind::Internal, "period map is not onto the stable image");
    }
    h = top.element_at(*it);
  }
  return sys.transition(k, n - 1 + periods * p)(h);
}

std::optional<Element> LimitObject::from_head(const Element& head_value) const {
  const auto target = head.codomain().index_of(head_value);
  for (std::size_t i = 0; i < module.size(); ++i) {
    if (head.apply_index(i) == target) {
      return module.element_at(i);
    }
  }
  return std::nullopt;
}

LimitObject limit_object(const InverseSystem& sys, std::size_t max_depth) {
  const auto n = sys.prefix_length();
  const auto& top = sys.level(n - 1);
  std::vector<std::size_t> current(top.size());
  std::iota(current.begin(), current.end(), std::size_t{0});
  std::size_t depth = 0;
  if (sys.is_omega()) {
    const auto p = sys.tail()->period;
    const auto period_map = sys.transition(n - 1, n - 1 + p);
    while (true) {
      std::set<std::size_t> next;
      for (auto x : current) next.insert(period_map.apply_index(x));
      std::vector<std::size_t> next_v(next.begin(), next.end());
      if (next_v == current) {
        break;
      }
      if (depth == max_depth) {
        fail(ErrorKind::DepthExceeded, "images not stable after " + std::to_string(max_depth) + " periods");
      }
      current = std::move(next_v);
      ++depth;
    }
  }
  auto sub = submodule(top, current);
  return LimitObject{std::move(sub.module), std::move(sub.inclusion), depth, std::move(current)};
}

Homomorphism induced_map(const SystemMorphism& f, const LimitObject& source, const LimitObject& target) {
  const auto n = f.source().prefix_length();
  std::vector<std::size_t> table(source.module.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto image = f.at(n - 1)(source.head(source.module.element_at(i)));
    const auto thread = target.from_head(image);
    if (!thread) {
      fail(ErrorKind::Internal, "image of a thread is not a thread");
    }
    table[i] = target.module.index_of(*thread);
  }
  return Homomorphism::from_table(source.module, target.module, std::move(table));
}

SurjectivityReport check_inverse_limit_surjectivity(const SystemMorphism& f, std::size_t max_depth) {
  for (std::size_t k = 0; k < f.levels().size(); ++k) {
    if (!is_regular_epi(f.at(k))) {
      fail(ErrorKind::LevelwiseNotEpi, "level " + std::to_string(k) + " map " + f.at(k).domain().to_string() +
                                           " -> " + f.at(k).codomain().to_string() + " is not surjective");
    }
  }
  const auto a = limit_object(f.source(), max_depth);
  const auto b = limit_object(f.target(), max_depth);
  const auto lim_f = induced_map(f, a, b);
  SurjectivityReport report;
  report.source_depth = a.depth;
  report.target_depth = b.depth;
  report.source_limit_size = a.module.size();
  report.target_limit_size = b.module.size();
  std::vector<bool> hit(b.module.size(), false);
  for (auto i : lim_f.table()) hit[i] = true;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) {
      report.pass = false;
      report.missed = b.module.element_at(i);
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Random systems

namespace {

const std::vector<std::vector<std::uint64_t>>& shape_pool() {
  static const std::vector<std::vector<std::uint64_t>> pool{{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8},
                                                            {2, 2}, {2, 4}, {2, 2, 2}, {3, 3}};
  return pool;
}

FiniteModule random_level(Rng& rng, std::size_t max_size) {
  std::vector<const std::vector<std::uint64_t>*> fits;
  for (const auto& s : shape_pool()) {
    std::uint64_t size = 1;
    for (auto n : s) size *= n;
    if (size <= max_size) fits.push_back(&s);
  }
  return FiniteModule{*fits[rng.below(fits.size())]};
}

std::vector<std::size_t> image_of(const Homomorphism& f, const std::vector<std::size_t>& xs) {
  std::vector<std::size_t> out;
  for (auto x : xs) out.push_back(f.apply_index(x));
  return out;
}

Homomorphism induced_on_quotients(const Homomorphism& f, const Quotient& from, const Quotient& to) {
  // A preimage of each coset, then f, then the projection.
  std::vector<std::size_t> rep(from.module.size(), from.projection.domain().size());
  for (std::size_t a = 0; a < from.projection.domain().size(); ++a) {
    auto& r = rep[from.projection.apply_index(a)];
    if (r == from.projection.domain().size()) r = a;
  }
  std::vector<std::size_t> table(from.module.size());
  for (std::size_t b = 0; b < table.size(); ++b) {
    table[b] = to.projection.apply_index(f.apply_index(rep[b]));
  }
  return Homomorphism::from_table(from.module, to.module, std::move(table));
}

} // namespace

Homomorphism random_hom(Rng& rng, const FiniteModule& domain, const FiniteModule& codomain) {
  const auto elems = codomain.elements();
  std::vector<Element> gens;
  for (auto order : domain.shape()) {
    std::vector<const Element*> allowed;
    for (const auto& y : elems) {
      if (codomain.scale(order, y) == codomain.zero_element()) allowed.push_back(&y);
    }
    gens.push_back(*allowed[rng.below(allowed.size())]);
  }
  return Homomorphism::from_generators(domain, codomain, gens);
}

InverseSystem random_system(Rng& rng, const RandomSystemOptions& options) {
  const std::size_t n = 1 + rng.below(options.max_prefix);
  std::vector<FiniteModule> levels;
  for (std::size_t k = 0; k < n; ++k) {
    levels.push_back(random_level(rng, options.max_level_size));
  }
  std::vector<Homomorphism> maps;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    maps.push_back(random_hom(rng, levels[k + 1], levels[k]));
  }
  const std::size_t p = 1 + rng.below(std::min(options.max_period, n));
  auto closing = random_hom(rng, levels[n - p], levels[n - 1]);
  return InverseSystem::omega(std::move(levels), std::move(maps), Tail{p, std::move(closing)});
}

SystemMorphism random_quotient_morphism(Rng& rng, const InverseSystem& sys) {
  const auto n = sys.prefix_length();
  std::vector<std::vector<std::size_t>> kernels(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> gens;
    const auto count = rng.below(3);
    for (std::size_t i = 0; i < count; ++i) gens.push_back(rng.below(sys.level(k).size()));
    kernels[k] = span(sys.level(k), gens);
  }
  // Close the kernels under the structure maps, including the tail's closing map.
  for (bool changed = true; changed;) {
    changed = false;
    auto grow = [&](std::size_t k, const std::vector<std::size_t>& extra) {
      auto gens = kernels[k];
      gens.insert(gens.end(), extra.begin(), extra.end());
      auto next = span(sys.level(k), gens);
      if (next != kernels[k]) {
        kernels[k] = std::move(next);
        changed = true;
      }
    };
    for (std::size_t k = n - 1; k-- > 0;) {
      grow(k, image_of(sys.map(k), kernels[k + 1]));
    }
    if (sys.is_omega()) {
      grow(n - 1, image_of(sys.tail()->closing, kernels[n - sys.tail()->period]));
    }
  }
  std::vector<Quotient> q;
  for (std::size_t k = 0; k < n; ++k) {
    q.push_back(quotient(sys.level(k), kernels[k]));
  }
  std::vector<FiniteModule> levels;
  std::vector<Homomorphism> maps;
  std::vector<Homomorphism> projections;
  for (std::size_t k = 0; k < n; ++k) {
    levels.push_back(q[k].module);
    projections.push_back(q[k].projection);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    maps.push_back(induced_on_quotients(sys.map(k), q[k + 1], q[k]));
  }
  InverseSystem target = [&] {
    if (!sys.is_omega()) {
      return InverseSystem::finite(std::move(levels), std::move(maps));
    }
    const auto p = sys.tail()->period;
    auto closing = induced_on_quotients(sys.tail()->closing, q[n - p], q[n - 1]);
    return InverseSystem::omega(std::move(levels), std::move(maps), Tail{p, std::move(closing)});
  }();
  return SystemMorphism{sys, std::move(target), std::move(projections)};
}

SystemMorphism random_quotient_morphism(Rng& rng, const RandomSystemOptions& options) {
  auto sys = random_system(rng, options);
  return random_quotient_morphism(rng, sys);
}

// ---------------------------------------------------------------------------
// Retraction

Element ProductElement::component(const InverseSystem& sys, const LimitObject& lim, std::size_t k) const {
  if (k < explicit_levels.size()) {
    return explicit_levels[k];
  }
  return lim.component(sys, tail_thread, k);
}

std::uint64_t system_exponent(const InverseSystem& sys) {
  std::uint64_t e = 1;
  for (const auto& l : sys.prefix()) e = std::lcm(e, l.exponent());
  return e;
}

namespace {

/// The family b -> rho_{g b}(m_b) (zero below g) at level g. Beyond the
/// explicit levels the family is constant, so it is piecewise constant.
PwcSeq<Element> retraction_family(const InverseSystem& sys, const LimitObject& lim, const ProductElement& m,
                                  std::size_t g) {
  const auto& target = sys.level(g);
  std::vector<PwcSeq<Element>::Piece> pieces;
  if (!sys.is_omega()) {
    for (std::size_t b = 0; b < sys.prefix_length(); ++b) {
      pieces.push_back({b, b < g ? target.zero_element() : sys.transition(g, b)(m.component(sys, lim, b))});
    }
    return PwcSeq<Element>::from_pieces(sys.index(), std::move(pieces));
  }
  const std::size_t stable_from = std::max(m.explicit_levels.size(), g);
  for (std::size_t b = 0; b <= stable_from; ++b) {
    pieces.push_back({b, b < g ? target.zero_element() : sys.transition(g, b)(m.component(sys, lim, b))});
  }
  return PwcSeq<Element>::from_pieces(Ordinal::omega(), std::move(pieces));
}

} // namespace

Retraction retract(const InverseSystem& sys, const LimitObject& lim, const ProductElement& m, const Theory& theory) {
  if (!theory.is_additive()) {
    fail(ErrorKind::TheoryMismatch, "the retraction needs an additive theory, got " + theory.to_string());
  }
  const Ordinal alpha = sys.index();
  Term limit_term = [&] {
    if (theory.is_infinitary()) {
      return build_lim_term(alpha);
    }
    const auto verdict = refute_limit_term_finitary(theory.modulus(), alpha);
    if (const auto* e = std::get_if<LimitTermExists>(&verdict)) {
      return e->term;
    }
    fail(ErrorKind::TheoryMismatch, theory.to_string() + " has no limit term for " + alpha.to_string());
  }();
  const auto n = sys.prefix_length();
  const std::size_t levels = sys.is_omega() ? n + sys.tail()->period : n;
  Retraction out;
  for (std::size_t g = 0; g < levels; ++g) {
    out.components.push_back(eval(limit_term, sys.level(g), retraction_family(sys, lim, m, g), theory));
  }
  for (std::size_t g = 0; g + 1 < levels; ++g) {
    if (sys.map(g)(out.components[g + 1]) != out.components[g]) {
      return out;
    }
  }
  out.thread = lim.from_head(out.components[n - 1]);
  return out;
}

namespace {

ProductElement random_product(Rng& rng, const InverseSystem& sys, const LimitObject& lim) {
  ProductElement m;
  const std::size_t explicit_count = rng.below(sys.prefix_length() + 2);
  for (std::size_t k = 0; k < explicit_count && (sys.is_omega() || k < sys.prefix_length()); ++k) {
    m.explicit_levels.push_back(sys.level(k).element_at(rng.below(sys.level(k).size())));
  }
  m.tail_thread = lim.module.element_at(rng.below(lim.module.size()));
  return m;
}

ProductElement thread_as_product(const Element& t) { return ProductElement{{}, t}; }

} // namespace

SectionCheckReport lim_to_prod_section_check(const InverseSystem& sys, const Theory& theory, Rng& rng,
                                             std::size_t samples) {
  const auto lim = limit_object(sys);
  SectionCheckReport report;
  for (const auto& t : lim.module.elements()) {
    ++report.threads_checked;
    const auto r = retract(sys, lim, thread_as_product(t), theory);
    if (r.thread != t) {
      report.pass = false;
      report.failure = "retraction moves the thread " + lim.module.format_element(t);
      return report;
    }
  }
  const auto n = sys.prefix_length();
  for (std::size_t i = 0; i < samples; ++i) {
    ++report.products_checked;
    const auto m = random_product(rng, sys, lim);
    const auto r = retract(sys, lim, m, theory);
    if (!r.thread) {
      report.pass = false;
      report.failure = "retraction of a product element is not a thread";
      return report;
    }
    // Index w: only the tail matters. Finite index: the last level decides.
    const auto expected = sys.is_omega() ? std::optional<Element>(m.tail_thread)
                                         : lim.from_head(m.component(sys, lim, n - 1));
    if (r.thread != expected) {
      report.pass = false;
      report.failure = "retraction depends on more than the final components";
      return report;
    }
  }
  return report;
}

SectionCheckReport retraction_naturality_check(const SystemMorphism& h, const Theory& theory, Rng& rng,
                                               std::size_t samples) {
  const auto lim_a = limit_object(h.source());
  const auto lim_b = limit_object(h.target());
  const auto lim_h = induced_map(h, lim_a, lim_b);
  SectionCheckReport report;
  for (std::size_t i = 0; i < samples; ++i) {
    ++report.products_checked;
    const auto m = random_product(rng, h.source(), lim_a);
    ProductElement hm;
    for (std::size_t k = 0; k < m.explicit_levels.size(); ++k) {
      hm.explicit_levels.push_back(h.at(k)(m.explicit_levels[k]));
    }
    hm.tail_thread = lim_h(m.tail_thread);
    const auto ra = retract(h.source(), lim_a, m, theory);
    const auto rb = retract(h.target(), lim_b, hm, theory);
    if (!ra.thread || !rb.thread || lim_h(*ra.thread) != *rb.thread) {
      report.pass = false;
      report.failure = "retraction does not commute with the morphism";
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

KeyDiagramVerdict key_diagram_check(const Theory& theory, const Ordinal& alpha, const std::vector<FiniteModule>& battery,
                                    Rng& rng, std::size_t trials) {
  if (!theory.is_additive()) {
    fail(ErrorKind::TheoryMismatch, "the key diagram check needs an additive theory");
  }
  const auto n = theory.modulus();
  std::vector<FiniteModule> modules;
  for (const auto& m : battery) {
    if (n % m.exponent() == 0) modules.push_back(m);
  }
  if (modules.empty()) modules.push_back(FiniteModule::cyclic(n));

  auto verify = [&](const Term& t) {
    const Evaluator f = [&](const FiniteModule& m, const PwcSeq<Element>& s) { return eval(t, m, s, theory); };
    L1Options options;
    options.trials = trials;
    return check_limit_term(f, t, alpha, modules, options, rng);
  };
  KeyDiagramVerdict verdict;
  if (theory.is_infinitary()) {
    const auto report = verify(build_lim_term(alpha));
    verdict.exact = report.pass();
    verdict.evidence = report.pass() ? "lim term verified" : "lim term failed (L1)/(L2)";
    return verdict;
  }
  const auto outcome = refute_limit_term_finitary(n, alpha);
  if (const auto* e = std::get_if<LimitTermExists>(&outcome)) {
    const auto report = verify(e->term);
    verdict.exact = report.pass();
    verdict.evidence = "limit term " + e->term.to_string() + (report.pass() ? " verified" : " failed (L1)/(L2)");
    return verdict;
  }
  const auto& cert = std::get<RefutationCertificate>(outcome);
  std::vector<Term> candidates{Term::zero(), Term::var(0)};
  for (const auto& p : candidate_points(alpha)) candidates.push_back(Term::var(p));
  for (std::size_t i = 0; i < trials; ++i) candidates.push_back(random_finitary_term(rng, n, alpha, 4));
  for (const auto& c : candidates) {
    if (!cert.instantiate(c).refutes()) {
      verdict.exact = true;
      verdict.evidence = "candidate " + c.to_string() + " survives the certificate";
      return verdict;
    }
  }
  verdict.exact = false;
  verdict.evidence = "no limit term: certificate refutes " + std::to_string(candidates.size()) + " candidates";
  return verdict;
}

} // namespace limterm
