#pragma once

#include "limterm/module.hpp"
#include "limterm/rng.hpp"
#include "limterm/transfinite.hpp"

#include <optional>
#include <string>
#include <vector>

namespace limterm {

/// A tail rule for omega-indexed systems: from level N on, the last `period`
/// prefix levels repeat, and `closing` maps level N - period (the first level
/// of the repeated block, seen at index N) down to level N - 1.
struct Tail {
  std::size_t period = 1;
  Homomorphism closing;
};

/// An inverse system M_0 <- M_1 <- ... indexed by a finite ordinal or by omega.
class InverseSystem {
public:
  /// Finite index levels.size(); maps[k] : levels[k+1] -> levels[k].
  static InverseSystem finite(std::vector<FiniteModule> levels, std::vector<Homomorphism> maps);
  /// Index omega, with levels beyond the prefix given by the tail.
  static InverseSystem omega(std::vector<FiniteModule> prefix, std::vector<Homomorphism> maps, Tail tail);
  /// Index omega with every level from N - 1 on equal to the last prefix level.
  static InverseSystem constant_tail(std::vector<FiniteModule> prefix, std::vector<Homomorphism> maps,
                                     std::optional<Homomorphism> tail_map = std::nullopt);

  Ordinal index() const;
  bool is_omega() const { return tail_.has_value(); }
  std::size_t prefix_length() const { return levels_.size(); }
  const std::optional<Tail>& tail() const { return tail_; }
  const std::vector<FiniteModule>& prefix() const { return levels_; }

  const FiniteModule& level(std::size_t k) const;
  /// The structure map level(k + 1) -> level(k).
  const Homomorphism& map(std::size_t k) const;
  /// level(to) <- level(from) for to <= from.
  Homomorphism transition(std::size_t to, std::size_t from) const;

private:
  InverseSystem(std::vector<FiniteModule> levels, std::vector<Homomorphism> maps, std::optional<Tail> tail);

  std::vector<FiniteModule> levels_;
  std::vector<Homomorphism> maps_;
  std::optional<Tail> tail_;
};

/// Levelwise homomorphisms commuting with the structure maps.
class SystemMorphism {
public:
  /// Throws NotHomomorphism (with the offending level) if a square fails to commute.
  SystemMorphism(InverseSystem source, InverseSystem target, std::vector<Homomorphism> levels);

  const InverseSystem& source() const { return source_; }
  const InverseSystem& target() const { return target_; }
  const Homomorphism& at(std::size_t k) const;
  const std::vector<Homomorphism>& levels() const { return levels_; }

private:
  InverseSystem source_;
  InverseSystem target_;
  std::vector<Homomorphism> levels_;
};

SystemMorphism compose(const SystemMorphism& g, const SystemMorphism& f);
SystemMorphism identity_morphism(const InverseSystem& sys);

/// (beta_! M)_g = M for g <= beta and 0 above, for finite alpha or alpha = omega.
InverseSystem beta_shriek(const FiniteModule& m, std::size_t beta, const Ordinal& alpha);

/// The morphism beta_! M -> beta'_! M for beta <= beta' (both systems with prefix long enough for beta').
SystemMorphism beta_shriek_morphism(const FiniteModule& m, std::size_t beta, std::size_t beta_prime,
                                    const Ordinal& alpha);

/// The limit as a module of threads. A thread is determined by its component at
/// the last prefix level, so `head` embeds the limit into that level.
struct LimitObject {
  FiniteModule module;
  Homomorphism head;
  std::size_t depth = 0;                 // periods until the image chain stabilizes
  std::vector<std::size_t> stable_image; // indices in the last prefix level

  /// The component of thread `x` at level k.
  Element component(const InverseSystem& sys, const Element& x, std::size_t k) const;
  /// The thread with the given head, if there is one.
  std::optional<Element> from_head(const Element& head_value) const;
};

LimitObject limit_object(const InverseSystem& sys, std::size_t max_depth = 16);

/// lim f : lim A -> lim B.
Homomorphism induced_map(const SystemMorphism& f, const LimitObject& source, const LimitObject& target);

struct SurjectivityReport {
  bool pass = true;
  std::size_t source_depth = 0;
  std::size_t target_depth = 0;
  std::size_t source_limit_size = 0;
  std::size_t target_limit_size = 0;
  std::optional<Element> missed; // a thread of the target with no preimage
};

/// LevelwiseNotEpi if some level map is not surjective.
SurjectivityReport check_inverse_limit_surjectivity(const SystemMorphism& f, std::size_t max_depth = 16);

// ---------------------------------------------------------------------------
// Random systems

struct RandomSystemOptions {
  std::size_t max_level_size = 8;
  std::size_t max_prefix = 5;
  std::size_t max_period = 2;
};

InverseSystem random_system(Rng& rng, const RandomSystemOptions& options = {});
Homomorphism random_hom(Rng& rng, const FiniteModule& domain, const FiniteModule& codomain);
/// A levelwise surjective morphism out of a random system, onto levelwise quotients.
SystemMorphism random_quotient_morphism(Rng& rng, const RandomSystemOptions& options = {});
/// A levelwise surjective morphism out of `sys` onto levelwise quotients.
SystemMorphism random_quotient_morphism(Rng& rng, const InverseSystem& sys);

// ---------------------------------------------------------------------------
// The comparison lim -> product and its retraction

/// (m_b)_b with explicit components below `explicit_levels.size()` and the
/// components of a thread of the limit above.
struct ProductElement {
  std::vector<Element> explicit_levels;
  Element tail_thread;

  Element component(const InverseSystem& sys, const LimitObject& lim, std::size_t k) const;
};

struct Retraction {
  std::vector<Element> components; // levels 0 .. N - 1 (+ one tail period)
  std::optional<Element> thread;   // set iff the components form a thread
};

/// The retraction prod M_b -> lim M_b, x_g = lim_{b} rho_{g b}(m_b) (zero for b < g),
/// computed by evaluating the limit term of `theory`. TheoryMismatch when the
/// theory has no limit term for the index.
Retraction retract(const InverseSystem& sys, const LimitObject& lim, const ProductElement& m, const Theory& theory);

/// lcm of the exponents of all levels.
std::uint64_t system_exponent(const InverseSystem& sys);

struct SectionCheckReport {
  bool pass = true;
  std::size_t threads_checked = 0;
  std::size_t products_checked = 0;
  std::string failure;
};

SectionCheckReport lim_to_prod_section_check(const InverseSystem& sys, const Theory& theory, Rng& rng,
                                             std::size_t samples = 20);

/// r_B(h(m)) = h(r_A(m)) on random product elements.
SectionCheckReport retraction_naturality_check(const SystemMorphism& h, const Theory& theory, Rng& rng,
                                               std::size_t samples = 20);

// ---------------------------------------------------------------------------
// The critical map: limit terms exist iff inverse limits of regular epis are regular epis

struct KeyDiagramVerdict {
  bool exact = false; // limit term found and verified
  std::string evidence;
};

KeyDiagramVerdict key_diagram_check(const Theory& theory, const Ordinal& alpha, const std::vector<FiniteModule>& battery,
                                    Rng& rng, std::size_t trials = 20);

// ---------------------------------------------------------------------------
// Files

/// {"index": "w"|"<n>", "prefix": [...], "maps": [[...]...], "tail": "constant"|"repeat-last-block",
///  "tail_map": [...], "block": p, "closing_map": [...]}
InverseSystem parse_system_json(const std::string& text);
std::string system_to_json(const InverseSystem& sys);

/// {"source": <system>, "target": <system>, "levels": [[...]...]}
SystemMorphism parse_morphism_json(const std::string& text);
std::string morphism_to_json(const SystemMorphism& f);

} // namespace limterm
