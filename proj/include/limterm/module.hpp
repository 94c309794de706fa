#pragma once

#include "limterm/pwcseq.hpp"
#include "limterm/term.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace limterm {

/// Components of an element of Z/n_1 x ... x Z/n_r, each reduced.
using Element = std::vector<std::uint64_t>;

/// A finite module Z/n_1 x ... x Z/n_r. Integer scalars act componentwise,
/// so it is a module over Z/n for every n divisible by exponent().
///
/// Elements are enumerated lexicographically (last component fastest);
/// `index_of` / `element_at` convert between the two views.
class FiniteModule {
public:
  explicit FiniteModule(std::vector<std::uint64_t> shape);
  static FiniteModule cyclic(std::uint64_t n) { return FiniteModule{{n}}; }
  static FiniteModule zero() { return cyclic(1); }

  const std::vector<std::uint64_t>& shape() const { return shape_; }
  std::size_t size() const { return size_; }
  std::uint64_t exponent() const;

  Element zero_element() const { return Element(shape_.size(), 0); }
  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element sub(const Element& a, const Element& b) const;
  Element scale(std::uint64_t r, const Element& a) const;
  bool contains(const Element& a) const;

  std::size_t index_of(const Element& a) const;
  Element element_at(std::size_t index) const;
  std::vector<Element> elements() const;

  /// `Z/2 x Z/4`.
  std::string to_string() const;
  /// `3` for one component, `(1,3)` otherwise.
  std::string format_element(const Element& a) const;
  Element parse_element(std::string_view text) const;

  friend bool operator==(const FiniteModule&, const FiniteModule&) = default;

private:
  std::vector<std::uint64_t> shape_;
  std::size_t size_ = 1;
};

FiniteModule product(const std::vector<FiniteModule>& factors);

/// T(X) for a theory T, with structure map given by substitution.
struct FreeModule {
  Theory theory;
  Ordinal variables;

  friend bool operator==(const FreeModule&, const FreeModule&) = default;
};

using ModuleInstance = std::variant<FiniteModule, FreeModule>;

/// `Z/4`, `Z/2 x Z/4`, `free(add-inf mod 2, w)`.
ModuleInstance parse_instance(std::string_view text);
std::string to_string(const ModuleInstance& m);

/// Throws InfiniteCarrier for free modules.
std::vector<Element> elements(const ModuleInstance& m);

/// The standard battery Z/2, Z/3, Z/4, Z/2 x Z/2, Z/6.
std::vector<FiniteModule> standard_battery();

// ---------------------------------------------------------------------------
// Homomorphisms

struct HomViolation {
  std::size_t a = 0;
  std::size_t b = 0;
  std::string law;
};

/// A homomorphism between finite modules, stored as an index table.
/// Construction verifies the homomorphism laws on the full carrier.
class Homomorphism {
public:
  static Homomorphism from_table(FiniteModule domain, FiniteModule codomain, std::vector<std::size_t> table);
  static Homomorphism from_images(FiniteModule domain, FiniteModule codomain, const std::vector<Element>& images);
  /// Extends the images of the standard generators e_i linearly.
  static Homomorphism from_generators(FiniteModule domain, FiniteModule codomain, const std::vector<Element>& gens);
  static Homomorphism identity(const FiniteModule& m);
  static Homomorphism zero(const FiniteModule& domain, const FiniteModule& codomain);

  const FiniteModule& domain() const { return domain_; }
  const FiniteModule& codomain() const { return codomain_; }
  const std::vector<std::size_t>& table() const { return table_; }

  Element operator()(const Element& x) const;
  std::size_t apply_index(std::size_t i) const { return table_[i]; }

  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;

private:
  Homomorphism(FiniteModule d, FiniteModule c, std::vector<std::size_t> t)
      : domain_(std::move(d)), codomain_(std::move(c)), table_(std::move(t)) {}

  FiniteModule domain_;
  FiniteModule codomain_;
  std::vector<std::size_t> table_;
};

/// First pair witnessing that `table` is not a homomorphism, if any.
std::optional<HomViolation> find_hom_violation(const FiniteModule& domain, const FiniteModule& codomain,
                                               const std::vector<std::size_t>& table);

/// g after f.
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

bool is_regular_epi(const Homomorphism& f);

/// A submodule or quotient presented as an abstract cyclic decomposition.
struct Image {
  FiniteModule module;
  Homomorphism inclusion;    // module -> codomain
  Homomorphism corestriction; // domain -> module, inclusion o corestriction = f
};

Image image(const Homomorphism& f);

struct Subobject {
  FiniteModule module;
  Homomorphism inclusion;
};

/// Presents a subset of `m` closed under the operations as Z/d_1 x ... x Z/d_r
/// with d_1 | d_2 | ... Throws NotHomomorphism if the subset is not closed.
Subobject submodule(const FiniteModule& m, const std::vector<std::size_t>& member_indices);

/// Indices of the submodule generated by `gens`, sorted.
std::vector<std::size_t> span(const FiniteModule& m, const std::vector<std::size_t>& gens);

struct Quotient {
  FiniteModule module;
  Homomorphism projection;
};

Quotient quotient(const FiniteModule& m, const std::vector<std::size_t>& subgroup_indices);

// ---------------------------------------------------------------------------
// Infinitary operations

/// The finite sum of the support; DivergentSum when the support is infinite.
Element infinitary_sum(const FiniteModule& m, const PwcSeq<Element>& s);

/// The formal Sum node over the family.
Term infinitary_sum(const FreeModule& m, const Family& s);

} // namespace limterm
