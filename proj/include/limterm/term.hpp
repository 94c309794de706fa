#pragma once

#include "limterm/ordinal.hpp"
#include "limterm/pwcseq.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace limterm {

// ---------------------------------------------------------------------------
// Theories

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Absolutely free terms over a finitary signature.
struct FreeSignature {
  std::vector<Symbol> symbols;

  friend bool operator==(const FreeSignature&, const FreeSignature&) = default;
};

/// Z/n-module terms: `+`, `-`, `zero`, `scal r`, and when `infinitary` is set
/// the formal `sum` and `lim` nodes of every ordinal length.
struct AdditiveTheory {
  std::uint64_t modulus = 1;
  bool infinitary = false;

  friend bool operator==(const AdditiveTheory&, const AdditiveTheory&) = default;
};

class Theory {
public:
  static Theory free_signature(std::vector<Symbol> symbols);
  static Theory additive(std::uint64_t modulus, bool infinitary);

  /// `add mod <n>`, `add-inf mod <n>`, or `sig <name>/<arity> ...`.
  static Theory parse(std::string_view text);

  bool is_additive() const { return std::holds_alternative<AdditiveTheory>(kind_); }
  bool is_infinitary() const;
  std::uint64_t modulus() const; // 0 for free signatures
  std::optional<std::size_t> arity_of(std::string_view symbol) const;

  const std::variant<FreeSignature, AdditiveTheory>& kind() const { return kind_; }
  std::string to_string() const;

  friend bool operator==(const Theory&, const Theory&) = default;

private:
  explicit Theory(std::variant<FreeSignature, AdditiveTheory> kind) : kind_(std::move(kind)) {}
  std::variant<FreeSignature, AdditiveTheory> kind_;
};

namespace symbols {
inline constexpr std::string_view plus = "+";
inline constexpr std::string_view neg = "-";
inline constexpr std::string_view zero = "zero";
inline constexpr std::string_view scal = "scal";
} // namespace symbols

// ---------------------------------------------------------------------------
// Terms

class Family;

/// An immutable term tree. Copies share structure.
class Term {
public:
  enum class Kind { Var, App, Sum, Lim };

  static Term var(Ordinal index);
  static Term app(std::string symbol, std::vector<Term> args, std::uint64_t param = 0);
  static Term sum(Family family);
  static Term lim(Family family);

  static Term zero();
  static Term plus(Term a, Term b);
  static Term neg(Term a);
  static Term scal(std::uint64_t r, Term a);

  Kind kind() const;
  const Ordinal& var_index() const;
  const std::string& symbol() const;
  std::uint64_t param() const;
  const std::vector<Term>& args() const;
  const Family& family() const;

  std::string to_string() const;
  static Term parse(std::string_view text);
  static Term parse_prefix(std::string_view text, std::size_t& pos);

  friend bool operator==(const Term& a, const Term& b);

  struct Node;

private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// The canonical basis family g -> Var(offset + g) on [0, length).
struct Basis {
  Ordinal length;
  Ordinal offset;

  friend bool operator==(const Basis&, const Basis&) = default;
};

/// Argument families of Sum/Lim nodes and substitutions X -> T(Y).
/// Either piecewise constant, or a (shifted) canonical basis, which is what
/// makes identity substitutions and the generic terms Sum_a, lim_a expressible.
class Family {
public:
  Family(Basis basis) : rep_(basis.length.is_zero() ? Basis{} : std::move(basis)) {} // NOLINT
  Family(PwcSeq<Term> seq) { // NOLINT
    // The empty family has a single representation.
    if (seq.length().is_zero()) {
      rep_ = Basis{};
    } else {
      rep_ = std::move(seq);
    }
  }

  static Family identity(const Ordinal& length) { return Basis{length, Ordinal{}}; }
  static Family constant(const Ordinal& length, Term t) { return PwcSeq<Term>::constant(length, std::move(t)); }

  Ordinal length() const;
  bool is_basis() const { return std::holds_alternative<Basis>(rep_); }
  const Basis& basis() const { return std::get<Basis>(rep_); }
  const PwcSeq<Term>& pieces() const { return std::get<PwcSeq<Term>>(rep_); }

  Term at(const Ordinal& index) const;
  Family slice(const Ordinal& offset, const Ordinal& len) const;

  std::string to_string() const;

  friend bool operator==(const Family&, const Family&) = default;

private:
  std::variant<Basis, PwcSeq<Term>> rep_;
};

struct Term::Node {
  Kind kind;
  Ordinal index;
  std::string symbol;
  std::uint64_t param = 0;
  std::vector<Term> args;
  std::optional<Family> family;
};

/// Monad multiplication on symbolic terms: replaces Var(x) by sigma(x).
/// Throws UnboundVariable when some variable lies outside sigma.
Term substitute(const Term& t, const Family& sigma);

/// (sigma ; tau)(x) = substitute(sigma(x), tau).
Family compose(const Family& sigma, const Family& tau);

/// The least ordinal X such that t is a term over X.
Ordinal variable_bound(const Term& t);

/// Image under T(c) for the unique map c : X -> 1.
Term collapse_to_one(const Term& t);

/// Throws TheoryMismatch / UnboundVariable if t is not a term of `theory` over `vars`.
void validate(const Term& t, const Theory& theory, const Ordinal& vars);

std::size_t term_size(const Term& t);

} // namespace limterm
