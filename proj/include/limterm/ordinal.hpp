#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace limterm {

struct CnfTerm;

/// An ordinal below epsilon_0, stored in Cantor normal form
///   w^e_1 * c_1 + w^e_2 * c_2 + ... + w^e_k * c_k,   e_1 > e_2 > ... > e_k,  c_i >= 1.
/// The empty list is 0. Values are immutable; every constructor normalizes.
class Ordinal {
public:
  Ordinal() = default;
  Ordinal(std::uint64_t n); // NOLINT: naturals convert implicitly

  static Ordinal omega();
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coefficient = 1);

  /// Parses the textual grammar `0 | nat | w | w^<atom> | ...*<nat> | a+b`,
  /// where an exponent atom is a natural, `w`, or a parenthesised ordinal.
  /// Non-normal input such as `1+w` is folded with ordinal addition.
  static Ordinal parse(std::string_view text);
  /// Parses an ordinal prefix of `text` starting at `pos`, advancing `pos`.
  static Ordinal parse_prefix(std::string_view text, std::size_t& pos);

  std::string to_string() const;

  const std::vector<CnfTerm>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;
  bool is_limit() const;
  std::optional<std::uint64_t> finite_value() const;

  Ordinal successor() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

private:
  explicit Ordinal(std::vector<CnfTerm> terms);
  friend Ordinal add(const Ordinal& a, const Ordinal& b);
  friend Ordinal left_subtract(const Ordinal& b, const Ordinal& a);

  std::vector<CnfTerm> terms_;
};

struct CnfTerm {
  Ordinal exponent;
  std::uint64_t coefficient = 1;

  friend bool operator==(const CnfTerm&, const CnfTerm&) = default;
};

enum class OrdinalKind { Zero, Successor, Limit };

struct Classification {
  OrdinalKind kind;
  std::optional<Ordinal> predecessor; // set iff kind == Successor
};

Ordinal add(const Ordinal& a, const Ordinal& b);
inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }

Classification classify(const Ordinal& a);

/// The unique g with b + g = a. Throws Underflow when b > a.
Ordinal left_subtract(const Ordinal& b, const Ordinal& a);

/// n when e = b + n for a finite n, empty when [b, e) is infinite.
/// Throws Underflow when b > e.
std::optional<std::uint64_t> interval_cardinality(const Ordinal& b, const Ordinal& e);

/// Splits a = lambda + n with lambda zero or a limit and n finite.
std::pair<Ordinal, std::uint64_t> split_finite_tail(const Ordinal& a);

std::string to_string(const Ordinal& a);

} // namespace limterm
