#include "limterm/ordinal.hpp"

#include "limterm/error.hpp"

#include <cctype>
#include <limits>

namespace limterm {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    fail(ErrorKind::Internal, "ordinal coefficient overflow");
  }
  return a + b;
}

} // namespace

Ordinal::Ordinal(std::uint64_t n) {
  if (n != 0) {
    terms_.push_back(CnfTerm{Ordinal{}, n});
  }
}

Ordinal::Ordinal(std::vector<CnfTerm> terms) : terms_(std::move(terms)) {}

Ordinal Ordinal::omega() { return omega_power(Ordinal{1}); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coefficient) {
  if (coefficient == 0) {
    return Ordinal{};
  }
  return Ordinal{std::vector<CnfTerm>{CnfTerm{exponent, coefficient}}};
}

bool Ordinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

std::optional<std::uint64_t> Ordinal::finite_value() const {
  if (terms_.empty()) {
    return 0;
  }
  if (is_finite()) {
    return terms_[0].coefficient;
  }
  return std::nullopt;
}

Ordinal Ordinal::successor() const { return add(*this, Ordinal{1}); }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const auto n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (auto c = x.exponent <=> y.exponent; c != 0) {
      return c;
    }
    if (auto c = x.coefficient <=> y.coefficient; c != 0) {
      return c;
    }
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) {
    return a;
  }
  const Ordinal& lead = b.terms_.front().exponent;
  std::vector<CnfTerm> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  std::size_t j = 0;
  for (const auto& t : a.terms_) {
    if (t.exponent > lead) {
      out.push_back(t);
    } else if (t.exponent == lead) {
      out.push_back(CnfTerm{lead, checked_add(t.coefficient, b.terms_.front().coefficient)});
      j = 1;
      break;
    } else {
      break;
    }
  }
  for (; j < b.terms_.size(); ++j) {
    out.push_back(b.terms_[j]);
  }
  return Ordinal{std::move(out)};
}

Classification classify(const Ordinal& a) {
  if (a.is_zero()) {
    return {OrdinalKind::Zero, std::nullopt};
  }
  if (a.is_successor()) {
    auto terms = a.terms();
    if (--terms.back().coefficient == 0) {
      terms.pop_back();
    }
    Ordinal pred;
    for (const auto& t : terms) {
      pred = add(pred, Ordinal::omega_power(t.exponent, t.coefficient));
    }
    return {OrdinalKind::Successor, std::move(pred)};
  }
  return {OrdinalKind::Limit, std::nullopt};
}

Ordinal left_subtract(const Ordinal& b, const Ordinal& a) {
  if (b > a) {
    fail(ErrorKind::Underflow, "cannot subtract " + b.to_string() + " from " + a.to_string());
  }
  const auto& bt = b.terms_;
  const auto& at = a.terms_;
  std::size_t i = 0;
  while (i < bt.size() && i < at.size() && bt[i] == at[i]) {
    ++i;
  }
  if (i == bt.size()) {
    return Ordinal{std::vector<CnfTerm>(at.begin() + static_cast<std::ptrdiff_t>(i), at.end())};
  }
  // b <= a and they first differ at position i, so a's term there is larger.
  std::vector<CnfTerm> rest;
  if (at[i].exponent == bt[i].exponent) {
    rest.push_back(CnfTerm{at[i].exponent, at[i].coefficient - bt[i].coefficient});
  } else {
    rest.push_back(at[i]);
  }
  rest.insert(rest.end(), at.begin() + static_cast<std::ptrdiff_t>(i) + 1, at.end());
  return Ordinal{std::move(rest)};
}

std::optional<std::uint64_t> interval_cardinality(const Ordinal& b, const Ordinal& e) {
  return left_subtract(b, e).finite_value();
}

std::pair<Ordinal, std::uint64_t> split_finite_tail(const Ordinal& a) {
  if (!a.is_successor()) {
    return {a, 0};
  }
  auto terms = a.terms();
  const auto n = terms.back().coefficient;
  terms.pop_back();
  Ordinal lambda;
  for (const auto& t : terms) {
    lambda = add(lambda, Ordinal::omega_power(t.exponent, t.coefficient));
  }
  return {lambda, n};
}

// ---------------------------------------------------------------------------
// Text

std::string Ordinal::to_string() const {
  if (terms_.empty()) {
    return "0";
  }
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) {
      out += '+';
    }
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (t.exponent != Ordinal{1}) {
      out += '^';
      if (t.exponent.is_finite() || t.exponent == Ordinal::omega()) {
        out += t.exponent.to_string();
      } else {
        out += '(' + t.exponent.to_string() + ')';
      }
    }
    if (t.coefficient != 1) {
      out += '*' + std::to_string(t.coefficient);
    }
  }
  return out;
}

std::string to_string(const Ordinal& a) { return a.to_string(); }

namespace {

[[noreturn]] void parse_error(std::string_view text, std::size_t pos, const std::string& msg) {
  fail(ErrorKind::Parse, msg + " at position " + std::to_string(pos) + " in ordinal '" + std::string(text) + "'");
}

std::uint64_t parse_nat(std::string_view text, std::size_t& pos) {
  if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
    parse_error(text, pos, "expected a natural number");
  }
  std::uint64_t n = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    const auto d = static_cast<std::uint64_t>(text[pos] - '0');
    if (n > (std::numeric_limits<std::uint64_t>::max() - d) / 10) {
      parse_error(text, pos, "natural number too large");
    }
    n = n * 10 + d;
    ++pos;
  }
  return n;
}

Ordinal parse_atom(std::string_view text, std::size_t& pos) {
  if (pos < text.size() && text[pos] == '(') {
    ++pos;
    Ordinal inner = Ordinal::parse_prefix(text, pos);
    if (pos >= text.size() || text[pos] != ')') {
      parse_error(text, pos, "expected ')'");
    }
    ++pos;
    return inner;
  }
  if (pos < text.size() && text[pos] == 'w') {
    ++pos;
    return Ordinal::omega();
  }
  return Ordinal{parse_nat(text, pos)};
}

Ordinal parse_summand(std::string_view text, std::size_t& pos) {
  if (pos < text.size() && text[pos] == 'w') {
    ++pos;
    Ordinal exponent{1};
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      exponent = parse_atom(text, pos);
    }
    std::uint64_t coefficient = 1;
    if (pos < text.size() && text[pos] == '*') {
      ++pos;
      const std::size_t at = pos;
      coefficient = parse_nat(text, pos);
      if (coefficient == 0) {
        parse_error(text, at, "coefficient must be positive");
      }
    }
    return Ordinal::omega_power(exponent, coefficient);
  }
  return Ordinal{parse_nat(text, pos)};
}

} // namespace

Ordinal Ordinal::parse_prefix(std::string_view text, std::size_t& pos) {
  Ordinal acc = parse_summand(text, pos);
  while (pos < text.size() && text[pos] == '+') {
    ++pos;
    acc = add(acc, parse_summand(text, pos));
  }
  return acc;
}

Ordinal Ordinal::parse(std::string_view text) {
  std::size_t pos = 0;
  Ordinal value = parse_prefix(text, pos);
  if (pos != text.size()) {
    parse_error(text, pos, "unexpected character '" + std::string(1, text[pos]) + "'");
  }
  return value;
}

} // namespace limterm
