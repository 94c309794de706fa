#include "limterm/term.hpp"

#include "limterm/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace limterm {

// ---------------------------------------------------------------------------
// Theory

Theory Theory::free_signature(std::vector<Symbol> symbols) {
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.name.empty() || !seen.insert(s.name).second) {
      fail(ErrorKind::TheoryMismatch, "signature symbol names must be distinct and non-empty: '" + s.name + "'");
    }
    if (s.name[0] == 'x' || s.name == symbols::zero || s.name == "sum" || s.name == "lim" || s.name == "scal" ||
        s.name == "+" || s.name == "-") {
      fail(ErrorKind::TheoryMismatch, "reserved symbol name '" + s.name + "'");
    }
  }
  return Theory{FreeSignature{std::move(symbols)}};
}

Theory Theory::additive(std::uint64_t modulus, bool infinitary) {
  if (modulus == 0) {
    fail(ErrorKind::TheoryMismatch, "modulus must be at least 1");
  }
  return Theory{AdditiveTheory{modulus, infinitary}};
}

bool Theory::is_infinitary() const {
  const auto* a = std::get_if<AdditiveTheory>(&kind_);
  return a != nullptr && a->infinitary;
}

std::uint64_t Theory::modulus() const {
  const auto* a = std::get_if<AdditiveTheory>(&kind_);
  return a == nullptr ? 0 : a->modulus;
}

std::optional<std::size_t> Theory::arity_of(std::string_view symbol) const {
  if (is_additive()) {
    if (symbol == symbols::plus) return 2;
    if (symbol == symbols::neg || symbol == symbols::scal) return 1;
    if (symbol == symbols::zero) return 0;
    return std::nullopt;
  }
  for (const auto& s : std::get<FreeSignature>(kind_).symbols) {
    if (s.name == symbol) {
      return s.arity;
    }
  }
  return std::nullopt;
}

std::string Theory::to_string() const {
  if (const auto* a = std::get_if<AdditiveTheory>(&kind_)) {
    return std::string(a->infinitary ? "add-inf" : "add") + " mod " + std::to_string(a->modulus);
  }
  std::string out = "sig";
  for (const auto& s : std::get<FreeSignature>(kind_).symbols) {
    out += ' ' + s.name + '/' + std::to_string(s.arity);
  }
  return out;
}

Theory Theory::parse(std::string_view text) {
  auto words = std::vector<std::string>{};
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  auto bad = [&](const std::string& why) -> Theory {
    fail(ErrorKind::Parse, "theory '" + std::string(text) + "': " + why);
  };
  if (words.empty()) {
    return bad("empty");
  }
  if (words[0] == "add" || words[0] == "add-inf") {
    if (words.size() != 3 || words[1] != "mod") {
      return bad("expected '" + words[0] + " mod <n>'");
    }
    std::size_t used = 0;
    std::uint64_t n = 0;
    try {
      n = std::stoull(words[2], &used);
    } catch (const std::exception&) {
      return bad("modulus is not a number");
    }
    if (used != words[2].size()) {
      return bad("modulus is not a number");
    }
    return additive(n, words[0] == "add-inf");
  }
  if (words[0] == "sig") {
    std::vector<Symbol> syms;
    for (std::size_t i = 1; i < words.size(); ++i) {
      const auto slash = words[i].rfind('/');
      if (slash == std::string::npos || slash == 0) {
        return bad("expected <name>/<arity>, got '" + words[i] + "'");
      }
      try {
        syms.push_back(Symbol{words[i].substr(0, slash), std::stoul(words[i].substr(slash + 1))});
      } catch (const std::exception&) {
        return bad("bad arity in '" + words[i] + "'");
      }
    }
    return free_signature(std::move(syms));
  }
  return bad("unknown theory kind '" + words[0] + "'");
}

// ---------------------------------------------------------------------------
// Term

Term Term::var(Ordinal index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->index = std::move(index);
  return Term{std::move(n)};
}

Term Term::app(std::string symbol, std::vector<Term> args, std::uint64_t param) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->symbol = std::move(symbol);
  n->param = param;
  n->args = std::move(args);
  return Term{std::move(n)};
}

Term Term::sum(Family family) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->family = std::move(family);
  return Term{std::move(n)};
}

Term Term::lim(Family family) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lim;
  n->family = std::move(family);
  return Term{std::move(n)};
}

Term Term::zero() { return app(std::string(symbols::zero), {}); }
Term Term::plus(Term a, Term b) { return app(std::string(symbols::plus), {std::move(a), std::move(b)}); }
Term Term::neg(Term a) { return app(std::string(symbols::neg), {std::move(a)}); }
Term Term::scal(std::uint64_t r, Term a) { return app(std::string(symbols::scal), {std::move(a)}, r); }

Term::Kind Term::kind() const { return node_->kind; }

const Ordinal& Term::var_index() const {
  if (node_->kind != Kind::Var) fail(ErrorKind::Internal, "var_index on a non-variable term");
  return node_->index;
}

const std::string& Term::symbol() const { return node_->symbol; }
std::uint64_t Term::param() const { return node_->param; }
const std::vector<Term>& Term::args() const { return node_->args; }

const Family& Term::family() const {
  if (!node_->family) fail(ErrorKind::Internal, "family() on a term without a family");
  return *node_->family;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) {
    return true;
  }
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.index == y.index && x.symbol == y.symbol && x.param == y.param && x.args == y.args &&
         x.family == y.family;
}

// ---------------------------------------------------------------------------
// Family

Ordinal Family::length() const {
  if (const auto* b = std::get_if<Basis>(&rep_)) {
    return b->length;
  }
  return std::get<PwcSeq<Term>>(rep_).length();
}

Term Family::at(const Ordinal& index) const {
  if (const auto* b = std::get_if<Basis>(&rep_)) {
    if (!(index < b->length)) {
      fail(ErrorKind::IndexOutOfRange, "index " + index.to_string() + " not below " + b->length.to_string());
    }
    return Term::var(b->offset + index);
  }
  return std::get<PwcSeq<Term>>(rep_).value_at(index);
}

Family Family::slice(const Ordinal& offset, const Ordinal& len) const {
  if (const auto* b = std::get_if<Basis>(&rep_)) {
    if (offset + len > b->length) {
      fail(ErrorKind::IndexOutOfRange, "slice [" + offset.to_string() + "," + (offset + len).to_string() +
                                           ") exceeds basis length " + b->length.to_string());
    }
    return Basis{len, b->offset + offset};
  }
  return std::get<PwcSeq<Term>>(rep_).slice(offset, len);
}

// ---------------------------------------------------------------------------
// Substitution

Term substitute(const Term& t, const Family& sigma) {
  switch (t.kind()) {
  case Term::Kind::Var:
    if (!(t.var_index() < sigma.length())) {
      fail(ErrorKind::UnboundVariable,
           "variable x[" + t.var_index().to_string() + "] outside assignment of length " + sigma.length().to_string());
    }
    return sigma.at(t.var_index());
  case Term::Kind::App: {
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) {
      args.push_back(substitute(a, sigma));
    }
    return Term::app(t.symbol(), std::move(args), t.param());
  }
  case Term::Kind::Sum:
  case Term::Kind::Lim: {
    const Family& f = t.family();
    Family out = [&]() -> Family {
      if (f.is_basis()) {
        if (f.basis().offset + f.basis().length > sigma.length()) {
          fail(ErrorKind::UnboundVariable, "basis family reaches " + (f.basis().offset + f.basis().length).to_string() +
                                               ", assignment has length " + sigma.length().to_string());
        }
        return sigma.slice(f.basis().offset, f.basis().length);
      }
      return f.pieces().map([&](const Term& piece) { return substitute(piece, sigma); });
    }();
    return t.kind() == Term::Kind::Sum ? Term::sum(std::move(out)) : Term::lim(std::move(out));
  }
  }
  fail(ErrorKind::Internal, "unreachable term kind");
}

Family compose(const Family& sigma, const Family& tau) {
  if (sigma.is_basis()) {
    const auto& b = sigma.basis();
    if (b.offset + b.length > tau.length()) {
      fail(ErrorKind::UnboundVariable, "composite reaches beyond the second assignment");
    }
    return tau.slice(b.offset, b.length);
  }
  return sigma.pieces().map([&](const Term& t) { return substitute(t, tau); });
}

Ordinal variable_bound(const Term& t) {
  switch (t.kind()) {
  case Term::Kind::Var:
    return t.var_index().successor();
  case Term::Kind::App: {
    Ordinal out;
    for (const auto& a : t.args()) {
      out = std::max(out, variable_bound(a));
    }
    return out;
  }
  case Term::Kind::Sum:
  case Term::Kind::Lim: {
    const Family& f = t.family();
    if (f.is_basis()) {
      return f.basis().length.is_zero() ? Ordinal{} : f.basis().offset + f.basis().length;
    }
    Ordinal out;
    for (const auto& p : f.pieces().pieces()) {
      out = std::max(out, variable_bound(p.value));
    }
    return out;
  }
  }
  fail(ErrorKind::Internal, "unreachable term kind");
}

Term collapse_to_one(const Term& t) {
  return substitute(t, Family::constant(variable_bound(t), Term::var(Ordinal{})));
}

void validate(const Term& t, const Theory& theory, const Ordinal& vars) {
  switch (t.kind()) {
  case Term::Kind::Var:
    if (!(t.var_index() < vars)) {
      fail(ErrorKind::UnboundVariable, "x[" + t.var_index().to_string() + "] is not below " + vars.to_string());
    }
    return;
  case Term::Kind::App: {
    const auto arity = theory.arity_of(t.symbol());
    if (!arity) {
      fail(ErrorKind::TheoryMismatch, "symbol '" + t.symbol() + "' is not in theory " + theory.to_string());
    }
    if (*arity != t.args().size()) {
      fail(ErrorKind::TheoryMismatch, "symbol '" + t.symbol() + "' expects " + std::to_string(*arity) +
                                          " arguments, got " + std::to_string(t.args().size()));
    }
    for (const auto& a : t.args()) {
      validate(a, theory, vars);
    }
    return;
  }
  case Term::Kind::Sum:
  case Term::Kind::Lim: {
    if (!theory.is_infinitary()) {
      fail(ErrorKind::TheoryMismatch, std::string(t.kind() == Term::Kind::Sum ? "sum" : "lim") +
                                          " node in finitary theory " + theory.to_string());
    }
    const Family& f = t.family();
    if (f.is_basis()) {
      if (f.basis().offset + f.basis().length > vars) {
        fail(ErrorKind::UnboundVariable, "basis family reaches beyond " + vars.to_string());
      }
      return;
    }
    for (const auto& p : f.pieces().pieces()) {
      validate(p.value, theory, vars);
    }
    return;
  }
  }
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  if (t.kind() == Term::Kind::App) {
    for (const auto& a : t.args()) n += term_size(a);
  } else if (t.kind() != Term::Kind::Var && !t.family().is_basis()) {
    for (const auto& p : t.family().pieces().pieces()) n += term_size(p.value);
  }
  return n;
}

// ---------------------------------------------------------------------------
// Text
//
//   term   := var | name | '(' head ')'
//   var    := 'x' nat | 'x[' ordinal ']'
//   head   := '+' term term | '-' term | 'scal' nat term
//           | ('sum' | 'lim') ordinal family | name term*
//   family := 'basis' ['@' ordinal] | ('[' ord ',' ord ')' '->' term)+

namespace {

std::string var_text(const Ordinal& index) {
  if (index.is_finite()) {
    return "x" + index.to_string();
  }
  return "x[" + index.to_string() + "]";
}

[[noreturn]] void term_error(std::string_view text, std::size_t pos, const std::string& msg) {
  fail(ErrorKind::Parse, msg + " at position " + std::to_string(pos) + " in term '" + std::string(text) + "'");
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-' || c == '*' || c == '.';
}

std::string read_name(std::string_view text, std::size_t& pos) {
  const std::size_t start = pos;
  while (pos < text.size() && is_name_char(text[pos])) {
    ++pos;
  }
  if (pos == start) {
    term_error(text, pos, "expected a term");
  }
  return std::string(text.substr(start, pos - start));
}

Family parse_family(std::string_view text, std::size_t& pos, const Ordinal& length) {
  detail::skip_space(text, pos);
  if (text.substr(pos, 5) == "basis") {
    pos += 5;
    Ordinal offset;
    if (pos < text.size() && text[pos] == '@') {
      ++pos;
      offset = Ordinal::parse_prefix(text, pos);
    }
    return Basis{length, offset};
  }
  std::vector<std::pair<std::pair<Ordinal, Ordinal>, Term>> parts;
  while (true) {
    detail::skip_space(text, pos);
    if (pos >= text.size() || text[pos] != '[') {
      break;
    }
    auto interval = parse_interval(text, pos);
    detail::expect(text, pos, "->");
    parts.emplace_back(std::move(interval), Term::parse_prefix(text, pos));
  }
  if (parts.empty()) {
    term_error(text, pos, "expected 'basis' or a piece '[a,b)->term'");
  }
  auto seq = assemble_intervals<Term>(std::move(parts));
  if (seq.length() != length) {
    fail(ErrorKind::InvalidSequence,
         "family has length " + seq.length().to_string() + " but the node declares " + length.to_string());
  }
  return seq;
}

} // namespace

Term Term::parse_prefix(std::string_view text, std::size_t& pos) {
  detail::skip_space(text, pos);
  if (pos >= text.size()) {
    term_error(text, pos, "unexpected end of input");
  }
  if (text[pos] == 'x' && pos + 1 < text.size() &&
      (std::isdigit(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '[')) {
    ++pos;
    if (text[pos] == '[') {
      ++pos;
      Ordinal index = Ordinal::parse_prefix(text, pos);
      detail::expect(text, pos, "]");
      return var(std::move(index));
    }
    return var(Ordinal::parse_prefix(text, pos));
  }
  if (text[pos] == 'x') {
    term_error(text, pos, "expected a variable index after 'x'");
  }
  if (text[pos] != '(') {
    std::string name = read_name(text, pos);
    return app(std::move(name), {});
  }
  ++pos;
  detail::skip_space(text, pos);
  const std::size_t head_pos = pos;
  std::string head = read_name(text, pos);
  Term result = [&]() -> Term {
    if (head == "sum" || head == "lim") {
      detail::skip_space(text, pos);
      Ordinal length = Ordinal::parse_prefix(text, pos);
      Family fam = parse_family(text, pos, length);
      return head == "sum" ? sum(std::move(fam)) : lim(std::move(fam));
    }
    std::uint64_t param = 0;
    if (head == symbols::scal) {
      detail::skip_space(text, pos);
      const std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
      if (start == pos) {
        term_error(text, pos, "expected scalar after 'scal'");
      }
      param = std::stoull(std::string(text.substr(start, pos - start)));
    }
    std::vector<Term> args;
    while (true) {
      detail::skip_space(text, pos);
      if (pos >= text.size()) {
        term_error(text, pos, "missing ')'");
      }
      if (text[pos] == ')') {
        break;
      }
      args.push_back(parse_prefix(text, pos));
    }
    if (head == symbols::plus && args.size() != 2) {
      term_error(text, head_pos, "'+' takes two arguments");
    }
    if ((head == symbols::neg || head == symbols::scal) && args.size() != 1) {
      term_error(text, head_pos, "'" + head + "' takes one argument");
    }
    return app(std::move(head), std::move(args), param);
  }();
  detail::expect(text, pos, ")");
  return result;
}

Term Term::parse(std::string_view text) {
  std::size_t pos = 0;
  Term t = parse_prefix(text, pos);
  detail::skip_space(text, pos);
  if (pos != text.size()) {
    term_error(text, pos, "trailing input");
  }
  return t;
}

std::string Family::to_string() const {
  if (const auto* b = std::get_if<Basis>(&rep_)) {
    return b->offset.is_zero() ? "basis" : "basis@" + b->offset.to_string();
  }
  std::string out;
  const auto& seq = std::get<PwcSeq<Term>>(rep_);
  for (std::size_t i = 0; i < seq.piece_count(); ++i) {
    if (i > 0) out += ' ';
    out += '[' + seq.pieces()[i].start.to_string() + ',' + seq.piece_end(i).to_string() + ")->" +
           seq.pieces()[i].value.to_string();
  }
  return out;
}

std::string Term::to_string() const {
  switch (kind()) {
  case Kind::Var:
    return var_text(var_index());
  case Kind::App: {
    if (args().empty() && symbol() != symbols::scal) {
      return symbol();
    }
    std::string out = "(" + symbol();
    if (symbol() == symbols::scal) {
      out += ' ' + std::to_string(param());
    }
    for (const auto& a : args()) {
      out += ' ' + a.to_string();
    }
    return out + ')';
  }
  case Kind::Sum:
  case Kind::Lim: {
    const Family& f = family();
    return std::string("(") + (kind() == Kind::Sum ? "sum " : "lim ") + f.length().to_string() + ' ' + f.to_string() +
           ')';
  }
  }
  return "?";
}

} // namespace limterm
