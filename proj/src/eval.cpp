#include "limterm/eval.hpp"

#include "limterm/error.hpp"
#include "limterm/transfinite.hpp"

namespace limterm {

namespace {

struct EvalContext {
  const FiniteModule& m;
  std::uint64_t modulus;
  bool infinitary;
};

PwcSeq<Element> eval_family(const EvalContext& ctx, const Family& fam, const PwcSeq<Element>& asg);

Element eval_rec(const EvalContext& ctx, const Term& t, const PwcSeq<Element>& asg) {
  switch (t.kind()) {
  case Term::Kind::Var:
    if (!(t.var_index() < asg.length())) {
      fail(ErrorKind::UnboundVariable,
           "variable x[" + t.var_index().to_string() + "] outside assignment of length " + asg.length().to_string());
    }
    return asg.value_at(t.var_index());
  case Term::Kind::App: {
    const auto& s = t.symbol();
    const auto& args = t.args();
    if (s == symbols::zero && args.empty()) {
      return ctx.m.zero_element();
    }
    if (s == symbols::plus && args.size() == 2) {
      return ctx.m.add(eval_rec(ctx, args[0], asg), eval_rec(ctx, args[1], asg));
    }
    if (s == symbols::neg && args.size() == 1) {
      return ctx.m.neg(eval_rec(ctx, args[0], asg));
    }
    if (s == symbols::scal && args.size() == 1) {
      return ctx.m.scale(t.param() % ctx.modulus, eval_rec(ctx, args[0], asg));
    }
    fail(ErrorKind::TheoryMismatch, "symbol '" + s + "' with " + std::to_string(args.size()) +
                                        " arguments is not an additive operation");
  }
  case Term::Kind::Sum:
  case Term::Kind::Lim: {
    if (!ctx.infinitary) {
      fail(ErrorKind::TheoryMismatch, std::string(t.kind() == Term::Kind::Sum ? "sum" : "lim") +
                                          " node in the finitary theory add mod " + std::to_string(ctx.modulus));
    }
    const auto values = eval_family(ctx, t.family(), asg);
    return t.kind() == Term::Kind::Sum ? infinitary_sum(ctx.m, values) : lim_eval(ctx.m, values);
  }
  }
  fail(ErrorKind::Internal, "unknown term kind");
}

PwcSeq<Element> eval_family(const EvalContext& ctx, const Family& fam, const PwcSeq<Element>& asg) {
  if (fam.is_basis()) {
    const auto& b = fam.basis();
    if (b.offset + b.length > asg.length()) {
      fail(ErrorKind::UnboundVariable, "basis [" + b.offset.to_string() + "," + (b.offset + b.length).to_string() +
                                           ") outside assignment of length " + asg.length().to_string());
    }
    return asg.slice(b.offset, b.length);
  }
  return fam.pieces().map([&](const Term& x) { return eval_rec(ctx, x, asg); });
}

} // namespace

Element eval(const Term& t, const FiniteModule& m, const PwcSeq<Element>& asg, const std::optional<Theory>& theory) {
  const Theory th = theory.value_or(Theory::additive(m.exponent(), true));
  if (!th.is_additive()) {
    fail(ErrorKind::TheoryMismatch, "cannot evaluate " + th.to_string() + " terms in " + m.to_string());
  }
  if (th.modulus() % m.exponent() != 0) {
    fail(ErrorKind::TheoryMismatch, m.to_string() + " is not a module over Z/" + std::to_string(th.modulus()));
  }
  return eval_rec(EvalContext{m, th.modulus(), th.is_infinitary()}, t, asg);
}

Term eval(const Term& t, const FreeModule& m, const Family& asg) {
  validate(t, m.theory, asg.length());
  return substitute(t, asg);
}

PwcSeq<Element> parse_assignment(std::string_view text, const FiniteModule& m) {
  return parse_pwc<Element>(text, [&](std::string_view v) { return m.parse_element(v); });
}

std::string format_assignment(const PwcSeq<Element>& s, const FiniteModule& m) {
  return format_pwc(s, [&](const Element& e) { return m.format_element(e); });
}

} // namespace limterm
