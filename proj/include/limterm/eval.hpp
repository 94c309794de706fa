#pragma once

#include "limterm/module.hpp"

#include <optional>

namespace limterm {

/// t_M(asg). Sum uses the partial infinitary sum, Lim the running-limit recursion.
/// The theory defaults to the infinitary additive theory over Z/exponent(M).
Element eval(const Term& t, const FiniteModule& m, const PwcSeq<Element>& asg,
             const std::optional<Theory>& theory = std::nullopt);

/// In a free module evaluation is substitution.
Term eval(const Term& t, const FreeModule& m, const Family& asg);

/// The unique homomorphism T(X) -> M extending f : X -> M.
class FreeExtension {
public:
  FreeExtension(FiniteModule m, PwcSeq<Element> f, std::optional<Theory> theory = std::nullopt)
      : module_(std::move(m)), f_(std::move(f)), theory_(std::move(theory)) {}

  Element operator()(const Term& t) const { return eval(t, module_, f_, theory_); }
  const PwcSeq<Element>& generators() const { return f_; }

private:
  FiniteModule module_;
  PwcSeq<Element> f_;
  std::optional<Theory> theory_;
};

PwcSeq<Element> parse_assignment(std::string_view text, const FiniteModule& m);
std::string format_assignment(const PwcSeq<Element>& s, const FiniteModule& m);

} // namespace limterm
