#pragma once

#include "limterm/eval.hpp"
#include "limterm/rng.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace limterm {

// ---------------------------------------------------------------------------
// Limits and sums of families

/// lim_{g<b} s_g = Sum_{g<b}(s_g - lim_{d<g} s_d), with lim over the empty family = 0.
Element lim_eval(const FiniteModule& m, const PwcSeq<Element>& s);

/// The value of the last piece (0 for the empty family).
Element lim_eval_telescoped(const FiniteModule& m, const PwcSeq<Element>& s);

/// The formal Lim node; TheoryMismatch in a finitary theory.
Term lim_eval(const FreeModule& m, const Family& s);

/// Sum through limits of partial sums. DivergentSum on infinite support.
Element sum_eval_from_lim(const FiniteModule& m, const PwcSeq<Element>& s);

/// Lim over the canonical basis of alpha. InvalidAlpha for alpha = 0.
Term build_lim_term(const Ordinal& alpha);

/// Sum over the canonical basis of x.
Term build_sum_term(const Ordinal& x);

/// A semantic operation M^alpha -> M, for any alpha and finite M.
using Evaluator = std::function<Element(const FiniteModule&, const PwcSeq<Element>&)>;

Evaluator lim_evaluator();
Evaluator sum_evaluator();
Evaluator term_evaluator(Term t);

/// Sum_alpha restricted to beta: zero-extends a family of length beta to alpha and sums.
Evaluator restrict_sum(const Ordinal& alpha, const Ordinal& beta);

// ---------------------------------------------------------------------------
// Checking (L1) and (L2)

struct L1Witness {
  FiniteModule instance;
  Ordinal beta;
  PwcSeq<Element> first;
  PwcSeq<Element> second;
  std::string first_out;
  std::string second_out;
};

struct L2Witness {
  FiniteModule instance;
  Element constant;
  std::string output;
};

struct L1Result {
  bool pass = true;
  std::size_t comparisons = 0;
  std::optional<L1Witness> witness;
};

struct L2Result {
  bool pass = true;
  std::size_t comparisons = 0;
  std::optional<L2Witness> witness;
};

struct L1Options {
  std::size_t trials = 100;    // random inputs per instance
  std::size_t max_pieces = 4;
  bool exhaustive = false;     // also every input with <= 3 pieces over a few breakpoints
  std::size_t exhaustive_points = 5;
  std::size_t exhaustive_max_carrier = 8;
};

L1Result check_L1(const Evaluator& f, const Ordinal& alpha, const std::vector<FiniteModule>& battery,
                  const L1Options& options, Rng& rng);

L2Result check_L2(const Evaluator& f, const Ordinal& alpha, const std::vector<FiniteModule>& battery);

struct LimitTermReport {
  Ordinal alpha;
  std::optional<Term> term;
  L1Result l1;
  L2Result l2;
  std::vector<std::string> instances_tested;
  std::size_t trials = 0;

  bool pass() const { return l1.pass && l2.pass; }
};

LimitTermReport check_limit_term(const Evaluator& f, std::optional<Term> term, const Ordinal& alpha,
                                 const std::vector<FiniteModule>& battery, const L1Options& options, Rng& rng);

std::string describe(const L1Witness& w);
std::string describe(const L2Witness& w);

// ---------------------------------------------------------------------------
// Sampling

/// Interesting points strictly between 0 and alpha: a fixed universe of small
/// ordinals plus the points just around alpha's limit part.
std::vector<Ordinal> candidate_points(const Ordinal& alpha);

/// At most `cap` candidate points, spread over the whole range.
std::vector<Ordinal> spread_points(const Ordinal& alpha, std::size_t cap);

PwcSeq<Element> random_family(Rng& rng, const FiniteModule& m, const Ordinal& length, std::size_t max_pieces);

/// A random family of finite support with at most `max_support` nonzero entries.
PwcSeq<Element> random_finite_support(Rng& rng, const FiniteModule& m, const Ordinal& length,
                                      std::size_t max_support);

/// Every family over `points` with at most `max_pieces` pieces.
std::vector<PwcSeq<Element>> all_families(const FiniteModule& m, const Ordinal& length,
                                          const std::vector<Ordinal>& points, std::size_t max_pieces);

// ---------------------------------------------------------------------------
// Limit terms in the finitary theory

/// Instantiation of the refutation against one candidate term: two assignments
/// agreeing from `bound` on, where `constant_one` is constant 1.
struct RefutationInstance {
  Ordinal bound;
  PwcSeq<Element> constant_one;
  PwcSeq<Element> zero_below_bound;
  Element out_constant;
  Element out_zero_below;
  bool violates_l2 = false; // out_constant != 1
  bool violates_l1 = false; // out_constant != out_zero_below

  bool refutes() const { return violates_l1 || violates_l2; }
};

class RefutationCertificate {
public:
  RefutationCertificate(std::uint64_t modulus, Ordinal alpha) : modulus_(modulus), alpha_(std::move(alpha)) {}

  std::uint64_t modulus() const { return modulus_; }
  const Ordinal& alpha() const { return alpha_; }

  /// Evaluates the candidate on the certificate's assignments in Z/n.
  RefutationInstance instantiate(const Term& candidate) const;

private:
  std::uint64_t modulus_;
  Ordinal alpha_;
};

struct LimitTermExists {
  Term term;
};

using LimitTermVerdict = std::variant<LimitTermExists, RefutationCertificate>;

LimitTermVerdict refute_limit_term_finitary(std::uint64_t modulus, const Ordinal& alpha);

/// Random finitary additive terms over the variables below `bound`.
Term random_finitary_term(Rng& rng, std::uint64_t modulus, const Ordinal& bound, std::size_t depth);

} // namespace limterm
