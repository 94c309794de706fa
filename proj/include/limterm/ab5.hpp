#pragma once

#include "limterm/diagrams.hpp"
#include "limterm/transfinite.hpp"

#include <optional>
#include <string>
#include <vector>

namespace limterm {

/// Index sets are finite ordinals k or w.
bool supported_index_set(const Ordinal& x);

/// Is P^(X) -> P^X surjective for P = T(1) = Z/n?
struct EtaVerdict {
  std::uint64_t modulus = 1;
  bool infinitary = false;
  Ordinal set;
  bool surjective = false;
  std::string certificate;
  std::size_t checked = 0;
};

EtaVerdict eta_surjective_decision(const Theory& theory, const Ordinal& x, Rng& rng);

/// A preimage of a family in P^X under P^(X) -> P^X: a combination of sums over
/// the pieces, or of variables when `infinitary` is false (finite X only).
Term eta_preimage(const PwcSeq<Element>& family, bool infinitary);

/// The family (p_x(t))_x, p_x sending the generator x to 1 and the others to 0, sampled at `points`.
std::vector<Element> indicator_components(const Term& t, const Ordinal& x, const std::vector<Ordinal>& points,
                                          const Theory& theory);

/// Sample points of an index set: all of a finite set, or a spread of w.
std::vector<Ordinal> index_samples(const Ordinal& x);

struct DiagonalVerdict {
  bool factors = false;
  std::optional<Term> sigma;
  std::string certificate;
  std::size_t checked = 0;
};

/// Does P -> P^X factor through P^(X)? Witnessed by a summation term, or refuted.
DiagonalVerdict diagonal_factorization(const Theory& theory, const Ordinal& x, Rng& rng);

struct SummationCheck {
  bool pass = true;
  std::size_t trials = 0;
  std::string witness;
};

/// Finite-support families over `x`; the evaluator must return the sum of the entries.
SummationCheck summation_term_check(const Evaluator& f, const Ordinal& x, const std::vector<FiniteModule>& battery,
                                    std::size_t trials, Rng& rng);

/// Induced maps f : P -> M^X given by components m_x factor through the coproduct.
SummationCheck naturality_factorization_check(const Theory& theory, const Ordinal& x, const FiniteModule& m,
                                              std::size_t trials, Rng& rng);

struct AuditRow {
  std::uint64_t modulus = 1;
  bool infinitary = false;
  bool inverse_limits = false; // limit term exists (key diagram check)
  bool eta = false;            // eta surjective for every tested X
  bool diagonal = false;       // diagonal factors for every tested X
  std::string evidence;

  bool agree() const { return inverse_limits == eta && eta == diagonal; }
};

std::vector<AuditRow> equivalence_audit(std::uint64_t max_modulus, Rng& rng, std::size_t trials = 20);

struct CandidateAudit {
  std::string name;
  Term term;
  bool constant_family = false; // (p_x(t))_x is the constant generator family
  bool summation = false;       // acts as finite summation
  bool agree() const { return constant_family == summation; }
};

/// Compares the two characterizations of summation terms on a fixed set of candidates.
std::vector<CandidateAudit> summation_criterion_audit(const Ordinal& x, std::uint64_t modulus,
                                                      const std::vector<FiniteModule>& battery, std::size_t trials,
                                                      Rng& rng);

} // namespace limterm
