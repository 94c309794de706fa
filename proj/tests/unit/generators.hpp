#pragma once

#include "limterm/module.hpp"
#include "limterm/ordinal.hpp"
#include "limterm/pwcseq.hpp"
#include "limterm/rng.hpp"
#include "limterm/term.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace gen {

using namespace limterm;

/// An ordinal below w^w as coefficients indexed by exponent; the test-side model.
using Cnf = std::vector<std::uint64_t>;

inline Cnf random_cnf(Rng& rng, std::size_t max_exponent = 3, std::uint64_t max_coef = 4) {
  Cnf c(max_exponent + 1, 0);
  for (auto& x : c) {
    x = rng.below(3) == 0 ? rng.below(max_coef + 1) : 0;
  }
  return c;
}

inline std::string cnf_text(const Cnf& c) {
  std::string out;
  for (std::size_t e = c.size(); e-- > 0;) {
    if (c[e] == 0) continue;
    if (!out.empty()) out += "+";
    if (e == 0) {
      out += std::to_string(c[e]);
      continue;
    }
    out += e == 1 ? "w" : "w^" + std::to_string(e);
    if (c[e] > 1) out += "*" + std::to_string(c[e]);
  }
  return out.empty() ? "0" : out;
}

inline Ordinal ordinal_of(const Cnf& c) { return Ordinal::parse(cnf_text(c)); }

inline Ordinal random_ordinal(Rng& rng) { return ordinal_of(random_cnf(rng)); }

inline Ordinal random_positive_ordinal(Rng& rng) {
  while (true) {
    auto a = random_ordinal(rng);
    if (!a.is_zero()) return a;
  }
}

/// Points below `length`: 0, random ordinals, and the neighbours of its limit part.
inline std::vector<Ordinal> points_below(Rng& rng, const Ordinal& length, std::size_t count) {
  std::vector<Ordinal> pts{Ordinal{}};
  for (std::size_t i = 0; i < 4 * count; ++i) {
    auto a = random_ordinal(rng);
    if (a < length) pts.push_back(a);
  }
  const auto [lambda, n] = split_finite_tail(length);
  for (std::uint64_t k = 0; k < std::min<std::uint64_t>(n, 3); ++k) pts.push_back(lambda + k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  while (pts.size() > count) pts.erase(pts.begin() + 1 + static_cast<std::ptrdiff_t>(rng.below(pts.size() - 1)));
  return pts;
}

inline Element random_element(Rng& rng, const FiniteModule& m) { return m.element_at(rng.below(m.size())); }

template <class V, class Draw>
PwcSeq<V> random_seq(Rng& rng, const Ordinal& length, std::size_t max_pieces, Draw&& draw) {
  if (length.is_zero()) return {};
  const auto starts = points_below(rng, length, 1 + rng.below(max_pieces));
  std::vector<typename PwcSeq<V>::Piece> pieces;
  for (const auto& s : starts) pieces.push_back({s, draw()});
  return PwcSeq<V>::from_pieces(length, std::move(pieces));
}

inline PwcSeq<Element> random_family(Rng& rng, const FiniteModule& m, const Ordinal& length, std::size_t max_pieces = 4) {
  return random_seq<Element>(rng, length, max_pieces, [&] { return random_element(rng, m); });
}

inline FiniteModule random_module(Rng& rng) {
  static const std::vector<std::vector<std::uint64_t>> shapes{{1}, {2}, {3}, {4}, {6}, {2, 2}, {2, 4}, {8}};
  return FiniteModule{shapes[rng.below(shapes.size())]};
}

/// A random additive term over the variables below `bound`.
inline Term random_term(Rng& rng, const Ordinal& bound, std::size_t depth, bool infinitary) {
  const auto leaf = [&] {
    const auto pts = points_below(rng, bound, 3);
    return Term::var(pts[rng.below(pts.size())]);
  };
  if (depth == 0) return rng.below(5) == 0 ? Term::zero() : leaf();
  switch (rng.below(infinitary ? 6 : 4)) {
  case 0:
    return leaf();
  case 1:
    return Term::plus(random_term(rng, bound, depth - 1, infinitary), random_term(rng, bound, depth - 1, infinitary));
  case 2:
    return Term::neg(random_term(rng, bound, depth - 1, infinitary));
  case 3:
    return Term::scal(rng.below(5), random_term(rng, bound, depth - 1, infinitary));
  default: {
    const auto len = random_positive_ordinal(rng);
    Family fam = rng.coin() && len <= bound
                     ? Family{Basis{len, Ordinal{}}}
                     : Family{random_seq<Term>(rng, len, 3, [&] { return random_term(rng, bound, depth - 1, infinitary); })};
    return rng.coin() ? Term::sum(fam) : Term::lim(fam);
  }
  }
}

} // namespace gen
