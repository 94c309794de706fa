#pragma once

#include "limterm/error.hpp"
#include "limterm/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace limterm {

/// A family (v_g) indexed by an ordinal, constant on finitely many
/// consecutive half-open intervals [b_i, b_{i+1}).
///
/// Normal form: b_0 = 0, starts strictly increasing and below the length,
/// and no two adjacent pieces carry equal values. The empty family (length 0)
/// has no pieces. Structural equality is sequence equality.
template <class V>
class PwcSeq {
public:
  struct Piece {
    Ordinal start;
    V value;

    friend bool operator==(const Piece&, const Piece&) = default;
  };

  PwcSeq() = default;

  static PwcSeq constant(Ordinal length, V value) {
    PwcSeq s;
    s.length_ = std::move(length);
    if (!s.length_.is_zero()) {
      s.pieces_.push_back(Piece{Ordinal{}, std::move(value)});
    }
    return s;
  }

  /// Validates the piece list against `length` and coalesces equal neighbours.
  static PwcSeq from_pieces(Ordinal length, std::vector<Piece> pieces) {
    if (length.is_zero() != pieces.empty()) {
      fail(ErrorKind::InvalidSequence, length.is_zero() ? "a sequence of length 0 has no pieces"
                                                        : "a sequence of positive length needs at least one piece");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i == 0 && !pieces[0].start.is_zero()) {
        fail(ErrorKind::InvalidSequence, "first breakpoint is " + pieces[0].start.to_string() + ", expected 0");
      }
      if (i > 0 && !(pieces[i - 1].start < pieces[i].start)) {
        fail(ErrorKind::InvalidSequence, "breakpoints not strictly increasing at piece " + std::to_string(i) +
                                             " (" + pieces[i - 1].start.to_string() + " then " +
                                             pieces[i].start.to_string() + ")");
      }
      if (!(pieces[i].start < length)) {
        fail(ErrorKind::InvalidSequence, "piece " + std::to_string(i) + " starts at " + pieces[i].start.to_string() +
                                             ", not below the length " + length.to_string());
      }
    }
    PwcSeq s;
    s.length_ = std::move(length);
    for (auto& p : pieces) {
      if (!s.pieces_.empty() && s.pieces_.back().value == p.value) {
        continue;
      }
      s.pieces_.push_back(std::move(p));
    }
    return s;
  }

  const Ordinal& length() const { return length_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t piece_count() const { return pieces_.size(); }

  const Ordinal& piece_end(std::size_t i) const { return i + 1 < pieces_.size() ? pieces_[i + 1].start : length_; }

  /// b_0 < b_1 < ... < b_k = length.
  std::vector<Ordinal> breakpoints() const {
    std::vector<Ordinal> out;
    for (const auto& p : pieces_) {
      out.push_back(p.start);
    }
    out.push_back(length_);
    return out;
  }

  const V& value_at(const Ordinal& index) const {
    if (!(index < length_)) {
      fail(ErrorKind::IndexOutOfRange, "index " + index.to_string() + " not below length " + length_.to_string());
    }
    std::size_t lo = 0;
    std::size_t hi = pieces_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (pieces_[mid].start <= index) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return pieces_[lo].value;
  }

  template <class F>
  auto map(F&& f) const -> PwcSeq<std::decay_t<std::invoke_result_t<F&, const V&>>> {
    using U = std::decay_t<std::invoke_result_t<F&, const V&>>;
    std::vector<typename PwcSeq<U>::Piece> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) {
      out.push_back({p.start, f(p.value)});
    }
    return PwcSeq<U>::from_pieces(length_, std::move(out));
  }

  /// The family g -> v_{beta + g} on [0, length - beta).
  PwcSeq final_segment(const Ordinal& beta) const {
    if (!(beta < length_)) {
      fail(ErrorKind::IndexOutOfRange,
           "final segment at " + beta.to_string() + " of a sequence of length " + length_.to_string());
    }
    std::vector<Piece> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (piece_end(i) <= beta) {
        continue;
      }
      Ordinal start = pieces_[i].start <= beta ? Ordinal{} : left_subtract(beta, pieces_[i].start);
      out.push_back(Piece{std::move(start), pieces_[i].value});
    }
    return from_pieces(left_subtract(beta, length_), std::move(out));
  }

  /// Restriction to [0, beta).
  PwcSeq prefix(const Ordinal& beta) const {
    if (beta > length_) {
      fail(ErrorKind::IndexOutOfRange, "prefix " + beta.to_string() + " exceeds length " + length_.to_string());
    }
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
      if (p.start < beta) {
        out.push_back(p);
      }
    }
    return from_pieces(beta, std::move(out));
  }

  /// The family g -> v_{offset + g} on [0, len).
  PwcSeq slice(const Ordinal& offset, const Ordinal& len) const {
    const Ordinal end = offset + len;
    if (end > length_) {
      fail(ErrorKind::IndexOutOfRange, "slice [" + offset.to_string() + "," + end.to_string() +
                                           ") exceeds length " + length_.to_string());
    }
    if (len.is_zero()) {
      return PwcSeq{};
    }
    return prefix(end).final_segment(offset);
  }

  /// a followed by b, with length a.length + b.length.
  static PwcSeq concat(const PwcSeq& a, const PwcSeq& b) {
    std::vector<Piece> out = a.pieces_;
    for (const auto& p : b.pieces_) {
      out.push_back(Piece{a.length_ + p.start, p.value});
    }
    return from_pieces(a.length_ + b.length_, std::move(out));
  }

  /// Extends by `zero` on [length, alpha).
  PwcSeq zero_extend(const Ordinal& alpha, const V& zero) const {
    const Ordinal extra = left_subtract(length_, alpha);
    if (extra.is_zero()) {
      return *this;
    }
    return concat(*this, constant(extra, zero));
  }

  /// The explicit (index, value) list of entries different from `zero`,
  /// in increasing index order, provided every such piece is finite.
  std::optional<std::vector<std::pair<Ordinal, V>>> support_if_finite(const V& zero) const {
    std::vector<std::pair<Ordinal, V>> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].value == zero) {
        continue;
      }
      const auto n = interval_cardinality(pieces_[i].start, piece_end(i));
      if (!n) {
        return std::nullopt;
      }
      for (std::uint64_t k = 0; k < *n; ++k) {
        out.emplace_back(pieces_[i].start + Ordinal{k}, pieces_[i].value);
      }
    }
    return out;
  }

  /// Builds the family of length `length` that is `zero` outside the listed points.
  static PwcSeq from_support(const Ordinal& length, const std::vector<std::pair<Ordinal, V>>& entries,
                             const V& zero) {
    std::vector<std::pair<Ordinal, V>> sorted = entries;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Piece> out;
    Ordinal cursor;
    for (const auto& [index, value] : sorted) {
      if (!(index < length)) {
        fail(ErrorKind::IndexOutOfRange, "support index " + index.to_string() + " not below " + length.to_string());
      }
      if (index < cursor) {
        fail(ErrorKind::InvalidSequence, "duplicate support index " + index.to_string());
      }
      if (cursor < index) {
        out.push_back(Piece{cursor, zero});
      }
      out.push_back(Piece{index, value});
      cursor = index.successor();
    }
    if (cursor < length) {
      out.push_back(Piece{cursor, zero});
    }
    return from_pieces(length, std::move(out));
  }

  friend bool operator==(const PwcSeq&, const PwcSeq&) = default;

private:
  Ordinal length_;
  std::vector<Piece> pieces_;
};

/// Pointwise combination on the merged breakpoints, coalesced.
template <class V, class W, class F>
auto zip_map(const PwcSeq<V>& s, const PwcSeq<W>& t, F&& f)
    -> PwcSeq<std::decay_t<std::invoke_result_t<F&, const V&, const W&>>> {
  using U = std::decay_t<std::invoke_result_t<F&, const V&, const W&>>;
  if (s.length() != t.length()) {
    fail(ErrorKind::LengthMismatch,
         "zip of lengths " + s.length().to_string() + " and " + t.length().to_string());
  }
  std::vector<typename PwcSeq<U>::Piece> out;
  const auto& sp = s.pieces();
  const auto& tp = t.pieces();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sp.size() && j < tp.size()) {
    const Ordinal& start = sp[i].start < tp[j].start ? tp[j].start : sp[i].start;
    out.push_back({start, f(sp[i].value, tp[j].value)});
    const auto& ei = s.piece_end(i);
    const auto& ej = t.piece_end(j);
    if (ei == ej) {
      ++i;
      ++j;
    } else if (ei < ej) {
      ++i;
    } else {
      ++j;
    }
  }
  return PwcSeq<U>::from_pieces(s.length(), std::move(out));
}

// ---------------------------------------------------------------------------
// Text form: `[<ord>,<ord>) -> <value>` pieces separated by ';'.

namespace detail {

inline void skip_space(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
    ++pos;
  }
}

[[noreturn]] inline void pwc_parse_error(std::string_view text, std::size_t pos, const std::string& msg) {
  fail(ErrorKind::Parse, msg + " at position " + std::to_string(pos) + " in sequence '" + std::string(text) + "'");
}

inline void expect(std::string_view text, std::size_t& pos, std::string_view token) {
  skip_space(text, pos);
  if (text.substr(pos, token.size()) != token) {
    pwc_parse_error(text, pos, "expected '" + std::string(token) + "'");
  }
  pos += token.size();
}

} // namespace detail

/// Parses one `[a,b)` header, returning the bounds.
inline std::pair<Ordinal, Ordinal> parse_interval(std::string_view text, std::size_t& pos) {
  detail::expect(text, pos, "[");
  detail::skip_space(text, pos);
  Ordinal a = Ordinal::parse_prefix(text, pos);
  detail::expect(text, pos, ",");
  detail::skip_space(text, pos);
  Ordinal b = Ordinal::parse_prefix(text, pos);
  detail::expect(text, pos, ")");
  return {std::move(a), std::move(b)};
}

/// Assembles contiguous `[a,b)` intervals into a sequence, reporting the
/// first violated invariant.
template <class V>
PwcSeq<V> assemble_intervals(std::vector<std::pair<std::pair<Ordinal, Ordinal>, V>> parts) {
  if (parts.empty()) {
    return PwcSeq<V>{};
  }
  std::vector<typename PwcSeq<V>::Piece> pieces;
  Ordinal cursor;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto& [interval, value] = parts[i];
    if (interval.first != cursor) {
      fail(ErrorKind::InvalidSequence, "piece " + std::to_string(i) + " starts at " + interval.first.to_string() +
                                           " but the previous piece ended at " + cursor.to_string());
    }
    if (!(interval.first < interval.second)) {
      fail(ErrorKind::InvalidSequence, "piece " + std::to_string(i) + " is empty: [" + interval.first.to_string() +
                                           "," + interval.second.to_string() + ")");
    }
    cursor = interval.second;
    pieces.push_back({interval.first, std::move(value)});
  }
  return PwcSeq<V>::from_pieces(cursor, std::move(pieces));
}

/// `parse_value` receives the trimmed text after `->`.
template <class V, class ParseValue>
PwcSeq<V> parse_pwc(std::string_view text, ParseValue&& parse_value) {
  std::vector<std::pair<std::pair<Ordinal, Ordinal>, V>> parts;
  std::size_t pos = 0;
  detail::skip_space(text, pos);
  if (pos == text.size()) {
    return PwcSeq<V>{};
  }
  while (true) {
    auto interval = parse_interval(text, pos);
    detail::expect(text, pos, "->");
    detail::skip_space(text, pos);
    const std::size_t end = std::min(text.find(';', pos), text.size());
    std::string_view value_text = text.substr(pos, end - pos);
    while (!value_text.empty() && std::isspace(static_cast<unsigned char>(value_text.back()))) {
      value_text.remove_suffix(1);
    }
    if (value_text.empty()) {
      detail::pwc_parse_error(text, pos, "missing value");
    }
    parts.emplace_back(std::move(interval), parse_value(value_text));
    pos = end;
    if (pos == text.size()) {
      break;
    }
    ++pos;
  }
  return assemble_intervals<V>(std::move(parts));
}

template <class V, class FormatValue>
std::string format_pwc(const PwcSeq<V>& s, FormatValue&& format_value) {
  std::string out;
  for (std::size_t i = 0; i < s.piece_count(); ++i) {
    if (i > 0) {
      out += "; ";
    }
    out += '[' + s.pieces()[i].start.to_string() + ',' + s.piece_end(i).to_string() + ")->" +
           format_value(s.pieces()[i].value);
  }
  return out;
}

} // namespace limterm
