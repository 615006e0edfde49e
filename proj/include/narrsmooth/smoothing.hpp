#pragma once

// Narrative smoothing of pairwise interaction weights.
//
// For a pair (i, j) and scene t the raw weight w_ij(t) is
//   * h_ij(t) when the pair is active at t;
//   * max(persistence, anticipation) between two consecutive occurrences;
//   * persistence after the last occurrence, provided i or j talks to a
//     third party at some scene after it, and -inf otherwise;
//   * anticipation before the first occurrence, provided i or j has talked
//     to a third party within [1, t], and -inf otherwise.
// Normalized weights are n = 1 / (1 + exp(-lambda w)), with n(-inf) = 0.
//
// Third-party talk of i at a scene where the pair is inactive equals the
// strength of i there, so every balance is a difference of strength
// prefix sums.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "narrsmooth/interaction.hpp"

namespace narrsmooth {

inline constexpr double kDefaultLambda = 0.01;

namespace detail {

inline const std::vector<InteractionSequence::Occurrence>* occurrences_of(const InteractionSequence& seq,
                                                                         CharacterPair pair) {
  auto it = seq.pairs().find(pair);
  return it == seq.pairs().end() ? nullptr : &it->second;
}

inline Amount third_party(const InteractionSequence& seq, CharacterPair pair, std::size_t from, std::size_t to) {
  return seq.strength_between(pair.first, from, to) + seq.strength_between(pair.second, from, to);
}

#ifndef NDEBUG
inline bool inactive_throughout(const InteractionSequence& seq, CharacterPair pair, std::size_t from, std::size_t to) {
  for (std::size_t t = from; t <= to; ++t) {
    if (seq.h(pair.first, pair.second, t).positive()) return false;
  }
  return true;
}
#endif

inline void require_pair(const InteractionSequence& seq, CharacterId i, CharacterId j) {
  if (i == j) throw std::invalid_argument("a pair needs two distinct characters");
  if (i.value >= seq.character_count() || j.value >= seq.character_count()) {
    throw std::out_of_range("character id out of range");
  }
}

}  // namespace detail

// Balance between the pair's interaction at its last active scene l and the
// time i and j spent with third parties over (l, t].
inline Amount persistence(const InteractionSequence& seq, CharacterId i, CharacterId j, std::size_t last,
                          std::size_t t) {
  detail::require_pair(seq, i, j);
  const auto pair = CharacterPair::of(i, j);
  if (last < 1 || last > seq.scene_count() || !seq.h(i, j, last).positive()) {
    throw std::invalid_argument("persistence: scene " + std::to_string(last) + " is not active for the pair");
  }
  if (t <= last || t > seq.scene_count()) throw std::invalid_argument("persistence: requires last < t <= S");
  assert(detail::inactive_throughout(seq, pair, last + 1, t));
  return seq.h(i, j, last) - detail::third_party(seq, pair, last + 1, t);
}

// Balance between the pair's interaction at its next active scene n and the
// time i and j spend with third parties over [t, n).
inline Amount anticipation(const InteractionSequence& seq, CharacterId i, CharacterId j, std::size_t next,
                           std::size_t t) {
  detail::require_pair(seq, i, j);
  const auto pair = CharacterPair::of(i, j);
  if (next < 1 || next > seq.scene_count() || !seq.h(i, j, next).positive()) {
    throw std::invalid_argument("anticipation: scene " + std::to_string(next) + " is not active for the pair");
  }
  if (t < 1 || t >= next) throw std::invalid_argument("anticipation: requires 1 <= t < next");
  assert(detail::inactive_throughout(seq, pair, t, next - 1));
  return seq.h(i, j, next) - detail::third_party(seq, pair, t, next - 1);
}

// Raw smoothed weight of (i, j) at scene t.
inline ExtendedWeight smoothed_weight(const InteractionSequence& seq, CharacterId i, CharacterId j, std::size_t t) {
  detail::require_pair(seq, i, j);
  if (t < 1 || t > seq.scene_count()) throw std::out_of_range("scene out of range");
  const auto pair = CharacterPair::of(i, j);
  const auto* occ = detail::occurrences_of(seq, pair);
  if (occ == nullptr) return ExtendedWeight::neg_inf();

  auto next = std::lower_bound(occ->begin(), occ->end(), t,
                               [](const InteractionSequence::Occurrence& o, std::size_t s) { return o.scene < s; });
  if (next != occ->end() && next->scene == t) return next->amount;
  const std::size_t S = seq.scene_count();
  const bool has_next = next != occ->end();
  const bool has_last = next != occ->begin();
  if (has_last && has_next) {
    const auto& l = *std::prev(next);
    return max(ExtendedWeight(l.amount - detail::third_party(seq, pair, l.scene + 1, t)),
               ExtendedWeight(next->amount - detail::third_party(seq, pair, t, next->scene - 1)));
  }
  if (has_last) {
    const auto& l = occ->back();
    if (!detail::third_party(seq, pair, l.scene + 1, S).positive()) return ExtendedWeight::neg_inf();
    return l.amount - detail::third_party(seq, pair, l.scene + 1, t);
  }
  if (!detail::third_party(seq, pair, 1, t).positive()) return ExtendedWeight::neg_inf();
  return next->amount - detail::third_party(seq, pair, t, next->scene - 1);
}

inline double normalize(const ExtendedWeight& w, double lambda = kDefaultLambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (w.is_neg_inf()) return 0.0;
  return 1.0 / (1.0 + std::exp(-lambda * w.value()));
}

// Raw weights of one pair over scenes 1..S, in a single forward pass.
inline std::vector<ExtendedWeight> smoothed_series(const InteractionSequence& seq, CharacterPair pair) {
  detail::require_pair(seq, pair.first, pair.second);
  const std::size_t S = seq.scene_count();
  std::vector<ExtendedWeight> out(S, ExtendedWeight::neg_inf());
  const auto* occ = detail::occurrences_of(seq, pair);
  if (occ == nullptr) return out;

  const auto& first = occ->front();
  for (std::size_t t = 1; t < first.scene; ++t) {
    if (detail::third_party(seq, pair, 1, t).positive()) {
      out[t - 1] = first.amount - detail::third_party(seq, pair, t, first.scene - 1);
    }
  }
  for (std::size_t k = 0; k < occ->size(); ++k) {
    const auto& l = (*occ)[k];
    out[l.scene - 1] = l.amount;
    if (k + 1 < occ->size()) {
      const auto& n = (*occ)[k + 1];
      for (std::size_t t = l.scene + 1; t < n.scene; ++t) {
        out[t - 1] = max(ExtendedWeight(l.amount - detail::third_party(seq, pair, l.scene + 1, t)),
                         ExtendedWeight(n.amount - detail::third_party(seq, pair, t, n.scene - 1)));
      }
    }
  }
  const auto& last = occ->back();
  if (detail::third_party(seq, pair, last.scene + 1, S).positive()) {
    for (std::size_t t = last.scene + 1; t <= S; ++t) {
      out[t - 1] = last.amount - detail::third_party(seq, pair, last.scene + 1, t);
    }
  }
  return out;
}

}  // namespace narrsmooth
