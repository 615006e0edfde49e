#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrsmooth/corpus.hpp"
#include "narrsmooth/ingest.hpp"

namespace narrsmooth {

enum class Rule { Surrounded, Boundary, LocalBefore, LocalAfter, Proximity };

// Short tags: R1, R2, R3a, R3b, R4.
inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::Surrounded: return "R1";
    case Rule::Boundary: return "R2";
    case Rule::LocalBefore: return "R3a";
    case Rule::LocalAfter: return "R3b";
    case Rule::Proximity: return "R4";
  }
  return "?";
}

enum class AmountMode { Seconds, Count };

inline const char* to_string(AmountMode m) { return m == AmountMode::Seconds ? "seconds" : "count"; }

struct DirectedInteraction {
  std::size_t scene = 0;
  CharacterId from;
  CharacterId to;
  Micros speech{0};
  std::size_t turn = 0;  // 0-based position of the turn in its scene
  Rule rule = Rule::Boundary;
  // Rule 4 applied although the speaker recurs on both sides of the
  // ambiguous triple.
  bool recurs_both_sides = false;

  Amount amount(AmountMode mode) const {
    return mode == AmountMode::Seconds ? Amount::from_duration(speech) : Amount::units(1);
  }
};

// Attributes every turn of a scene to exactly one addressee. Consecutive
// turns of one speaker (left over when merging did not join them) are
// resolved as a single position and share its addressee.
inline std::vector<DirectedInteraction> attribute_turns(const Scene& scene) {
  struct Run {
    CharacterId speaker;
    Micros start;
    Micros end;
    std::size_t first;
    std::size_t last;
  };
  std::vector<Run> runs;
  for (std::size_t k = 0; k < scene.turns.size(); ++k) {
    const auto& turn = scene.turns[k];
    if (!runs.empty() && runs.back().speaker == turn.speaker) {
      runs.back().end = std::max(runs.back().end, turn.end);
      runs.back().last = k;
    } else {
      runs.push_back({turn.speaker, turn.start, turn.end, k, k});
    }
  }
  std::vector<DirectedInteraction> out;
  const std::size_t n = runs.size();
  if (n < 2) return out;  // fewer than two speakers

  auto speaker_at = [&](std::ptrdiff_t k) -> std::optional<CharacterId> {
    if (k < 0 || k >= static_cast<std::ptrdiff_t>(n)) return std::nullopt;
    return runs[static_cast<std::size_t>(k)].speaker;
  };

  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto k = static_cast<std::ptrdiff_t>(pos);
    const CharacterId self = runs[pos].speaker;
    CharacterId to;
    Rule rule;
    bool both_sides = false;
    if (pos == 0) {
      to = runs[1].speaker, rule = Rule::Boundary;
    } else if (pos == n - 1) {
      to = runs[n - 2].speaker, rule = Rule::Boundary;
    } else if (runs[pos - 1].speaker == runs[pos + 1].speaker) {
      to = runs[pos - 1].speaker, rule = Rule::Surrounded;
    } else {
      const bool before = speaker_at(k - 2) == self;
      const bool after = speaker_at(k + 2) == self;
      if (before && !after) {
        to = runs[pos - 1].speaker, rule = Rule::LocalBefore;
      } else if (after && !before) {
        to = runs[pos + 1].speaker, rule = Rule::LocalAfter;
      } else {
        // Closer neighbour wins; a tie goes to the preceding speaker.
        const Micros gap_before = runs[pos].start - runs[pos - 1].end;
        const Micros gap_after = runs[pos + 1].start - runs[pos].end;
        to = gap_before <= gap_after ? runs[pos - 1].speaker : runs[pos + 1].speaker;
        rule = Rule::Proximity;
        both_sides = before && after;
      }
    }
    for (std::size_t t = runs[pos].first; t <= runs[pos].last; ++t) {
      out.push_back({scene.index, self, to, scene.turns[t].duration(), t, rule, both_sides});
    }
  }
  return out;
}

// Sparse symmetric matrix of one scene's interaction amounts h_ij.
struct SceneInteractionMatrix {
  std::size_t scene = 0;
  std::map<CharacterPair, Amount> entries;

  Amount at(CharacterId i, CharacterId j) const {
    if (i == j) return {};
    auto it = entries.find(CharacterPair::of(i, j));
    return it == entries.end() ? Amount{} : it->second;
  }
  Amount total() const {
    Amount sum;
    for (const auto& [_, h] : entries) sum += h;
    return sum;
  }
  bool empty() const { return entries.empty(); }
};

inline SceneInteractionMatrix scene_matrix(const std::vector<DirectedInteraction>& interactions,
                                           AmountMode mode = AmountMode::Seconds) {
  SceneInteractionMatrix m;
  if (interactions.empty()) return m;
  m.scene = interactions.front().scene;
  for (const auto& di : interactions) {
    if (di.scene != m.scene) throw std::invalid_argument("scene_matrix: interactions span several scenes");
    if (di.from == di.to) throw std::invalid_argument("scene_matrix: self interaction");
    m.entries[CharacterPair::of(di.from, di.to)] += di.amount(mode);
  }
  return m;
}

// h_ij^(t) for every scene, plus per-character strength prefix sums
// P_c(t) = sum_{t' <= t} sum_k h_ck^(t').
class InteractionSequence {
 public:
  struct Occurrence {
    std::size_t scene;
    Amount amount;
  };
  using DirectedMatrix = std::map<std::pair<CharacterId, CharacterId>, Amount>;

  InteractionSequence() = default;

  InteractionSequence(CharacterRegistry characters, std::vector<SceneInteractionMatrix> matrices,
                      AmountMode mode = AmountMode::Seconds, std::vector<DirectedMatrix> directed = {})
      : characters_(std::move(characters)),
        matrices_(std::move(matrices)),
        directed_(std::move(directed)),
        mode_(mode) {
    if (!directed_.empty() && directed_.size() != matrices_.size()) {
      throw std::invalid_argument("directed matrices must match scene count");
    }
    const std::size_t S = matrices_.size();
    for (std::size_t t = 1; t <= S; ++t) {
      matrices_[t - 1].scene = t;
      for (const auto& [pair, h] : matrices_[t - 1].entries) {
        if (pair.first == pair.second) throw std::invalid_argument("self pair in interaction matrix");
        if (pair.second.value >= characters_.size()) throw std::invalid_argument("unknown character id in matrix");
        if (h < Amount{}) throw std::invalid_argument("negative interaction amount");
        if (h.positive()) pairs_[pair].push_back({t, h});
      }
    }
    prefix_.assign(characters_.size() * (S + 1), 0);
    for (std::size_t t = 1; t <= S; ++t) {
      for (const auto& [pair, h] : matrices_[t - 1].entries) {
        prefix_[pair.first.value * (S + 1) + t] += h.micros();
        prefix_[pair.second.value * (S + 1) + t] += h.micros();
      }
    }
    for (std::size_t c = 0; c < characters_.size(); ++c) {
      auto* row = &prefix_[c * (S + 1)];
      for (std::size_t t = 1; t <= S; ++t) row[t] += row[t - 1];
    }
  }

  const CharacterRegistry& characters() const { return characters_; }
  std::size_t scene_count() const { return matrices_.size(); }
  std::size_t character_count() const { return characters_.size(); }
  AmountMode mode() const { return mode_; }
  bool has_directed() const { return !directed_.empty(); }

  const SceneInteractionMatrix& matrix(std::size_t t) const { return matrices_.at(t - 1); }
  const std::vector<SceneInteractionMatrix>& matrices() const { return matrices_; }
  const DirectedMatrix& directed(std::size_t t) const { return directed_.at(t - 1); }
  Amount h(CharacterId i, CharacterId j, std::size_t t) const { return matrix(t).at(i, j); }

  // Pairs with at least one active scene, each with its ascending occurrences.
  const std::map<CharacterPair, std::vector<Occurrence>>& pairs() const { return pairs_; }

  // strength_c(t) = sum_k h_ck^(t).
  Amount strength(CharacterId c, std::size_t t) const {
    return Amount::from_micros(prefix(c, t).micros() - prefix(c, t - 1).micros());
  }
  // sum_{t' <= t} strength_c(t'); t = 0 yields zero.
  Amount prefix(CharacterId c, std::size_t t) const {
    const std::size_t S = scene_count();
    if (c.value >= characters_.size() || t > S) throw std::out_of_range("strength prefix query out of range");
    return Amount::from_micros(prefix_[c.value * (S + 1) + t]);
  }
  // sum_{t' in [from, to]} strength_c(t'); empty when from > to.
  Amount strength_between(CharacterId c, std::size_t from, std::size_t to) const {
    if (from > to) return {};
    return prefix(c, to) - prefix(c, from - 1);
  }

 private:
  CharacterRegistry characters_;
  std::vector<SceneInteractionMatrix> matrices_;
  std::vector<DirectedMatrix> directed_;
  std::map<CharacterPair, std::vector<Occurrence>> pairs_;
  std::vector<std::int64_t> prefix_;
  AmountMode mode_ = AmountMode::Seconds;
};

struct SequenceOptions {
  AmountMode mode = AmountMode::Seconds;
  // Same-speaker merge threshold applied before attribution; nullopt skips it.
  std::optional<Micros> merge_gap = kDefaultMergeGap;
};

inline std::vector<DirectedInteraction> attribute_corpus(const Corpus& corpus, const SequenceOptions& options = {}) {
  std::vector<DirectedInteraction> out;
  for (const auto& scene : corpus.scenes) {
    auto di = attribute_turns(options.merge_gap ? merge_adjacent_turns(scene, *options.merge_gap) : scene);
    out.insert(out.end(), di.begin(), di.end());
  }
  return out;
}

inline InteractionSequence build_sequence(const Corpus& corpus, const SequenceOptions& options = {}) {
  std::vector<SceneInteractionMatrix> matrices(corpus.scene_count());
  std::vector<InteractionSequence::DirectedMatrix> directed(corpus.scene_count());
  for (std::size_t t = 1; t <= corpus.scene_count(); ++t) {
    const auto& scene = corpus.scene(t);
    auto di = attribute_turns(options.merge_gap ? merge_adjacent_turns(scene, *options.merge_gap) : scene);
    for (auto& d : di) {
      d.scene = t;
      directed[t - 1][{d.from, d.to}] += d.amount(options.mode);
    }
    matrices[t - 1] = scene_matrix(di, options.mode);
    matrices[t - 1].scene = t;
  }
  return InteractionSequence(corpus.characters, std::move(matrices), options.mode, std::move(directed));
}

// Audit dump: scene, from, to, seconds, rule, note.
inline std::string dump_interactions(const std::vector<DirectedInteraction>& interactions,
                                     const CharacterRegistry& characters) {
  std::string out = "scene\tfrom\tto\tseconds\trule\tnote\n";
  for (const auto& d : interactions) {
    out += std::to_string(d.scene) + '\t' + characters.name(d.from) + '\t' + characters.name(d.to) + '\t' +
           format_fixed_micros(d.speech.count(), 3) + '\t' + to_string(d.rule) + '\t' +
           (d.recurs_both_sides ? "recurs-both-sides" : "") + '\n';
  }
  return out;
}

}  // namespace narrsmooth
