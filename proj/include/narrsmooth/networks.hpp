#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "narrsmooth/interaction.hpp"

namespace narrsmooth {

// Undirected weighted graph over a corpus' characters, optionally carrying
// the directed amounts it was aggregated from.
struct StaticGraph {
  CharacterRegistry characters;
  std::map<CharacterPair, double> edges;  // weight > 0, no self-loops
  std::optional<std::map<std::pair<CharacterId, CharacterId>, double>> directed;
  std::size_t first_scene = 1;
  std::size_t last_scene = 0;
  std::string unit = "seconds";  // "seconds", "count" or "normalized"

  double weight(CharacterId i, CharacterId j) const {
    if (i == j) return 0.0;
    auto it = edges.find(CharacterPair::of(i, j));
    return it == edges.end() ? 0.0 : it->second;
  }
};

namespace detail {

inline void check_scene(const InteractionSequence& seq, std::size_t t) {
  if (t < 1 || t > seq.scene_count()) {
    throw std::out_of_range("scene " + std::to_string(t) + " outside 1.." + std::to_string(seq.scene_count()));
  }
}

// Sums h over scenes [a, b].
inline StaticGraph aggregate(const InteractionSequence& seq, std::size_t a, std::size_t b) {
  std::map<CharacterPair, Amount> sums;
  std::map<std::pair<CharacterId, CharacterId>, Amount> dsums;
  for (std::size_t t = a; t <= b; ++t) {
    for (const auto& [pair, h] : seq.matrix(t).entries) sums[pair] += h;
    if (seq.has_directed()) {
      for (const auto& [pair, h] : seq.directed(t)) dsums[pair] += h;
    }
  }
  StaticGraph g{seq.characters(), {}, std::nullopt, a, b, to_string(seq.mode())};
  for (const auto& [pair, h] : sums) {
    if (h.positive()) g.edges.emplace(pair, h.value());
  }
  if (seq.has_directed()) {
    g.directed.emplace();
    for (const auto& [pair, h] : dsums) {
      if (h.positive()) g.directed->emplace(pair, h.value());
    }
  }
  return g;
}

}  // namespace detail

// Every interaction of scenes 1..upto (default: the whole corpus) in one graph.
inline StaticGraph cumulative(const InteractionSequence& seq, std::optional<std::size_t> upto = std::nullopt) {
  const std::size_t t = upto.value_or(seq.scene_count());
  detail::check_scene(seq, t);
  return detail::aggregate(seq, 1, t);
}

// Interactions of the trailing window [max(1, t-W+1), t].
inline StaticGraph time_slice(const InteractionSequence& seq, std::size_t t, std::size_t window) {
  if (window < 1) throw std::invalid_argument("time-slice window must be at least one scene");
  detail::check_scene(seq, t);
  return detail::aggregate(seq, t >= window ? t - window + 1 : 1, t);
}

}  // namespace narrsmooth
