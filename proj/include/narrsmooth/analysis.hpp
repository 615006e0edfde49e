#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "narrsmooth/dynamic.hpp"

namespace narrsmooth {

enum class Direction { Out, Undirected };

struct StrengthSeries {
  CharacterId character;
  MethodParams params;
  std::vector<double> values;  // one per scene
};

struct EdgeSeries {
  CharacterPair pair;
  MethodParams params;
  std::vector<double> values;
};

struct RankedCharacter {
  CharacterId character;
  std::string name;
  double strength = 0.0;
};

namespace detail {

inline void require_character(const CharacterRegistry& registry, CharacterId c) {
  if (c.value >= registry.size()) throw UnknownEntityError("#" + std::to_string(c.value), registry.suggest(""));
}

}  // namespace detail

// Out mode sums the directed amounts leaving the node and needs a graph
// aggregated from attributed turns. On smoothed snapshots edges are
// symmetric, so only the undirected mode applies.
inline double strength(const StaticGraph& graph, CharacterId c, Direction direction = Direction::Undirected) {
  detail::require_character(graph.characters, c);
  double sum = 0.0;
  if (direction == Direction::Out) {
    if (!graph.directed) throw std::invalid_argument("graph carries no directed amounts");
    for (const auto& [pair, w] : *graph.directed) {
      if (pair.first == c) sum += w;
    }
    return sum;
  }
  for (const auto& [pair, w] : graph.edges) {
    if (pair.contains(c)) sum += w;
  }
  return sum;
}

inline StrengthSeries strength_series(const DynamicNetwork& dyn, CharacterId c) {
  detail::require_character(dyn.characters(), c);
  const auto& seq = dyn.sequence();
  const std::size_t S = dyn.scene_count();
  StrengthSeries out{c, dyn.params(), std::vector<double>(S, 0.0)};
  switch (dyn.method()) {
    case Method::Cumulative:
      for (std::size_t t = 1; t <= S; ++t) out.values[t - 1] = seq.prefix(c, t).value();
      break;
    case Method::TimeSlice: {
      const std::size_t w = *dyn.params().window;
      for (std::size_t t = 1; t <= S; ++t) {
        out.values[t - 1] = (seq.prefix(c, t) - seq.prefix(c, t > w ? t - w : 0)).value();
      }
      break;
    }
    case Method::Smoothing:
      for (const auto& [pair, _] : seq.pairs()) {
        if (!pair.contains(c)) continue;
        const auto values = dyn.series(pair);
        for (std::size_t t = 0; t < S; ++t) out.values[t] += values[t];
      }
      break;
  }
  return out;
}

inline EdgeSeries edge_series(const DynamicNetwork& dyn, CharacterId i, CharacterId j) {
  detail::require_character(dyn.characters(), i);
  detail::require_character(dyn.characters(), j);
  const auto pair = CharacterPair::of(i, j);
  return {pair, dyn.params(), dyn.series(pair)};
}

// Descending strength, ties by name.
inline std::vector<RankedCharacter> rank_by_strength(const StaticGraph& graph,
                                                     Direction direction = Direction::Undirected) {
  std::vector<RankedCharacter> out;
  for (std::uint32_t c = 0; c < graph.characters.size(); ++c) {
    out.push_back({CharacterId{c}, graph.characters.name(CharacterId{c}), strength(graph, CharacterId{c}, direction)});
  }
  std::sort(out.begin(), out.end(), [](const RankedCharacter& a, const RankedCharacter& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    return a.name < b.name;
  });
  return out;
}

}  // namespace narrsmooth
