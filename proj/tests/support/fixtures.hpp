#pragma once

// Corpora shared by the unit and acceptance suites.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "narrsmooth/narrsmooth.hpp"

namespace narrsmooth::testing {

// Four scenes: Francis and Claire talk 30 s, Claire talks 40 s with Remy,
// Doug and Seth talk 50 s, Francis and Claire talk 20 s.
inline std::string worked_example_transcript() {
  return "episode\tscene\tspeaker\tstart\tend\ttext\n"
         "S1E1\t1\tFrancis\t0\t15\tWe need to talk.\n"
         "S1E1\t1\tClaire\t15\t30\tThen talk.\n"
         "S1E1\t2\tClaire\t100\t120\tHow is the foundation?\n"
         "S1E1\t2\tRemy\t120\t140\tFunding is short.\n"
         "S1E1\t3\tDoug\t200\t225\tIt is done.\n"
         "S1E1\t3\tSeth\t225\t250\tGood.\n"
         "S1E1\t4\tFrancis\t300\t310\tWell?\n"
         "S1E1\t4\tClaire\t310\t320\tWell.\n";
}

inline Corpus worked_example_corpus() { return parse_transcript(worked_example_transcript()); }

// Builds a scene from (speaker, start, end) triples in seconds.
struct TurnSpec {
  std::string speaker;
  double start;
  double end;
};

inline Corpus corpus_from_scenes(const std::vector<std::vector<TurnSpec>>& scenes) {
  std::string text = "episode\tscene\tspeaker\tstart\tend\ttext\n";
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    if (scenes[s].empty()) text += "E\t" + std::to_string(s + 1) + "\t\t\t\t\n";
    for (const auto& t : scenes[s]) {
      text += "E\t" + std::to_string(s + 1) + '\t' + t.speaker + '\t' + format_fixed(t.start, 6) + '\t' +
              format_fixed(t.end, 6) + "\t\n";
    }
  }
  return parse_transcript(text);
}

// Scene with unit-duration alternating turns, one turn per speaker name.
inline std::vector<TurnSpec> alternating(const std::vector<std::string>& speakers, double turn = 1.0,
                                         double gap = 0.0) {
  std::vector<TurnSpec> out;
  double t = 0.0;
  for (const auto& s : speakers) {
    out.push_back({s, t, t + turn});
    t += turn + gap;
  }
  return out;
}

// Pattern s12..s12 s13..s13 s23..s23 with `per_segment` scenes per pair.
// Every scene has h = 1 s between its two speakers.
inline Corpus triangle_corpus(std::size_t per_segment) {
  std::vector<std::vector<TurnSpec>> scenes;
  for (auto [a, b] : {std::pair{"c1", "c2"}, std::pair{"c1", "c3"}, std::pair{"c2", "c3"}}) {
    for (std::size_t k = 0; k < per_segment; ++k) scenes.push_back(alternating({a, b}, 0.5));
  }
  return corpus_from_scenes(scenes);
}

// Sparse random interaction sequence: each scene involves 0..max_speakers
// characters; every interacting pair gets an amount of whole milliseconds.
inline InteractionSequence random_sequence(std::mt19937_64& rng, std::size_t scenes, std::size_t characters,
                                           std::size_t max_speakers = 4) {
  CharacterRegistry reg;
  for (std::size_t c = 0; c < characters; ++c) reg.intern("c" + std::to_string(c));
  std::vector<SceneInteractionMatrix> matrices(scenes);
  std::uniform_int_distribution<std::size_t> speakers_dist(0, std::min(max_speakers, characters));
  std::uniform_int_distribution<std::int64_t> ms(1, 120'000);
  std::vector<std::uint32_t> ids(characters);
  for (std::uint32_t c = 0; c < characters; ++c) ids[c] = c;
  for (auto& m : matrices) {
    const auto k = speakers_dist(rng);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (rng() % 3 == 0) continue;
        m.entries[CharacterPair::of(CharacterId{ids[a]}, CharacterId{ids[b]})] = Amount::from_micros(ms(rng) * 1000);
      }
    }
  }
  return InteractionSequence(std::move(reg), std::move(matrices));
}

// Random corpus of timed turns; speakers of a scene are drawn from a small
// cast so that pairs recur with gaps.
inline Corpus random_corpus(std::mt19937_64& rng, std::size_t scenes, std::size_t characters,
                            std::size_t max_turns = 12) {
  std::vector<std::vector<TurnSpec>> out(scenes);
  std::uniform_int_distribution<std::size_t> cast_size(1, std::min<std::size_t>(4, characters));
  std::uniform_int_distribution<std::size_t> turns(0, max_turns);
  std::uniform_int_distribution<int> dur_ms(200, 8000);
  std::uniform_int_distribution<int> gap_ms(0, 3000);
  std::uniform_int_distribution<std::size_t> who(0, characters - 1);
  for (auto& scene : out) {
    std::vector<std::size_t> cast;
    const auto k = cast_size(rng);
    while (cast.size() < k) {
      auto c = who(rng);
      if (std::find(cast.begin(), cast.end(), c) == cast.end()) cast.push_back(c);
    }
    double t = 0.0;
    const auto n = turns(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = cast[rng() % cast.size()];
      const double d = dur_ms(rng) / 1000.0;
      scene.push_back({"c" + std::to_string(c), t, t + d});
      t += d + gap_ms(rng) / 1000.0;
    }
  }
  return corpus_from_scenes(out);
}

// Random merged scene as a Scene value (no parsing), for rule tests.
inline Scene random_scene(std::mt19937_64& rng, std::size_t speakers, std::size_t turns) {
  Scene s{1, "E", 1, {}};
  std::int64_t t = 0;
  std::uniform_int_distribution<std::int64_t> dur(100'000, 10'000'000);
  std::uniform_int_distribution<std::int64_t> gap(0, 4'000'000);
  for (std::size_t i = 0; i < turns; ++i) {
    std::uint32_t sp = static_cast<std::uint32_t>(rng() % speakers);
    if (!s.turns.empty() && speakers > 1) {
      while (sp == s.turns.back().speaker.value) sp = static_cast<std::uint32_t>(rng() % speakers);
    }
    const auto d = dur(rng);
    s.turns.push_back(make_turn(CharacterId{sp}, Micros(t), Micros(t + d)));
    t += d + gap(rng);
  }
  return s;
}

// Synthetic corpus at the magnitude of a long-running series: `scenes`
// scenes, ~32.7 turns per spoken scene, `characters` characters organised
// in communities of eight. Speakers per scene follow fixed quotas over 1073
// scenes (39 silent) giving a mean of 2.93 and a standard deviation of 1.60.
inline std::string synthetic_series_transcript(std::size_t scenes = 1073, std::size_t characters = 100,
                                               std::uint64_t seed = 20161016) {
  std::mt19937_64 rng(seed);
  constexpr int quota[] = {39, 98, 354, 256, 166, 128, 6, 4, 8, 2, 12};
  std::vector<std::size_t> speakers;
  for (std::size_t k = 0; k < std::size(quota); ++k) speakers.insert(speakers.end(), quota[k], k);
  std::shuffle(speakers.begin(), speakers.end(), rng);
  std::poisson_distribution<int> extra_turns(29.7);
  std::uniform_int_distribution<int> dur_ms(600, 3400);
  std::uniform_int_distribution<int> gap_ms(50, 1500);
  const std::size_t community = 8;
  const std::size_t communities = (characters + community - 1) / community;
  std::uniform_int_distribution<std::size_t> pick_community(0, communities - 1);

  std::string out = "episode\tscene\tspeaker\tstart\tend\ttext\n";
  const std::size_t per_episode = (scenes + 49) / 50;
  for (std::size_t s = 0; s < scenes; ++s) {
    const std::string ep = "E" + std::to_string(s / per_episode + 1);
    const std::string idx = std::to_string(s % per_episode + 1);
    const std::size_t k = std::min(speakers[s % speakers.size()], characters);
    if (k == 0) {
      out += ep + '\t' + idx + "\t\t\t\t\n";
      continue;
    }
    // Draw the cast mostly from one community, spilling into the next one.
    const std::size_t base = pick_community(rng) * community;
    std::vector<std::size_t> cast;
    while (cast.size() < k) {
      std::size_t c = (base + rng() % (community + 4)) % characters;
      if (std::find(cast.begin(), cast.end(), c) == cast.end()) cast.push_back(c);
    }
    const std::size_t n = std::max<std::size_t>(k, static_cast<std::size_t>(extra_turns(rng)) + 3);
    double t = 0.0;
    std::size_t prev = cast.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t who = i < k ? i : rng() % k;
      if (k > 1 && who == prev) who = (who + 1 + rng() % (k - 1)) % k;
      prev = who;
      const double d = dur_ms(rng) / 1000.0;
      out += ep + '\t' + idx + "\tchar" + std::to_string(cast[who]) + '\t' + format_fixed(t, 3) + '\t' +
             format_fixed(t + d, 3) + "\t\n";
      t += d + gap_ms(rng) / 1000.0;
    }
  }
  return out;
}

}  // namespace narrsmooth::testing
