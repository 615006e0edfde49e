#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "narrsmooth/corpus.hpp"
#include "narrsmooth/subtitles.hpp"
#include "narrsmooth/transcript.hpp"

namespace narrsmooth {

inline constexpr Micros kDefaultMergeGap{1'000'000};

// Joins consecutive turns of the same speaker separated by at most
// `gap_threshold`. The merged turn spans min start..max end; its speech time
// is the sum of the parts, so silences are not counted.
inline Scene merge_adjacent_turns(const Scene& scene, Micros gap_threshold = kDefaultMergeGap) {
  Scene out{scene.index, scene.episode, scene.local_index, {}};
  for (const auto& turn : scene.turns) {
    if (!out.turns.empty()) {
      auto& last = out.turns.back();
      if (last.speaker == turn.speaker && turn.start - last.end <= gap_threshold) {
        last.start = std::min(last.start, turn.start);
        last.end = std::max(last.end, turn.end);
        last.speech += turn.speech;
        if (!turn.text.empty()) last.text += last.text.empty() ? turn.text : ' ' + turn.text;
        continue;
      }
    }
    out.turns.push_back(turn);
  }
  return out;
}

inline Corpus merge_adjacent_turns(const Corpus& corpus, Micros gap_threshold = kDefaultMergeGap) {
  Corpus out{corpus.characters, {}, corpus.metadata};
  out.scenes.reserve(corpus.scenes.size());
  for (const auto& s : corpus.scenes) out.scenes.push_back(merge_adjacent_turns(s, gap_threshold));
  return out;
}

enum class WarningKind { EmptyScene, SingleSpeakerScene, OverlappingTurns, RepeatedSpeaker, SilentCharacter };

inline const char* to_string(WarningKind k) {
  switch (k) {
    case WarningKind::EmptyScene: return "empty-scene";
    case WarningKind::SingleSpeakerScene: return "single-speaker";
    case WarningKind::OverlappingTurns: return "overlap";
    case WarningKind::RepeatedSpeaker: return "repeated-speaker";
    case WarningKind::SilentCharacter: return "silent-character";
  }
  return "?";
}

struct ValidationWarning {
  WarningKind kind;
  std::size_t scene = 0;  // 0 when not tied to a scene
  std::string message;
};

struct ValidationReport {
  std::size_t episodes = 0;
  std::size_t scenes = 0;
  std::size_t turns = 0;
  std::size_t speakers = 0;
  Amount speech;               // total spoken time
  std::size_t spoken_scenes = 0;
  double percent_spoken = 0.0;
  // Distinct speakers per scene, over all scenes (silent ones count as 0).
  double mean_speakers = 0.0;
  double std_speakers = 0.0;   // population standard deviation
  std::vector<ValidationWarning> warnings;

  std::size_t count(WarningKind k) const {
    std::size_t n = 0;
    for (const auto& w : warnings) n += w.kind == k;
    return n;
  }
};

inline ValidationReport validate(const Corpus& corpus) {
  ValidationReport r;
  r.scenes = corpus.scenes.size();
  std::set<std::string> episodes;
  std::set<CharacterId> speakers;
  std::vector<double> per_scene;
  for (const auto& scene : corpus.scenes) {
    episodes.insert(scene.episode);
    r.turns += scene.turns.size();
    const auto distinct = scene.distinct_speakers();
    per_scene.push_back(static_cast<double>(distinct));
    if (!scene.turns.empty()) ++r.spoken_scenes;
    if (scene.turns.empty()) {
      r.warnings.push_back({WarningKind::EmptyScene, scene.index, "no speech"});
    } else if (distinct == 1) {
      r.warnings.push_back({WarningKind::SingleSpeakerScene, scene.index, "only one speaker, no interaction"});
    }
    for (std::size_t k = 0; k < scene.turns.size(); ++k) {
      const auto& turn = scene.turns[k];
      speakers.insert(turn.speaker);
      r.speech += Amount::from_duration(turn.duration());
      if (k == 0) continue;
      const auto& prev = scene.turns[k - 1];
      if (turn.start < prev.end) {
        r.warnings.push_back({WarningKind::OverlappingTurns, scene.index,
                              "turns " + std::to_string(k) + " and " + std::to_string(k + 1) + " overlap"});
      }
      if (turn.speaker == prev.speaker) {
        r.warnings.push_back({WarningKind::RepeatedSpeaker, scene.index,
                              "turns " + std::to_string(k) + " and " + std::to_string(k + 1) + " share speaker '" +
                                  corpus.characters.name(turn.speaker) + "'"});
      }
    }
  }
  for (std::uint32_t c = 0; c < corpus.characters.size(); ++c) {
    if (!speakers.contains(CharacterId{c})) {
      r.warnings.push_back({WarningKind::SilentCharacter, 0,
                            "character '" + corpus.characters.name(CharacterId{c}) + "' never speaks"});
    }
  }
  r.episodes = episodes.size();
  r.speakers = speakers.size();
  if (r.scenes > 0) {
    r.percent_spoken = 100.0 * static_cast<double>(r.spoken_scenes) / static_cast<double>(r.scenes);
    double sum = 0.0;
    for (double v : per_scene) sum += v;
    r.mean_speakers = sum / static_cast<double>(r.scenes);
    double sq = 0.0;
    for (double v : per_scene) sq += (v - r.mean_speakers) * (v - r.mean_speakers);
    r.std_speakers = std::sqrt(sq / static_cast<double>(r.scenes));
  }
  return r;
}

}  // namespace narrsmooth
