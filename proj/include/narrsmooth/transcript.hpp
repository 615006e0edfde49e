#pragma once

// Canonical transcript format: UTF-8, one tab-separated record per line.
//
//   episode <TAB> scene <TAB> speaker <TAB> start <TAB> end [<TAB> text]
//
// The first non-comment line is the header. Lines starting with '#' and
// blank lines are ignored. A record whose speaker, start and end fields are
// all empty declares a scene without speech.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "narrsmooth/corpus.hpp"

namespace narrsmooth {

struct TranscriptOptions {
  bool case_fold_names = false;
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool is_skippable(std::string_view line) { return trim(line).empty() || line.front() == '#'; }

// Raw turn before speaker interning.
struct PendingTurn {
  std::string speaker;
  Micros start{0};
  Micros end{0};
  std::string text;
};

struct PendingScene {
  std::size_t episode_rank = 0;
  std::string episode;
  std::int64_t local_index = 0;
  std::vector<PendingTurn> turns;
};

// Sorts scenes and turns, then interns speakers in first-appearance order.
inline Corpus finalize_corpus(std::vector<PendingScene> pending, const TranscriptOptions& options) {
  std::stable_sort(pending.begin(), pending.end(), [](const PendingScene& a, const PendingScene& b) {
    return std::tie(a.episode_rank, a.local_index) < std::tie(b.episode_rank, b.local_index);
  });
  Corpus corpus{CharacterRegistry(options.case_fold_names), {}, {}};
  std::size_t t = 1;
  for (auto& ps : pending) {
    std::stable_sort(ps.turns.begin(), ps.turns.end(),
                     [](const PendingTurn& a, const PendingTurn& b) { return a.start < b.start; });
    Scene scene{t++, ps.episode, ps.local_index, {}};
    for (auto& pt : ps.turns) {
      scene.turns.push_back(make_turn(corpus.characters.intern(pt.speaker), pt.start, pt.end, std::move(pt.text)));
    }
    corpus.scenes.push_back(std::move(scene));
  }
  return corpus;
}

}  // namespace detail

inline Corpus parse_transcript(std::istream& in, const TranscriptOptions& options = {}) {
  using detail::PendingScene;
  std::vector<PendingScene> pending;
  std::map<std::pair<std::size_t, std::int64_t>, std::size_t> scene_slot;
  std::unordered_map<std::string, std::size_t> episode_rank;
  std::unordered_map<std::string, std::int64_t> last_index;

  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::chomp(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (detail::is_skippable(line)) continue;
    auto fields = detail::split_tabs(line);
    if (!header_seen) {
      static constexpr std::string_view kColumns[] = {"episode", "scene", "speaker", "start", "end", "text"};
      bool ok = fields.size() == 5 || fields.size() == 6;
      for (std::size_t i = 0; ok && i < fields.size(); ++i) ok = trim(fields[i]) == kColumns[i];
      if (!ok) throw ParseError(line_no, "expected header 'episode\\tscene\\tspeaker\\tstart\\tend[\\ttext]'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 5 && fields.size() != 6) {
      throw ParseError(line_no, "expected 5 or 6 tab-separated fields, found " + std::to_string(fields.size()));
    }
    const std::string episode(trim(fields[0]));
    if (episode.empty()) throw ParseError(line_no, "empty episode label");
    auto local = detail::parse_int(fields[1]);
    if (!local) throw ParseError(line_no, "scene index is not an integer");

    auto [rank_it, new_episode] = episode_rank.try_emplace(episode, episode_rank.size());
    if (!new_episode && *local < last_index[episode]) {
      throw ParseError(line_no, "scene index regression within episode '" + episode + "'");
    }
    last_index[episode] = *local;

    auto key = std::make_pair(rank_it->second, *local);
    auto [slot_it, new_scene] = scene_slot.try_emplace(key, pending.size());
    if (new_scene) pending.push_back(PendingScene{rank_it->second, episode, *local, {}});
    auto& scene = pending[slot_it->second];

    const auto speaker = trim(fields[2]);
    const bool marker = speaker.empty() && trim(fields[3]).empty() && trim(fields[4]).empty();
    if (marker) continue;
    if (speaker.empty()) throw ParseError(line_no, "empty speaker");
    auto start = parse_decimal_micros(trim(fields[3]));
    auto end = parse_decimal_micros(trim(fields[4]));
    if (!start || !end) throw ParseError(line_no, "start/end must be decimal seconds");
    if (*start < 0) throw ParseError(line_no, "negative start time");
    if (*end == *start) throw ParseError(line_no, "empty turn (end == start)");
    if (*end < *start) throw ParseError(line_no, "end before start");
    scene.turns.push_back({std::string(speaker), Micros(*start), Micros(*end),
                           fields.size() == 6 ? std::string(fields[5]) : std::string()});
  }
  if (!header_seen) throw ParseError(0, "no scenes (input has no header)");
  if (pending.empty()) throw ParseError(0, "no scenes");
  return detail::finalize_corpus(std::move(pending), options);
}

inline Corpus parse_transcript(std::string_view text, const TranscriptOptions& options = {}) {
  std::istringstream in{std::string(text)};
  return parse_transcript(in, options);
}

// Writes the canonical format. Turn times are emitted at microsecond
// resolution, so parsing the output reproduces the corpus exactly.
inline std::string serialize_transcript(const Corpus& corpus) {
  std::string out = "episode\tscene\tspeaker\tstart\tend\ttext\n";
  for (const auto& scene : corpus.scenes) {
    const std::string prefix = scene.episode + '\t' + std::to_string(scene.local_index) + '\t';
    if (scene.turns.empty()) {
      out += prefix + "\t\t\t\n";
      continue;
    }
    for (const auto& turn : scene.turns) {
      out += prefix;
      out += corpus.characters.name(turn.speaker);
      out += '\t' + format_fixed_micros(turn.start.count(), 6);
      out += '\t' + format_fixed_micros(turn.end.count(), 6);
      out += '\t' + turn.text + '\n';
    }
  }
  return out;
}

}  // namespace narrsmooth
