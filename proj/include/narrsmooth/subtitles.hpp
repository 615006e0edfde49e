#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "narrsmooth/transcript.hpp"

namespace narrsmooth {

// One timed, speaker-tagged subtitle cue. Scene assignment happens later.
struct SubtitleFragment {
  std::string speaker;
  Micros start{0};
  Micros end{0};
  std::string text;
  std::size_t cue = 0;  // 1-based cue ordinal in the file

  friend bool operator==(const SubtitleFragment&, const SubtitleFragment&) = default;
};

struct SubtitleParse {
  std::vector<SubtitleFragment> fragments;
  std::vector<std::string> warnings;
};

namespace detail {

// HH:MM:SS,mmm (a '.' separator is accepted as well).
inline std::optional<Micros> parse_srt_time(std::string_view s) {
  s = trim(s);
  if (s.size() < 12 || s[2] != ':' || s[5] != ':' || (s[8] != ',' && s[8] != '.')) return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<std::int64_t> {
    std::int64_t v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto h = num(0, 2), m = num(3, 2), sec = num(6, 2), ms = num(9, s.size() - 9);
  if (!h || !m || !sec || !ms || s.size() != 12 || *m > 59 || *sec > 59) return std::nullopt;
  return Micros(((*h * 60 + *m) * 60 + *sec) * kMicrosPerUnit + *ms * 1000);
}

}  // namespace detail

// Parses SRT text whose cues follow the "NAME: utterance" convention.
// Throws ParseError on a malformed timing line; cues without a speaker
// prefix are skipped with a warning.
inline SubtitleParse parse_subtitles(std::string_view srt) {
  if (srt.starts_with("\xEF\xBB\xBF")) srt.remove_prefix(3);
  std::vector<std::vector<std::string>> blocks;
  {
    std::istringstream in{std::string(srt)};
    std::string raw;
    std::vector<std::string> current;
    while (std::getline(in, raw)) {
      std::string line(detail::chomp(raw));
      if (trim(line).empty()) {
        if (!current.empty()) blocks.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(std::move(line));
      }
    }
    if (!current.empty()) blocks.push_back(std::move(current));
  }

  SubtitleParse out;
  std::size_t ordinal = 0;
  for (const auto& block : blocks) {
    ++ordinal;
    // The numeric counter line is optional in practice.
    std::size_t timing = detail::parse_int(block[0]).has_value() ? 1 : 0;
    if (timing >= block.size()) throw ParseError(0, "cue " + std::to_string(ordinal) + ": missing timing line");
    std::string_view tl = block[timing];
    auto arrow = tl.find("-->");
    if (arrow == std::string_view::npos) {
      throw ParseError(0, "cue " + std::to_string(ordinal) + ": timing line lacks '-->'");
    }
    auto start = detail::parse_srt_time(tl.substr(0, arrow));
    auto end = detail::parse_srt_time(tl.substr(arrow + 3));
    if (!start || !end) throw ParseError(0, "cue " + std::to_string(ordinal) + ": unparseable timestamp");

    std::string text;
    for (std::size_t i = timing + 1; i < block.size(); ++i) {
      if (!text.empty()) text += ' ';
      text += trim(block[i]);
    }
    auto colon = text.find(':');
    auto speaker = colon == std::string::npos ? std::string_view{} : trim(std::string_view(text).substr(0, colon));
    if (speaker.empty()) {
      out.warnings.push_back("cue " + std::to_string(ordinal) + ": no speaker prefix, skipped");
      continue;
    }
    if (*end <= *start) {
      out.warnings.push_back("cue " + std::to_string(ordinal) + ": non-positive duration, skipped");
      continue;
    }
    out.fragments.push_back({std::string(speaker), *start, *end,
                             std::string(trim(std::string_view(text).substr(colon + 1))), ordinal});
  }
  return out;
}

// Row of the scene-boundary sidecar: episode, scene index, start, end.
struct SceneBoundary {
  std::string episode;
  std::int64_t local_index = 0;
  Micros start{0};
  Micros end{0};
};

inline std::vector<SceneBoundary> parse_scene_boundaries(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<SceneBoundary> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::chomp(raw);
    if (detail::is_skippable(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 4) throw ParseError(line_no, "expected 4 tab-separated fields");
    if (trim(f[0]) == "episode" && out.empty()) continue;  // optional header
    auto idx = detail::parse_int(f[1]);
    auto start = parse_decimal_micros(trim(f[2]));
    auto end = parse_decimal_micros(trim(f[3]));
    if (trim(f[0]).empty() || !idx || !start || !end) throw ParseError(line_no, "malformed scene boundary");
    if (*end <= *start) throw ParseError(line_no, "scene boundary end must follow start");
    out.push_back({std::string(trim(f[0])), *idx, Micros(*start), Micros(*end)});
  }
  if (out.empty()) throw ParseError(0, "no scene boundaries");
  return out;
}

struct EpisodeSubtitles {
  std::string episode;
  std::vector<SubtitleFragment> fragments;
};

struct AssembledCorpus {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Couples subtitle fragments to scenes: a fragment belongs to the scene of
// its episode whose [start, end) range contains the fragment start.
// Scenes without fragments are kept empty.
inline AssembledCorpus assemble_corpus(const std::vector<EpisodeSubtitles>& episodes,
                                       const std::vector<SceneBoundary>& boundaries,
                                       const TranscriptOptions& options = {}) {
  std::vector<detail::PendingScene> pending;
  std::map<std::string, std::size_t> rank;
  std::map<std::string, std::int64_t> last;
  for (const auto& b : boundaries) {
    auto [it, fresh] = rank.try_emplace(b.episode, rank.size());
    if (!fresh && b.local_index <= last[b.episode]) {
      throw ParseError(0, "scene boundaries of episode '" + b.episode + "' are not strictly increasing");
    }
    last[b.episode] = b.local_index;
    pending.push_back({it->second, b.episode, b.local_index, {}});
  }
  AssembledCorpus out;
  for (const auto& ep : episodes) {
    if (!rank.contains(ep.episode)) {
      out.warnings.push_back("episode '" + ep.episode + "' has no scene boundaries; its subtitles are dropped");
      continue;
    }
    for (const auto& frag : ep.fragments) {
      bool placed = false;
      for (std::size_t i = 0; i < boundaries.size() && !placed; ++i) {
        const auto& b = boundaries[i];
        if (b.episode == ep.episode && b.start <= frag.start && frag.start < b.end) {
          pending[i].turns.push_back({frag.speaker, frag.start, frag.end, frag.text});
          placed = true;
        }
      }
      if (!placed) {
        out.warnings.push_back("episode '" + ep.episode + "' cue " + std::to_string(frag.cue) +
                               ": outside every scene, dropped");
      }
    }
  }
  out.corpus = detail::finalize_corpus(std::move(pending), options);
  return out;
}

}  // namespace narrsmooth
