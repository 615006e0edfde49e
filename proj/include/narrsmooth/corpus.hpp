#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "narrsmooth/amount.hpp"
#include "narrsmooth/errors.hpp"

namespace narrsmooth {

struct CharacterId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(CharacterId, CharacterId) = default;
};

// Unordered character pair, stored with first < second.
struct CharacterPair {
  CharacterId first;
  CharacterId second;

  static constexpr CharacterPair of(CharacterId a, CharacterId b) {
    return a < b ? CharacterPair{a, b} : CharacterPair{b, a};
  }
  constexpr bool contains(CharacterId c) const { return c == first || c == second; }
  constexpr CharacterId other(CharacterId c) const { return c == first ? second : first; }
  friend constexpr auto operator<=>(CharacterPair, CharacterPair) = default;
};

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Dense registry of speaker names; ids are assigned in insertion order.
class CharacterRegistry {
 public:
  CharacterRegistry() = default;
  explicit CharacterRegistry(bool case_fold) : case_fold_(case_fold) {}

  CharacterId intern(std::string_view raw_name) {
    std::string key = key_of(raw_name);
    if (key.empty()) throw std::invalid_argument("empty character name");
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    CharacterId id{static_cast<std::uint32_t>(names_.size())};
    names_.emplace_back(trim(raw_name));
    index_.emplace(std::move(key), id);
    return id;
  }

  std::optional<CharacterId> find(std::string_view raw_name) const {
    auto it = index_.find(key_of(raw_name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Throws UnknownEntityError with the closest names as suggestions.
  CharacterId at(std::string_view raw_name) const {
    if (auto id = find(raw_name)) return *id;
    throw UnknownEntityError(std::string(trim(raw_name)), suggest(raw_name));
  }

  const std::string& name(CharacterId id) const { return names_.at(id.value); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  bool case_folded() const { return case_fold_; }

  std::vector<std::string> suggest(std::string_view raw_name, std::size_t limit = 5) const {
    const std::string key = key_of(raw_name);
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& n : names_) scored.emplace_back(edit_distance(key, lowered(n)), n);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
    return out;
  }

  friend bool operator==(const CharacterRegistry& a, const CharacterRegistry& b) {
    return a.case_fold_ == b.case_fold_ && a.names_ == b.names_;
  }

 private:
  static std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  }

  std::string key_of(std::string_view raw) const {
    auto t = trim(raw);
    return case_fold_ ? lowered(t) : std::string(t);
  }

  static std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  }

  bool case_fold_ = false;
  std::vector<std::string> names_;
  std::unordered_map<std::string, CharacterId> index_;
};

struct SpeechTurn {
  CharacterId speaker;
  Micros start{0};
  Micros end{0};
  // Spoken time; equals end - start unless the turn was merged from fragments.
  Micros speech{0};
  std::string text;

  Micros duration() const { return speech; }
  friend bool operator==(const SpeechTurn&, const SpeechTurn&) = default;
};

inline SpeechTurn make_turn(CharacterId speaker, Micros start, Micros end, std::string text = {}) {
  return SpeechTurn{speaker, start, end, end - start, std::move(text)};
}

struct Scene {
  std::size_t index = 0;        // 1-based global narrative time t
  std::string episode;
  std::int64_t local_index = 0;  // scene number as labelled in the source
  std::vector<SpeechTurn> turns;

  std::size_t distinct_speakers() const {
    std::vector<CharacterId> ids;
    for (const auto& t : turns) ids.push_back(t.speaker);
    std::sort(ids.begin(), ids.end());
    return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
  }

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct Corpus {
  CharacterRegistry characters;
  std::vector<Scene> scenes;
  std::map<std::string, std::string> metadata;

  std::size_t scene_count() const { return scenes.size(); }
  const Scene& scene(std::size_t t) const { return scenes.at(t - 1); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

}  // namespace narrsmooth
