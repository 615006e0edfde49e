#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "narrsmooth/analysis.hpp"
#include "narrsmooth/dynamic.hpp"

namespace narrsmooth {

enum class ExportFormat { GraphML, Gexf, Dot, EdgeCsv, SeriesCsv, DynamicJson };

inline const char* to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::GraphML: return "graphml";
    case ExportFormat::Gexf: return "gexf";
    case ExportFormat::Dot: return "dot";
    case ExportFormat::EdgeCsv: return "edge-csv";
    case ExportFormat::SeriesCsv: return "series-csv";
    case ExportFormat::DynamicJson: return "dynamic-json";
  }
  return "?";
}

inline std::optional<ExportFormat> parse_format(std::string_view s) {
  for (auto f : {ExportFormat::GraphML, ExportFormat::Gexf, ExportFormat::Dot, ExportFormat::EdgeCsv,
                 ExportFormat::SeriesCsv, ExportFormat::DynamicJson}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

// Inclusive 1-based scene range; unset bounds mean corpus start/end.
struct SceneSelector {
  std::optional<std::size_t> first;
  std::optional<std::size_t> last;

  static SceneSelector single(std::size_t t) { return {t, t}; }

  std::pair<std::size_t, std::size_t> resolve(std::size_t scene_count) const {
    const std::size_t a = first.value_or(1);
    const std::size_t b = last.value_or(scene_count);
    if (scene_count == 0 && !first && !last) return {1, 0};
    if (a < 1 || b > scene_count || a > b) {
      throw std::out_of_range("scene selection " + std::to_string(a) + ".." + std::to_string(b) + " outside 1.." +
                              std::to_string(scene_count));
    }
    return {a, b};
  }
};

// Parses "t", "a..b", "a-b", "a..", "..b" or "all".
inline SceneSelector parse_selector(std::string_view s) {
  s = trim(s);
  if (s.empty() || s == "all") return {};
  auto num = [](std::string_view part) -> std::optional<std::size_t> {
    part = trim(part);
    if (part.empty()) return std::nullopt;
    std::size_t v = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size()) throw std::invalid_argument("bad scene range");
    return v;
  };
  auto sep = s.find("..");
  std::size_t width = 2;
  if (sep == std::string_view::npos) sep = s.find('-'), width = 1;
  if (sep == std::string_view::npos) {
    auto t = num(s);
    return {t, t};
  }
  return {num(s.substr(0, sep)), num(s.substr(sep + width))};
}

struct ExportSpec {
  ExportFormat format = ExportFormat::GraphML;
  SceneSelector scenes;
  int precision = 6;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// Static graph as GraphML, GEXF, DOT or an edge list CSV. Nodes and edges
// are emitted in id order.
inline std::string export_static(const StaticGraph& g, const ExportSpec& spec) {
  const auto& names = g.characters;
  auto w = [&](double v) { return format_fixed(v, spec.precision); };
  std::string out;
  switch (spec.format) {
    case ExportFormat::GraphML: {
      out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
      out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
             "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
             "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
             "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
      out += "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n";
      out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
      out += "  <key id=\"unit\" for=\"graph\" attr.name=\"unit\" attr.type=\"string\"/>\n";
      out += "  <key id=\"scenes\" for=\"graph\" attr.name=\"scenes\" attr.type=\"string\"/>\n";
      out += "  <graph id=\"G\" edgedefault=\"undirected\">\n";
      out += "    <data key=\"unit\">" + detail::xml_escape(g.unit) + "</data>\n";
      out += "    <data key=\"scenes\">" + std::to_string(g.first_scene) + ".." + std::to_string(g.last_scene) +
             "</data>\n";
      for (std::uint32_t c = 0; c < names.size(); ++c) {
        out += "    <node id=\"n" + std::to_string(c) + "\"><data key=\"name\">" +
               detail::xml_escape(names.name(CharacterId{c})) + "</data></node>\n";
      }
      for (const auto& [pair, weight] : g.edges) {
        out += "    <edge source=\"n" + std::to_string(pair.first.value) + "\" target=\"n" +
               std::to_string(pair.second.value) + "\"><data key=\"weight\">" + w(weight) + "</data></edge>\n";
      }
      out += "  </graph>\n</graphml>\n";
      return out;
    }
    case ExportFormat::Gexf: {
      out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
      out += "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
      out += "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n    <nodes>\n";
      for (std::uint32_t c = 0; c < names.size(); ++c) {
        out += "      <node id=\"" + std::to_string(c) + "\" label=\"" + detail::xml_escape(names.name(CharacterId{c})) +
               "\"/>\n";
      }
      out += "    </nodes>\n    <edges>\n";
      std::size_t id = 0;
      for (const auto& [pair, weight] : g.edges) {
        out += "      <edge id=\"" + std::to_string(id++) + "\" source=\"" + std::to_string(pair.first.value) +
               "\" target=\"" + std::to_string(pair.second.value) + "\" weight=\"" + w(weight) + "\"/>\n";
      }
      out += "    </edges>\n  </graph>\n</gexf>\n";
      return out;
    }
    case ExportFormat::Dot: {
      out += "graph G {\n";
      for (std::uint32_t c = 0; c < names.size(); ++c) {
        out += "  n" + std::to_string(c) + " [label=\"" + detail::dot_escape(names.name(CharacterId{c})) + "\"];\n";
      }
      for (const auto& [pair, weight] : g.edges) {
        out += "  n" + std::to_string(pair.first.value) + " -- n" + std::to_string(pair.second.value) +
               " [weight=" + w(weight) + "];\n";
      }
      out += "}\n";
      return out;
    }
    case ExportFormat::EdgeCsv: {
      out += "source,target,weight\n";
      for (const auto& [pair, weight] : g.edges) {
        out += detail::csv_field(names.name(pair.first)) + ',' + detail::csv_field(names.name(pair.second)) + ',' +
               w(weight) + '\n';
      }
      return out;
    }
    case ExportFormat::SeriesCsv:
    case ExportFormat::DynamicJson:
      break;
  }
  throw std::invalid_argument(std::string("format '") + to_string(spec.format) + "' does not apply to a static graph");
}

// "scene,value" CSV over the selected scenes.
inline std::string export_series(const std::vector<double>& values, const ExportSpec& spec) {
  std::string out = "scene,value\n";
  if (values.empty()) return out;
  const auto [a, b] = spec.scenes.resolve(values.size());
  for (std::size_t t = a; t <= b; ++t) {
    out += std::to_string(t) + ',' + format_fixed(values[t - 1], spec.precision) + '\n';
  }
  return out;
}

inline std::string export_series(const StrengthSeries& s, const ExportSpec& spec) {
  return export_series(s.values, spec);
}
inline std::string export_series(const EdgeSeries& s, const ExportSpec& spec) { return export_series(s.values, spec); }

// Reads back a "scene,value" CSV.
inline std::vector<std::pair<std::size_t, double>> parse_series_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  std::vector<std::pair<std::size_t, double>> out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "scene,value") throw ParseError(1, "expected header 'scene,value'");
      continue;
    }
    auto comma = line.find(',');
    std::size_t scene = 0;
    double value = 0.0;
    if (comma == std::string::npos ||
        std::from_chars(line.data(), line.data() + comma, scene).ec != std::errc{} ||
        std::from_chars(line.data() + comma + 1, line.data() + line.size(), value).ec != std::errc{}) {
      throw ParseError(line_no, "malformed series row");
    }
    out.emplace_back(scene, value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dynamic network document (JSON, schema "narrsmooth-dynamic" version 1).
//
// Every pair block lists the scenes where the pair is active together with
// the interaction amount (the breakpoints); they determine the interaction
// sequence and therefore the whole network. The "series" array is derived:
// the per-scene weights over the selected range, run-length compressed so
// that a row appears only where the value changes. Raw weights are written
// at microsecond resolution (exact); normalized weights use the requested
// precision.

inline constexpr int kDynamicFormatVersion = 1;

inline std::string export_dynamic(const DynamicNetwork& dyn, const ExportSpec& spec) {
  const auto& p = dyn.params();
  const auto& names = dyn.characters();
  const bool smoothing = p.method == Method::Smoothing;
  const auto [a, b] = spec.scenes.resolve(dyn.scene_count());

  std::string out = "{\n";
  out += "  \"format\": \"narrsmooth-dynamic\",\n";
  out += "  \"version\": " + std::to_string(kDynamicFormatVersion) + ",\n";
  out += "  \"metadata\": {";
  bool first = true;
  for (const auto& [k, v] : dyn.metadata()) {
    out += std::string(first ? "" : ",") + "\n    " + detail::json_string(k) + ": " + detail::json_string(v);
    first = false;
  }
  out += std::string(first ? "" : "\n  ") + "},\n";
  out += "  \"method\": \"" + std::string(to_string(p.method)) + "\",\n";
  out += "  \"params\": {\"mode\": \"" + std::string(to_string(p.mode)) + "\"";
  if (smoothing) out += ", \"lambda\": " + detail::shortest(p.lambda);
  if (p.method == Method::TimeSlice) out += ", \"window\": " + std::to_string(*p.window);
  out += "},\n";
  out += "  \"precision\": " + std::to_string(spec.precision) + ",\n";
  out += "  \"scenes\": " + std::to_string(dyn.scene_count()) + ",\n";
  out += "  \"case_fold\": " + std::string(names.case_folded() ? "true" : "false") + ",\n";
  out += "  \"characters\": [";
  for (std::uint32_t c = 0; c < names.size(); ++c) {
    out += std::string(c ? ", " : "") + detail::json_string(names.name(CharacterId{c}));
  }
  out += "],\n";
  out += "  \"series_range\": [" + std::to_string(a) + ", " + std::to_string(b) + "],\n";
  out += "  \"pairs\": [";

  auto row = [&](std::size_t t, const ExtendedWeight& w) {
    std::string r = "[" + std::to_string(t) + ", ";
    r += w.is_neg_inf() ? "\"-inf\"" : format_weight(w, 6);
    if (smoothing) r += ", " + format_fixed(dyn.view(w), spec.precision);
    return r + "]";
  };

  bool first_pair = true;
  for (const auto& [pair, occurrences] : dyn.sequence().pairs()) {
    out += std::string(first_pair ? "" : ",") + "\n    {\"i\": " + std::to_string(pair.first.value) +
           ", \"j\": " + std::to_string(pair.second.value) + ", \"names\": [" +
           detail::json_string(names.name(pair.first)) + ", " + detail::json_string(names.name(pair.second)) +
           "],\n     \"breakpoints\": [";
    first_pair = false;
    for (std::size_t k = 0; k < occurrences.size(); ++k) {
      out += std::string(k ? ", " : "") + row(occurrences[k].scene, occurrences[k].amount);
    }
    out += "],\n     \"series\": [";
    const auto series = dyn.raw_series(pair);
    bool first_row = true;
    for (std::size_t t = a; t <= b; ++t) {
      if (t > a && series[t - 1] == series[t - 2]) continue;
      out += std::string(first_row ? "" : ", ") + row(t, series[t - 1]);
      first_row = false;
    }
    out += "]}";
  }
  out += std::string(first_pair ? "" : "\n  ") + "]\n}\n";
  return out;
}

struct ImportedDynamic {
  DynamicNetwork network;
  ExportSpec spec;  // precision and series range found in the document
};

inline ImportedDynamic import_dynamic(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("dynamic document: ") + e.what());
  }
  try {
    if (doc.at("format") != "narrsmooth-dynamic") throw ParseError(0, "not a narrsmooth dynamic document");
    if (doc.at("version").get<int>() != kDynamicFormatVersion) throw ParseError(0, "unsupported document version");
    MethodParams params;
    auto method = parse_method(doc.at("method").get<std::string>());
    if (!method) throw ParseError(0, "unknown method");
    params.method = *method;
    const auto& jp = doc.at("params");
    params.mode = jp.at("mode") == "count" ? AmountMode::Count : AmountMode::Seconds;
    if (params.method == Method::Smoothing) params.lambda = jp.at("lambda").get<double>();
    if (params.method == Method::TimeSlice) params.window = jp.at("window").get<std::size_t>();

    CharacterRegistry registry(doc.value("case_fold", false));
    for (const auto& n : doc.at("characters")) registry.intern(n.get<std::string>());
    if (registry.size() != doc.at("characters").size()) throw ParseError(0, "duplicate character names");

    const auto S = doc.at("scenes").get<std::size_t>();
    std::vector<SceneInteractionMatrix> matrices(S);
    for (const auto& block : doc.at("pairs")) {
      const CharacterId i{block.at("i").get<std::uint32_t>()};
      const CharacterId j{block.at("j").get<std::uint32_t>()};
      if (!(i < j) || j.value >= registry.size()) throw ParseError(0, "invalid pair ids");
      for (const auto& bp : block.at("breakpoints")) {
        const auto t = bp.at(0).get<std::size_t>();
        const auto h = Amount::from_micros(std::llround(bp.at(1).get<double>() * kMicrosPerUnit));
        if (t < 1 || t > S || !h.positive()) throw ParseError(0, "invalid breakpoint");
        matrices[t - 1].entries[CharacterPair{i, j}] = h;
      }
    }
    std::map<std::string, std::string> metadata;
    for (const auto& [k, v] : doc.at("metadata").items()) metadata[k] = v.get<std::string>();

    ExportSpec spec;
    spec.format = ExportFormat::DynamicJson;
    spec.precision = doc.at("precision").get<int>();
    const auto& range = doc.at("series_range");
    if (S > 0) spec.scenes = {range.at(0).get<std::size_t>(), range.at(1).get<std::size_t>()};

    InteractionSequence seq(std::move(registry), std::move(matrices), params.mode);
    return {extract(std::move(seq), params, std::move(metadata)), spec};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("dynamic document: ") + e.what());
  }
}

}  // namespace narrsmooth
