#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage or parse error,
// 3 unknown character.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "narrsmooth/narrsmooth.hpp"

namespace narrsmooth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnknown = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::string scenes;  // scene-boundary sidecar for subtitle inputs
  std::string method;
  double lambda = kDefaultLambda;
  std::string window;  // a single size, or a comma list for compare
  std::string mode = "seconds";
  std::string character;
  std::string pair;
  std::string range;
  std::string format;
  std::string output;
  int precision = -1;  // -1: default (6, or the document's for export)
  double gap = 1.0;
  bool case_fold = false;
  std::string direction = "undirected";
  std::string dump;  // optional rule-audit dump path
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Corpus load_corpus(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw UsageError("--input is required");
  TranscriptOptions opts{cfg.case_fold};
  const bool subtitles = std::filesystem::path(cfg.inputs.front()).extension() == ".srt";
  Corpus corpus;
  if (subtitles) {
    if (cfg.scenes.empty()) throw UsageError("subtitle input requires --scenes (scene-boundary sidecar)");
    std::vector<EpisodeSubtitles> episodes;
    for (const auto& path : cfg.inputs) {
      auto parsed = parse_subtitles(read_file(path));
      for (const auto& w : parsed.warnings) std::cerr << path << ": " << w << '\n';
      episodes.push_back({std::filesystem::path(path).stem().string(), std::move(parsed.fragments)});
    }
    auto assembled = assemble_corpus(episodes, parse_scene_boundaries(read_file(cfg.scenes)), opts);
    for (const auto& w : assembled.warnings) std::cerr << w << '\n';
    corpus = std::move(assembled.corpus);
  } else {
    if (cfg.inputs.size() != 1) throw UsageError("exactly one transcript --input expected");
    std::ifstream in(cfg.inputs.front(), std::ios::binary);
    if (!in) throw UsageError("cannot open '" + cfg.inputs.front() + "'");
    corpus = parse_transcript(in, opts);
  }
  std::string sources;
  for (const auto& p : cfg.inputs) sources += (sources.empty() ? "" : ";") + p;
  corpus.metadata["source"] = sources;
  return corpus;
}

inline AmountMode parse_mode(const std::string& s) {
  if (s == "seconds") return AmountMode::Seconds;
  if (s == "count") return AmountMode::Count;
  throw UsageError("--mode must be 'seconds' or 'count'");
}

inline std::vector<std::size_t> parse_windows(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = narrsmooth::detail::parse_int(item);
    if (!v || *v < 1) throw UsageError("--window expects positive scene counts");
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

inline MethodParams method_params(const RunConfig& cfg, std::string_view fallback) {
  MethodParams p;
  auto m = parse_method(cfg.method.empty() ? fallback : cfg.method);
  if (!m) throw UsageError("--method must be cumulative, timeslice or smoothing");
  p.method = *m;
  p.lambda = cfg.lambda;
  p.mode = parse_mode(cfg.mode);
  if (p.method == Method::TimeSlice) {
    if (cfg.window.empty()) throw UsageError("--method timeslice requires --window");
    auto ws = parse_windows(cfg.window);
    if (ws.size() != 1) throw UsageError("--window takes a single size here");
    p.window = ws.front();
  }
  if (p.method == Method::Smoothing && !(p.lambda > 0.0)) throw UsageError("--lambda must be positive");
  return p;
}

inline SequenceOptions sequence_options(const RunConfig& cfg) {
  if (cfg.gap < 0.0) throw UsageError("--gap must be non-negative");
  return {parse_mode(cfg.mode), Micros(std::llround(cfg.gap * kMicrosPerUnit))};
}

inline std::map<std::string, std::string> run_metadata(const Corpus& corpus, const RunConfig& cfg) {
  auto md = corpus.metadata;
  md["merge_gap"] = format_fixed(cfg.gap, 6);
  return md;
}

inline DynamicNetwork build_network(const Corpus& corpus, const RunConfig& cfg, const MethodParams& p) {
  return extract(build_sequence(corpus, sequence_options(cfg)), p, run_metadata(corpus, cfg));
}

inline int precision(const RunConfig& cfg, int fallback = 6) {
  const int p = cfg.precision < 0 ? fallback : cfg.precision;
  if (p > 9) throw UsageError("--precision must be in [0, 9]");
  return p;
}

inline void emit(const RunConfig& cfg, const std::string& payload, std::ostream& out) {
  if (cfg.output.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + cfg.output + "'");
  f << payload;
}

inline CharacterPair resolve_pair(const CharacterRegistry& reg, const std::string& spec) {
  // Names may contain ':', so try every split point.
  for (std::size_t pos = spec.find(':'); pos != std::string::npos; pos = spec.find(':', pos + 1)) {
    auto a = reg.find(spec.substr(0, pos));
    auto b = reg.find(spec.substr(pos + 1));
    if (a && b) {
      if (*a == *b) throw UsageError("--pair needs two distinct characters");
      return CharacterPair::of(*a, *b);
    }
  }
  auto pos = spec.find(':');
  if (pos == std::string::npos) throw UsageError("--pair expects 'Name1:Name2'");
  reg.at(spec.substr(0, pos));  // throws for the unknown side
  reg.at(spec.substr(pos + 1));
  throw UsageError("cannot resolve --pair '" + spec + "'");
}

enum class Target { Character, Pair };

inline Target selector(const RunConfig& cfg) {
  if (cfg.character.empty() == cfg.pair.empty()) throw UsageError("give exactly one of --character or --pair");
  return cfg.character.empty() ? Target::Pair : Target::Character;
}

inline std::vector<double> target_series(const DynamicNetwork& dyn, const RunConfig& cfg) {
  if (selector(cfg) == Target::Character) {
    return strength_series(dyn, dyn.characters().at(cfg.character)).values;
  }
  const auto pair = resolve_pair(dyn.characters(), cfg.pair);
  return edge_series(dyn, pair.first, pair.second).values;
}

// Static formats need one snapshot scene: the end of --range, else the last.
inline std::size_t snapshot_scene(const DynamicNetwork& dyn, const RunConfig& cfg) {
  const auto sel = parse_selector(cfg.range);
  return sel.resolve(dyn.scene_count()).second;
}

inline std::string render(const DynamicNetwork& dyn, const RunConfig& cfg, ExportFormat format, int prec) {
  ExportSpec spec{format, {}, prec};
  switch (format) {
    case ExportFormat::DynamicJson:
      spec.scenes = parse_selector(cfg.range);
      return export_dynamic(dyn, spec);
    case ExportFormat::SeriesCsv:
      spec.scenes = parse_selector(cfg.range);
      return export_series(target_series(dyn, cfg), spec);
    default:
      return export_static(dyn.snapshot(snapshot_scene(dyn, cfg)), spec);
  }
}

inline ExportFormat format_or(const RunConfig& cfg, ExportFormat fallback) {
  if (cfg.format.empty()) return fallback;
  auto f = parse_format(cfg.format);
  if (!f) throw UsageError("--format must be graphml, gexf, dot, edge-csv, series-csv or dynamic-json");
  return *f;
}

// ---------------------------------------------------------------------------

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_corpus(cfg);
  const auto report = validate(corpus);
  auto line = [&](const std::string& label, const std::string& value) {
    out << label << std::string(label.size() < 30 ? 30 - label.size() : 1, ' ') << value << '\n';
  };
  line("# episodes", std::to_string(report.episodes));
  line("# scenes", std::to_string(report.scenes));
  line("# speech turns", std::to_string(report.turns));
  line("# speakers", std::to_string(report.speakers));
  line("speech duration (seconds)", format_amount(report.speech, 3));
  line("% spoken scenes", format_fixed(report.percent_spoken, 2));
  line("# speakers/scene (avg.)", format_fixed(report.mean_speakers, 2));
  line("# speakers/scene (std. dev.)", format_fixed(report.std_speakers, 2));

  std::map<Rule, std::size_t> rules;
  for (const auto& d : attribute_corpus(corpus, sequence_options(cfg))) ++rules[d.rule];
  for (auto r : {Rule::Surrounded, Rule::Boundary, Rule::LocalBefore, Rule::LocalAfter, Rule::Proximity}) {
    line(std::string("turns attributed by ") + to_string(r), std::to_string(rules[r]));
  }
  line("warnings", std::to_string(report.warnings.size()));
  for (const auto& w : report.warnings) {
    out << "  [" << to_string(w.kind) << "]";
    if (w.scene) out << " scene " << w.scene;
    out << ": " << w.message << '\n';
  }
  return kExitOk;
}

inline int cmd_extract(const RunConfig& cfg, std::ostream& out) {
  if (cfg.method.empty()) throw UsageError("--method is required");
  const auto params = method_params(cfg, cfg.method);
  const auto format = format_or(cfg, params.method == Method::Cumulative ? ExportFormat::GraphML
                                                                          : ExportFormat::DynamicJson);
  const Corpus corpus = load_corpus(cfg);
  const auto dyn = build_network(corpus, cfg, params);
  if (!cfg.dump.empty()) {
    std::ofstream f(cfg.dump, std::ios::binary);
    f << dump_interactions(attribute_corpus(corpus, sequence_options(cfg)), corpus.characters);
  }
  emit(cfg, render(dyn, cfg, format, precision(cfg)), out);
  return kExitOk;
}

inline int cmd_series(const RunConfig& cfg, std::ostream& out) {
  const auto params = method_params(cfg, "smoothing");
  selector(cfg);
  const auto dyn = build_network(load_corpus(cfg), cfg, params);
  emit(cfg, render(dyn, cfg, ExportFormat::SeriesCsv, precision(cfg)), out);
  return kExitOk;
}

inline int cmd_rank(const RunConfig& cfg, std::ostream& out) {
  const auto params = method_params(cfg, "cumulative");
  const auto dyn = build_network(load_corpus(cfg), cfg, params);
  Direction dir = Direction::Undirected;
  if (cfg.direction == "out") {
    dir = Direction::Out;
  } else if (cfg.direction != "undirected") {
    throw UsageError("--direction must be 'out' or 'undirected'");
  }
  const auto graph = dyn.snapshot(snapshot_scene(dyn, cfg));
  if (dir == Direction::Out && !graph.directed) throw UsageError("--direction out needs a baseline method");
  std::string csv = "rank,character,strength\n";
  std::size_t rank = 0;
  for (const auto& r : rank_by_strength(graph, dir)) {
    csv += std::to_string(++rank) + ',' + narrsmooth::detail::csv_field(r.name) + ',' +
           format_fixed(r.strength, precision(cfg)) + '\n';
  }
  emit(cfg, csv, out);
  return kExitOk;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  selector(cfg);
  const auto windows = parse_windows(cfg.window.empty() ? "10" : cfg.window);
  const Corpus corpus = load_corpus(cfg);
  auto seq = std::make_shared<const InteractionSequence>(build_sequence(corpus, sequence_options(cfg)));

  std::vector<std::string> header{"cumulative"};
  std::vector<DynamicNetwork> networks;
  MethodParams p;
  p.method = Method::Cumulative;
  networks.emplace_back(seq, p);
  for (auto w : windows) {
    p.method = Method::TimeSlice;
    p.window = w;
    networks.emplace_back(seq, p);
    header.push_back("timeslice_w" + std::to_string(w));
  }
  p.method = Method::Smoothing;
  p.lambda = cfg.lambda;
  if (!(p.lambda > 0.0)) throw UsageError("--lambda must be positive");
  networks.emplace_back(seq, p);
  header.push_back("smoothing");

  std::vector<std::vector<double>> columns;
  for (const auto& n : networks) columns.push_back(target_series(n, cfg));
  const int prec = precision(cfg);
  std::string csv = "scene";
  for (const auto& h : header) csv += ',' + h;
  csv += '\n';
  const std::size_t S = seq->scene_count();
  const auto [a, b] = parse_selector(cfg.range).resolve(S);
  for (std::size_t t = a; t <= b && S > 0; ++t) {
    csv += std::to_string(t);
    for (const auto& col : columns) csv += ',' + format_fixed(col[t - 1], prec);
    csv += '\n';
  }
  emit(cfg, csv, out);
  return kExitOk;
}

inline int cmd_export(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 1) throw UsageError("export takes one dynamic document as --input");
  const auto imported = import_dynamic(read_file(cfg.inputs.front()));
  const auto format = format_or(cfg, ExportFormat::DynamicJson);
  RunConfig effective = cfg;
  if (effective.range.empty() && format == ExportFormat::DynamicJson && imported.spec.scenes.first) {
    effective.range = std::to_string(*imported.spec.scenes.first) + ".." + std::to_string(*imported.spec.scenes.last);
  }
  emit(cfg, render(imported.network, effective, format, precision(cfg, imported.spec.precision)), out);
  return kExitOk;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic conversational networks from scene-segmented dialogue transcripts", "narrsmooth"};
  app.set_config("--config", "", "TOML/INI file with the same option names; flags override it");
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--input", cfg.inputs, "Transcript (.tsv) or subtitle (.srt) files; a dynamic document for export");
  app.add_option("--scenes", cfg.scenes, "Scene-boundary sidecar for subtitle input");
  app.add_option("--method", cfg.method, "cumulative | timeslice | smoothing");
  app.add_option("--lambda", cfg.lambda, "Smoothing sensitivity")->capture_default_str();
  app.add_option("--window", cfg.window, "Time-slice window in scenes (compare: comma list)");
  app.add_option("--mode", cfg.mode, "seconds | count")->capture_default_str();
  app.add_option("--character", cfg.character, "Character name");
  app.add_option("--pair", cfg.pair, "Character pair 'Name1:Name2'");
  app.add_option("--range", cfg.range, "Scene selection: t, a..b or all");
  app.add_option("--format", cfg.format, "graphml | gexf | dot | edge-csv | series-csv | dynamic-json");
  app.add_option("--output", cfg.output, "Output file (default: standard output)");
  app.add_option("--precision", cfg.precision, "Decimal places for weights");
  app.add_option("--gap", cfg.gap, "Merge same-speaker turns separated by at most this many seconds")
      ->capture_default_str();
  app.add_flag("--case-fold", cfg.case_fold, "Match speaker names case-insensitively");
  app.add_option("--direction", cfg.direction, "rank: undirected | out")->capture_default_str();
  app.add_option("--dump", cfg.dump, "extract: write the turn attribution audit to this file");

  using Handler = int (*)(const RunConfig&, std::ostream&);
  const std::pair<const char*, Handler> commands[] = {
      {"validate", detail::cmd_validate}, {"extract", detail::cmd_extract}, {"series", detail::cmd_series},
      {"rank", detail::cmd_rank},         {"compare", detail::cmd_compare}, {"export", detail::cmd_export},
  };
  const char* descriptions[] = {
      "Parse and report corpus statistics",        "Extract a network with one method",
      "Strength or edge-weight series as CSV",     "Rank characters by strength",
      "Series of one target under all methods",    "Convert a dynamic document to another format",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    subs.push_back(app.add_subcommand(commands[k].first, descriptions[k])->fallthrough());
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (subs[k]->parsed()) return commands[k].second(cfg, out);
    }
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const UnknownEntityError& e) {
    err << "error: " << e.what();
    if (!e.suggestions().empty()) {
      err << "; known characters include:";
      for (const auto& s : e.suggestions()) err << ' ' << s;
    }
    err << '\n';
    return kExitUnknown;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace narrsmooth::cli
