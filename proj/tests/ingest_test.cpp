#include <gtest/gtest.h>

#include <random>
#include <set>

#include "narrsmooth/narrsmooth.hpp"
#include "support/fixtures.hpp"

namespace ns = narrsmooth;
using ns::Micros;

namespace {

Micros sec(double s) { return Micros(static_cast<std::int64_t>(std::llround(s * 1e6))); }

const char* kHeader = "episode\tscene\tspeaker\tstart\tend\ttext\n";

}  // namespace

TEST(Amount, FixedFormatting) {
  EXPECT_EQ(ns::format_fixed_micros(30'000'000, 3), "30.000");
  EXPECT_EQ(ns::format_fixed_micros(-10'000'000, 6), "-10.000000");
  EXPECT_EQ(ns::format_fixed_micros(1'234'567, 2), "1.23");
  EXPECT_EQ(ns::format_fixed_micros(1'235'000, 2), "1.24");
  EXPECT_EQ(ns::format_fixed_micros(-4'000, 2), "0.00");
  EXPECT_EQ(ns::format_fixed_micros(7, 8), "0.00000700");
  EXPECT_EQ(ns::format_fixed(0.5744425168116589, 6), "0.574443");
  EXPECT_EQ(ns::format_fixed(-0.0000001, 3), "0.000");
}

TEST(Amount, ExtendedOrdering) {
  const auto inf = ns::ExtendedWeight::neg_inf();
  const ns::ExtendedWeight a = ns::Amount::units(-1000);
  EXPECT_LT(inf, a);
  EXPECT_EQ(ns::max(inf, a), a);
  EXPECT_EQ(ns::max(inf, inf), inf);
  EXPECT_EQ(ns::format_weight(inf, 6), "-inf");
}

TEST(ParseTranscript, MinimalScene) {
  auto c = ns::parse_transcript(std::string(kHeader) + "E1\t1\tA\t0\t2\thi\nE1\t1\tB\t2\t3\n");
  EXPECT_EQ(c.characters.size(), 2u);
  ASSERT_EQ(c.scene_count(), 1u);
  EXPECT_EQ(c.scene(1).turns.size(), 2u);
  EXPECT_EQ(c.scene(1).turns[0].text, "hi");
  EXPECT_EQ(c.scene(1).turns[1].duration(), sec(1));
}

TEST(ParseTranscript, EmptyTurnIsAnError) {
  try {
    ns::parse_transcript(std::string(kHeader) + "E1\t1\tA\t2\t2\n");
    FAIL() << "expected ParseError";
  } catch (const ns::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("empty turn"), std::string::npos);
  }
  EXPECT_THROW(ns::parse_transcript(std::string(kHeader) + "E1\t1\tA\t3\t2\n"), ns::ParseError);
}

TEST(ParseTranscript, ReportsMalformedLineNumber) {
  std::string text = "# comment\n" + std::string(kHeader) + "E1\t1\tA\t0\t1\n\nE1\t1\tB\tx\t2\n";
  try {
    ns::parse_transcript(text);
    FAIL();
  } catch (const ns::ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  EXPECT_THROW(ns::parse_transcript(std::string(kHeader) + "E1\t1\tA\t0\n"), ns::ParseError);
  EXPECT_THROW(ns::parse_transcript("E1\t1\tA\t0\t1\n"), ns::ParseError);  // no header
  EXPECT_THROW(ns::parse_transcript(""), ns::ParseError);
  EXPECT_THROW(ns::parse_transcript(kHeader), ns::ParseError);
}

TEST(ParseTranscript, SceneIndexRegression) {
  auto text = std::string(kHeader) + "E1\t2\tA\t0\t1\nE1\t1\tB\t0\t1\n";
  EXPECT_THROW(ns::parse_transcript(text), ns::ParseError);
}

TEST(ParseTranscript, OrdersScenesTurnsAndIds) {
  // Episode order follows first appearance; turns are sorted by start.
  auto c = ns::parse_transcript(std::string(kHeader) +
                                "E2\t1\tZed\t5\t6\n"
                                "E1\t3\tBob\t9\t10\n"
                                "E1\t3\tAmy\t1\t2\n"
                                "E2\t4\tAmy\t0\t1\n"
                                "E1\t7\t\t\t\t\n");
  ASSERT_EQ(c.scene_count(), 4u);
  EXPECT_EQ(c.scene(1).episode, "E2");
  EXPECT_EQ(c.scene(2).local_index, 4);
  EXPECT_EQ(c.scene(3).episode, "E1");
  EXPECT_EQ(c.scene(3).local_index, 3);
  EXPECT_TRUE(c.scene(4).turns.empty());
  EXPECT_EQ(c.characters.name(c.scene(3).turns[0].speaker), "Amy");
  // Ids follow first appearance in the ordered corpus.
  EXPECT_EQ(c.characters.names(), (std::vector<std::string>{"Zed", "Amy", "Bob"}));
  for (std::size_t t = 1; t <= c.scene_count(); ++t) EXPECT_EQ(c.scene(t).index, t);
}

TEST(ParseTranscript, CaseFolding) {
  auto text = std::string(kHeader) + "E1\t1\tWalter\t0\t1\nE1\t1\tWALTER \t1\t2\nE1\t1\tJesse\t2\t3\n";
  EXPECT_EQ(ns::parse_transcript(text).characters.size(), 3u);
  auto folded = ns::parse_transcript(text, {.case_fold_names = true});
  EXPECT_EQ(folded.characters.size(), 2u);
  EXPECT_EQ(folded.characters.name(ns::CharacterId{0}), "Walter");
  EXPECT_EQ(folded.characters.at("walter"), ns::CharacterId{0});
}

TEST(ParseTranscript, LargeSyntheticStream) {
  auto c = ns::parse_transcript(ns::testing::synthetic_series_transcript(402, 40, 7));
  EXPECT_EQ(c.scene_count(), 402u);
  EXPECT_EQ(ns::validate(c).scenes, 402u);
}

TEST(ParseTranscript, RoundTripIdentity) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 30; ++iter) {
    auto corpus = ns::testing::random_corpus(rng, 1 + rng() % 40, 2 + rng() % 10);
    auto again = ns::parse_transcript(ns::serialize_transcript(corpus));
    EXPECT_EQ(again, corpus);
    EXPECT_EQ(ns::serialize_transcript(again), ns::serialize_transcript(corpus));
  }
  auto corpus = ns::testing::worked_example_corpus();
  EXPECT_EQ(ns::parse_transcript(ns::serialize_transcript(corpus)), corpus);
}

TEST(Subtitles, DirectFieldMapping) {
  auto parsed = ns::parse_subtitles("1\n00:00:01,000 --> 00:00:03,500\nWALTER: Say my name.\n");
  ASSERT_EQ(parsed.fragments.size(), 1u);
  const auto& f = parsed.fragments[0];
  EXPECT_EQ(f.speaker, "WALTER");
  EXPECT_EQ(f.start, sec(1.0));
  EXPECT_EQ(f.end, sec(3.5));
  EXPECT_EQ(f.text, "Say my name.");
  EXPECT_TRUE(parsed.warnings.empty());
}

TEST(Subtitles, MissingArrowNamesCue) {
  try {
    ns::parse_subtitles("1\n00:00:01,000 --> 00:00:02,000\nA: x\n\n2\n00:00:03,000 00:00:04,000\nB: y\n");
    FAIL();
  } catch (const ns::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("cue 2"), std::string::npos);
  }
}

TEST(Subtitles, NoImplicitMergingAndSkippedCues) {
  auto parsed = ns::parse_subtitles(
      "1\r\n00:00:01,000 --> 00:00:02,000\r\nJESSE: Yo.\r\n\r\n"
      "2\n00:00:02,100 --> 00:00:03,000\nJESSE : Yo again,\nsecond line.\n\n"
      "3\n00:00:04,000 --> 00:00:05,000\n(music)\n\n"
      "4\n01:02:03,004 --> 01:02:04,000\nSKYLER: Walt?\n");
  ASSERT_EQ(parsed.fragments.size(), 3u);
  EXPECT_EQ(parsed.fragments[1].speaker, "JESSE");
  EXPECT_EQ(parsed.fragments[1].text, "Yo again, second line.");
  EXPECT_EQ(parsed.fragments[2].start, Micros(3723004000));
  EXPECT_EQ(parsed.fragments[2].cue, 4u);
  ASSERT_EQ(parsed.warnings.size(), 1u);
  EXPECT_NE(parsed.warnings[0].find("cue 3"), std::string::npos);
}

TEST(Subtitles, AssembleWithSceneBoundaries) {
  auto ep = ns::parse_subtitles(
      "1\n00:00:01,000 --> 00:00:02,000\nA: one\n\n"
      "2\n00:00:02,500 --> 00:00:04,000\nB: two\n\n"
      "3\n00:00:12,000 --> 00:00:13,000\nC: three\n\n"
      "4\n00:00:40,000 --> 00:00:41,000\nC: lost\n");
  auto bounds = ns::parse_scene_boundaries("episode\tscene\tstart\tend\nE1\t1\t0\t10\nE1\t2\t10\t20\nE1\t3\t20\t30\n");
  auto assembled = ns::assemble_corpus({{"E1", ep.fragments}}, bounds);
  const auto& c = assembled.corpus;
  ASSERT_EQ(c.scene_count(), 3u);
  EXPECT_EQ(c.scene(1).turns.size(), 2u);
  EXPECT_EQ(c.scene(2).turns.size(), 1u);
  EXPECT_TRUE(c.scene(3).turns.empty());
  ASSERT_EQ(assembled.warnings.size(), 1u);
  EXPECT_NE(assembled.warnings[0].find("cue 4"), std::string::npos);
  EXPECT_DOUBLE_EQ(ns::validate(c).percent_spoken, 100.0 * 2 / 3);
}

TEST(Merge, SameSpeakerWithinThreshold) {
  ns::Scene s{1, "E", 1, {ns::make_turn({0}, sec(0), sec(2)), ns::make_turn({0}, sec(2.5), sec(4))}};
  auto m = ns::merge_adjacent_turns(s, sec(1.0));
  ASSERT_EQ(m.turns.size(), 1u);
  EXPECT_EQ(m.turns[0].start, sec(0));
  EXPECT_EQ(m.turns[0].end, sec(4));
  EXPECT_EQ(m.turns[0].duration(), sec(3.5));
}

TEST(Merge, DifferentSpeakersOrLargeGapUnchanged) {
  ns::Scene ab{1, "E", 1, {ns::make_turn({0}, sec(0), sec(2)), ns::make_turn({1}, sec(2), sec(3))}};
  EXPECT_EQ(ns::merge_adjacent_turns(ab, sec(1.0)), ab);
  ns::Scene far{1, "E", 1, {ns::make_turn({0}, sec(0), sec(2)), ns::make_turn({0}, sec(10), sec(11))}};
  EXPECT_EQ(ns::merge_adjacent_turns(far, sec(1.0)), far);
}

TEST(Merge, Idempotent) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 200; ++iter) {
    ns::Scene s{1, "E", 1, {}};
    std::int64_t t = 0;
    const auto n = rng() % 15;
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t d = 1 + static_cast<std::int64_t>(rng() % 3'000'000);
      s.turns.push_back(ns::make_turn({static_cast<std::uint32_t>(rng() % 2)}, Micros(t), Micros(t + d)));
      t += d + static_cast<std::int64_t>(rng() % 2'500'000);
    }
    auto once = ns::merge_adjacent_turns(s, sec(1.0));
    EXPECT_EQ(ns::merge_adjacent_turns(once, sec(1.0)), once);
    Micros total{0}, merged_total{0};
    for (const auto& turn : s.turns) total += turn.duration();
    for (const auto& turn : once.turns) merged_total += turn.duration();
    EXPECT_EQ(total, merged_total);
  }
}

TEST(Validate, SpokenShareAndSpeakersPerScene) {
  using ns::testing::TurnSpec;
  auto c = ns::testing::corpus_from_scenes({{{"A", 0, 1}, {"B", 1, 2}}, {}});
  auto r = ns::validate(c);
  EXPECT_DOUBLE_EQ(r.percent_spoken, 50.0);
  EXPECT_EQ(r.count(ns::WarningKind::EmptyScene), 1u);

  auto c2 = ns::testing::corpus_from_scenes(
      {{{"A", 0, 1}, {"B", 1, 2}}, {{"A", 0, 1}, {"B", 1, 2}, {"C", 2, 3}}});
  auto r2 = ns::validate(c2);
  EXPECT_DOUBLE_EQ(r2.mean_speakers, 2.5);
  EXPECT_DOUBLE_EQ(r2.std_speakers, 0.5);
  EXPECT_EQ(r2.episodes, 1u);
  EXPECT_EQ(r2.turns, 5u);
  EXPECT_EQ(r2.speakers, 3u);
}

TEST(Validate, WarningsForOverlapAndRepeats) {
  auto c = ns::testing::corpus_from_scenes({{{"A", 0, 2}, {"B", 1, 3}, {"B", 3.5, 4}}, {{"A", 0, 1}}});
  auto r = ns::validate(c);
  EXPECT_EQ(r.count(ns::WarningKind::OverlappingTurns), 1u);
  EXPECT_EQ(r.count(ns::WarningKind::RepeatedSpeaker), 1u);
  EXPECT_EQ(r.count(ns::WarningKind::SingleSpeakerScene), 1u);
}

TEST(Validate, MatchesBruteForceRecount) {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 50; ++iter) {
    auto c = ns::testing::random_corpus(rng, 1 + rng() % 60, 2 + rng() % 12);
    auto r = ns::validate(c);
    std::size_t turns = 0, spoken = 0;
    std::set<std::uint32_t> speakers;
    std::int64_t speech = 0;
    std::vector<double> per;
    for (const auto& s : c.scenes) {
      std::set<std::uint32_t> here;
      for (const auto& t : s.turns) {
        ++turns;
        speech += (t.end - t.start).count();
        here.insert(t.speaker.value);
        speakers.insert(t.speaker.value);
      }
      spoken += !s.turns.empty();
      per.push_back(static_cast<double>(here.size()));
    }
    double mean = 0;
    for (double v : per) mean += v;
    mean /= static_cast<double>(per.size());
    double var = 0;
    for (double v : per) var += (v - mean) * (v - mean);
    EXPECT_EQ(r.turns, turns);
    EXPECT_EQ(r.speakers, speakers.size());
    EXPECT_EQ(r.speech.micros(), speech);
    EXPECT_DOUBLE_EQ(r.percent_spoken, 100.0 * static_cast<double>(spoken) / static_cast<double>(per.size()));
    EXPECT_NEAR(r.mean_speakers, mean, 1e-12);
    EXPECT_NEAR(r.std_speakers, std::sqrt(var / static_cast<double>(per.size())), 1e-12);
  }
}
