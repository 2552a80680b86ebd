#include <gtest/gtest.h>

#include <algorithm>

#include "expect_errc.hpp"
#include "support.hpp"
#include "twinops/faultloc.hpp"

using namespace twinops;
using namespace twinops::faultloc;
namespace ts = twinops::testsupport;
using topology::ElementKind;

namespace {

topology::Element el(std::string id, ElementKind kind, int slot) {
  topology::Element e{std::move(id), kind, "M", "TN1", std::nullopt, std::nullopt};
  if (kind != ElementKind::FiberSpan) {
    e.shelf = "S";
    e.slot = slot;
  }
  return e;
}

topology::TopologyGraph small_wl2() {
  return topology::TopologyGraph::build(
      {el("OT-a", ElementKind::OT, 1), el("SPAN-1", ElementKind::FiberSpan, 0), el("LA-1", ElementKind::LA, 2),
       el("WSS-1", ElementKind::WSS, 3), el("OT-b", ElementKind::OT, 4), el("LONE", ElementKind::LA, 5)},
      {{"OT-a", "SPAN-1"}, {"SPAN-1", "LA-1"}, {"LA-1", "WSS-1"}, {"WSS-1", "OT-b"}},
      {{"WL2", {"OT-a", "SPAN-1", "LA-1", "WSS-1", "OT-b"}, 200}}, {{"SPAN-1", 20.0}});
}

// Straight chain OT -> LA1 -> ... -> LAn -> OT.
topology::TopologyGraph chain(int n) {
  std::vector<topology::Element> els{el("C0", ElementKind::OT, 0)};
  std::vector<std::string> route{"C0"};
  for (int i = 1; i <= n; ++i) {
    els.push_back(el("C" + std::to_string(i), ElementKind::LA, i));
    route.push_back(els.back().id);
  }
  els.push_back(el("C" + std::to_string(n + 1), ElementKind::OT, n + 1));
  route.push_back(els.back().id);
  std::vector<topology::Edge> edges;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) edges.push_back({route[i], route[i + 1]});
  return topology::TopologyGraph::build(els, edges, {{"WL", route, 100}}, {});
}

std::vector<std::string> order_of(const LocalizationResult& r) {
  std::vector<std::string> ids;
  for (const auto& e : r.ranking) ids.push_back(e.element_id);
  return ids;
}

std::vector<Alarm> random_alarms(ts::Rng& rng, const topology::TopologyGraph& g, int max_n) {
  std::vector<Alarm> out;
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
  const auto& els = g.elements();
  for (int i = 0; i < n; ++i) {
    const auto& e = els[std::uniform_int_distribution<std::size_t>(0, els.size() - 1)(rng)];
    Alarm a{e.id, "", static_cast<Severity>(std::uniform_int_distribution<int>(0, 3)(rng)), i};
    out.push_back(a);
  }
  return out;
}

}  // namespace

// ---- parse_severity ----

TEST(ParseSeverity, KeywordTable) {
  EXPECT_EQ(parse_severity("Loss of signal - card failure"), Severity::Critical);
  EXPECT_EQ(parse_severity(""), Severity::Warning);
  EXPECT_EQ(parse_severity("degraded input power"), Severity::Minor);
  EXPECT_EQ(parse_severity("Frame loss on line port"), Severity::Major);
  EXPECT_EQ(parse_severity("High BER detected"), Severity::Major);
  EXPECT_EQ(parse_severity("LOS on client port"), Severity::Critical);
  EXPECT_EQ(parse_severity("fan speed nominal"), Severity::Warning);
}

TEST(ParseSeverity, CaseInsensitive) {
  for (const char* text : {"card FAILURE", "Card Failure", "card failure"}) {
    EXPECT_EQ(parse_severity(text), Severity::Critical) << text;
  }
  EXPECT_EQ(parse_severity("DEGRADED"), Severity::Minor);
  EXPECT_EQ(parse_severity("hIgH bEr"), Severity::Major);
}

TEST(ParseSeverity, MatchesWholeWordsOnly) {
  EXPECT_EQ(parse_severity("door closed"), Severity::Warning);  // "los" inside a word
  EXPECT_EQ(parse_severity("failures logged"), Severity::Warning);
  EXPECT_EQ(parse_severity("frame lossy"), Severity::Warning);
}

TEST(ParseSeverity, HighestSeverityWins) {
  EXPECT_EQ(parse_severity("degraded then failure"), Severity::Critical);
  EXPECT_EQ(parse_severity("degraded with frame loss"), Severity::Major);
}

TEST(ParseSeverity, TotalOverArbitraryBytes) {
  ts::Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::string s(std::uniform_int_distribution<int>(0, 40)(rng), '\0');
    for (auto& c : s) c = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
    EXPECT_NO_THROW(parse_severity(s));
  }
}

TEST(Severity, TotalOrderAndNames) {
  EXPECT_GT(Severity::Critical, Severity::Major);
  EXPECT_GT(Severity::Major, Severity::Minor);
  EXPECT_GT(Severity::Minor, Severity::Warning);
  for (auto s : {Severity::Critical, Severity::Major, Severity::Minor, Severity::Warning}) {
    EXPECT_EQ(severity_from_name(to_string(s)), s);
  }
  EXPECT_ERRC(severity_from_name("critical"), Errc::InvalidArgument);
}

// ---- propagate_fault ----

TEST(PropagateFault, CascadeDownstreamSkippingSpans) {
  const auto alarms = propagate_fault(small_wl2(), "OT-a");
  ASSERT_EQ(alarms.size(), 4u);
  EXPECT_EQ(alarms[0].element_id, "OT-a");
  EXPECT_EQ(alarms[0].severity, Severity::Critical);
  const std::vector<std::string> rest{"LA-1", "WSS-1", "OT-b"};
  for (std::size_t i = 0; i < rest.size(); ++i) {
    EXPECT_EQ(alarms[i + 1].element_id, rest[i]);
    EXPECT_EQ(alarms[i + 1].severity, Severity::Major);
  }
  for (const auto& a : alarms) EXPECT_EQ(parse_severity(a.text), a.severity);
}

TEST(PropagateFault, TerminalTransponderRaisesSingleAlarm) {
  const auto alarms = propagate_fault(small_wl2(), "OT-b");
  ASSERT_EQ(alarms.size(), 1u);
  EXPECT_EQ(alarms[0].severity, Severity::Critical);
}

TEST(PropagateFault, ElementOnNoPath) {
  EXPECT_ERRC(propagate_fault(small_wl2(), "LONE"), Errc::NotOnAnyPath);
  EXPECT_ERRC(propagate_fault(small_wl2(), "nope"), Errc::UnknownElement);
}

TEST(PropagateFault, MatchesIndependentCascadeOnRandomGraphs) {
  ts::Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const auto g = ts::random_topology(rng);
    for (const auto& f : ts::on_path_elements(g)) {
      const auto got = propagate_fault(g, f);
      const auto want = ts::expected_cascade(g, f);
      ASSERT_EQ(got.size(), want.size()) << f;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].element_id, want[i].first);
        EXPECT_EQ(got[i].severity, want[i].second);
      }
    }
  }
}

// ---- localize ----

TEST(Localize, ReferenceScenarioFindsTheWl2Transponder) {
  const auto& s = ts::reference_scenario();
  const auto r = localize(s.graph, s.alarms);
  const auto& wl2_source = s.graph.path("WL2").route.front();
  EXPECT_EQ(r.root_cause_id, wl2_source);
  ASSERT_EQ(r.ranking.size(), 3u);
  EXPECT_EQ(r.ranking[0].element_id, wl2_source);
  EXPECT_GT(r.ranking[0].score, r.ranking[1].score);
}

TEST(Localize, SingleAlarmScoresOne) {
  const std::vector<Alarm> alarms{make_alarm("LA-1", "degraded", 0)};
  const auto r = localize(small_wl2(), alarms);
  EXPECT_EQ(r.root_cause_id, "LA-1");
  ASSERT_EQ(r.ranking.size(), 1u);
  // A lone MINOR alarm covers everything, weighted by its own severity.
  EXPECT_DOUBLE_EQ(r.ranking[0].score, 0.5);
  const std::vector<Alarm> critical{make_alarm("LA-1", "card failure", 0)};
  EXPECT_DOUBLE_EQ(localize(small_wl2(), critical).ranking[0].score, 1.0);
}

TEST(Localize, Errors) {
  EXPECT_ERRC(localize(small_wl2(), std::vector<Alarm>{}), Errc::EmptyAlarms);
  const std::vector<Alarm> ghost{make_alarm("ghost", "failure", 0)};
  EXPECT_ERRC(localize(small_wl2(), ghost), Errc::UnknownElement);
}

TEST(Localize, ScoresMatchIndependentCoverageOracle) {
  ts::Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const auto g = ts::random_topology(rng);
    const auto alarms = random_alarms(rng, g, 12);
    const auto r = localize(g, alarms);
    const auto oracle = ts::coverage_scores(g, alarms);
    ASSERT_EQ(r.ranking.size(), oracle.size());
    for (const auto& e : r.ranking) EXPECT_NEAR(e.score, oracle.at(e.element_id), 1e-12) << e.element_id;
    EXPECT_TRUE(ts::coverage_argmax(g, alarms).count(r.root_cause_id));
  }
}

TEST(Localize, ResultInvariants) {
  ts::Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const auto g = ts::random_topology(rng);
    const auto alarms = random_alarms(rng, g, 10);
    const auto r = localize(g, alarms);
    ASSERT_FALSE(r.ranking.empty());
    EXPECT_EQ(r.root_cause_id, r.ranking.front().element_id);
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
      EXPECT_GE(r.ranking[i].score, 0.0);
      EXPECT_LE(r.ranking[i].score, 1.0);
      if (i > 0) {
        EXPECT_LE(r.ranking[i].score, r.ranking[i - 1].score + 1e-12);
      }
    }
    ASSERT_EQ(r.explained.size(), alarms.size());
    for (std::size_t i = 0; i < alarms.size(); ++i) {
      EXPECT_EQ(r.explained[i].alarm_index, i);
      EXPECT_EQ(r.explained[i].element_id, alarms[i].element_id);
    }
  }
}

TEST(Localize, OracleClosureOnRandomGraphs) {
  ts::Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const auto g = ts::random_topology(rng, 50, 4);
    for (const auto& f : ts::on_path_elements(g)) {
      const auto alarms = propagate_fault(g, f);
      EXPECT_EQ(localize(g, alarms).root_cause_id, f);
      EXPECT_EQ(ts::coverage_argmax(g, alarms), std::set<std::string>{f});
    }
  }
}

TEST(Localize, PermutationInvariant) {
  ts::Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    const auto g = ts::random_topology(rng);
    auto alarms = random_alarms(rng, g, 12);
    const auto base = localize(g, alarms);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(alarms.begin(), alarms.end(), rng);
      const auto r = localize(g, alarms);
      EXPECT_EQ(r.root_cause_id, base.root_cause_id);
      EXPECT_EQ(order_of(r), order_of(base));
    }
  }
}

TEST(Localize, SeverityWeightScalingKeepsRankingOrder) {
  ts::Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const auto g = ts::random_topology(rng);
    const auto alarms = random_alarms(rng, g, 12);
    const auto base = localize(g, alarms);
    for (double c : {0.01, 0.3, 2.0, 1000.0}) {
      const SeverityWeights w{1.0 * c, 0.75 * c, 0.5 * c, 0.25 * c};
      const auto r = localize(g, alarms, w);
      EXPECT_EQ(order_of(r), order_of(base)) << "scale " << c;
    }
  }
}

TEST(Localize, TiesBreakByPathPositionThenId) {
  // Two MAJOR alarms on distinct paths with equal coverage.
  const auto g = topology::TopologyGraph::build(
      {el("A0", ElementKind::OT, 0), el("A1", ElementKind::LA, 1), el("A2", ElementKind::OT, 2),
       el("B0", ElementKind::OT, 3), el("B1", ElementKind::LA, 4), el("B2", ElementKind::OT, 5)},
      {{"A0", "A1"}, {"A1", "A2"}, {"B0", "B1"}, {"B1", "B2"}},
      {{"WLA", {"A0", "A1", "A2"}, 1}, {"WLB", {"B0", "B1", "B2"}, 1}}, {});
  const std::vector<Alarm> same_pos{make_alarm("B1", "frame loss", 0), make_alarm("A1", "frame loss", 0)};
  EXPECT_EQ(localize(g, same_pos).root_cause_id, "A1");
  const std::vector<Alarm> diff_pos{make_alarm("A2", "frame loss", 0), make_alarm("B1", "frame loss", 0)};
  EXPECT_EQ(localize(g, diff_pos).root_cause_id, "B1");
}

// ---- localize_mp ----

TEST(LocalizeMp, AgreesWithCoverageOnReferenceScenario) {
  const auto& s = ts::reference_scenario();
  const auto mp = localize_mp(s.graph, s.alarms, {3, 0.6, 0.4});
  EXPECT_EQ(mp.root_cause_id, localize(s.graph, s.alarms).root_cause_id);
  EXPECT_EQ(mp.root_cause_id, s.graph.path("WL2").route.front());
}

TEST(LocalizeMp, SingleCriticalWinsForAnyK) {
  const auto g = chain(6);
  const std::vector<Alarm> one{make_alarm("C3", "card failure", 0)};
  for (int k = 1; k <= 12; ++k) {
    MessagePassingParams p;
    p.iterations = k;
    EXPECT_EQ(localize_mp(g, one, p).root_cause_id, "C3") << k;
  }
}

TEST(LocalizeMp, ChainArgmaxStableAcrossK) {
  const auto g = chain(8);
  ts::Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const int f = std::uniform_int_distribution<int>(0, 8)(rng);
    const auto alarms = propagate_fault(g, "C" + std::to_string(f));
    const auto k1 = localize_mp(g, alarms, {1, 0.6, 0.4});
    const auto k10 = localize_mp(g, alarms, {10, 0.6, 0.4});
    EXPECT_EQ(k1.root_cause_id, k10.root_cause_id);
    EXPECT_EQ(k1.root_cause_id, "C" + std::to_string(f));
  }
}

TEST(LocalizeMp, StatesStayWithinUnitInterval) {
  ts::Rng rng(81);
  for (int t = 0; t < 100; ++t) {
    const auto g = ts::random_topology(rng);
    const auto alarms = random_alarms(rng, g, 15);
    for (int k : {1, 2, 3, 7, 20}) {
      const auto states = message_passing_states(g, alarms, {k, 0.6, 0.4});
      ASSERT_EQ(states.size(), g.elements().size());
      for (double v : states) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(LocalizeMp, ResultInvariantsAndErrors) {
  ts::Rng rng(82);
  for (int t = 0; t < 50; ++t) {
    const auto g = ts::random_topology(rng);
    auto alarms = random_alarms(rng, g, 10);
    const auto r = localize_mp(g, alarms);
    EXPECT_EQ(r.root_cause_id, r.ranking.front().element_id);
    for (std::size_t i = 1; i < r.ranking.size(); ++i) EXPECT_LE(r.ranking[i].score, r.ranking[i - 1].score);
    EXPECT_EQ(r.explained.size(), alarms.size());
    std::shuffle(alarms.begin(), alarms.end(), rng);
    EXPECT_EQ(order_of(localize_mp(g, alarms)), order_of(r));
  }
  const auto g = chain(2);
  EXPECT_ERRC(localize_mp(g, std::vector<Alarm>{}), Errc::EmptyAlarms);
  const std::vector<Alarm> one{make_alarm("C1", "failure", 0)};
  EXPECT_ERRC(localize_mp(g, one, {0, 0.6, 0.4}), Errc::InvalidArgument);
}

TEST(LocalizeMp, ClosureOnRandomGraphs) {
  ts::Rng rng(91);
  int total = 0;
  int hits = 0;
  for (int t = 0; t < 50; ++t) {
    const auto g = ts::random_topology(rng);
    for (const auto& f : ts::on_path_elements(g)) {
      ++total;
      hits += localize_mp(g, propagate_fault(g, f)).root_cause_id == f;
    }
  }
  EXPECT_EQ(hits, total);
}
