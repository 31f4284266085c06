#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "pentaca/data.hpp"
#include "pentaca/error.hpp"
#include "pentaca/structures.hpp"
#include "support/oracles.hpp"

using namespace pentaca;
using oracle::reds_outside;
using oracle::side_adjacent;

namespace {

TileRef L(const char* s) { return parse_label(s); }

const RuleTable& rules() { return data::rules(); }

std::string variant_name(const testing::TestParamInfo<std::pair<StructureKind, StructureParams>>& info) {
  return template_name(info.param.first, info.param.second);
}

}  // namespace

// ---- inference --------------------------------------------------------------

TEST(Inference, TrackReproducesFixture) {
  const auto fx = data::fixtures("exvertd/simple").front();
  const auto inf = infer_initial_pattern(fx, rules());
  EXPECT_FALSE(inf.pattern.empty());
  EXPECT_EQ(reds_outside(inf.pattern, {}).size(), 1u);
  const std::set<TileRef> watched(fx.cells.begin(), fx.cells.end());
  EXPECT_TRUE(check_trace(run_auto(rules(), inf.pattern, fx.steps(), watched).trace, fx).pass());
}

TEST(Inference, ForgedIdNamesBothEntries) {
  auto fx = data::fixtures("exvertd/simple").front();
  const auto r = std::find(fx.cells.begin(), fx.cells.end(), TileRef::centre()) - fx.cells.begin();
  fx.grid[static_cast<std::size_t>(r)][1] = 18;
  try {
    infer_initial_pattern(fx, rules());
    FAIL();
  } catch (const InferenceError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("0(0) at time 1 (rule 18)"), std::string::npos) << what;
    EXPECT_NE(what.find("contradict each other"), std::string::npos) << what;
  }
}

TEST(Inference, EmptyFixture) {
  const auto inf = infer_initial_pattern(TraceFixture{}, rules());
  EXPECT_TRUE(inf.pattern.empty());
  EXPECT_TRUE(inf.report.defaulted.empty());
}

TEST(Inference, UnknownRuleId) {
  auto fx = parse_fixture("cell\tt0\n0(0)\t352\n");
  RuleTable small({*rules().find(1)});
  EXPECT_THROW(infer_initial_pattern(fx, small), InferenceError);
}

TEST(Inference, SharedRunsAgreeOnBlue) {
  const auto fixtures = data::fixtures("exvertd");
  const auto inf = infer_shared_structure(fixtures, rules());
  ASSERT_EQ(inf.size(), 2u);
  std::set<TileRef> cells;
  for (const auto& i : inf) {
    for (const auto& [t, s] : i.pattern.cells()) cells.insert(t);
  }
  for (TileRef t : cells) EXPECT_EQ(inf[0].pattern.get(t) == State::B, inf[1].pattern.get(t) == State::B) << t;
}

// ---- pattern files ------------------------------------------------------------

TEST(Patterns, LoadSave) {
  const auto c = load_pattern("# x\n0(0) R\n");
  EXPECT_EQ(c.get(TileRef::centre()), State::R);
  const auto d = load_pattern("2(1) B\n1(3) R\n1(1) B\n");
  EXPECT_EQ(save_pattern(d), "1(1) B\n2(1) B\n1(3) R\n");
  EXPECT_EQ(load_pattern(save_pattern(d)), d);
}

TEST(Patterns, Errors) {
  EXPECT_THROW(load_pattern("0(0) W\n"), ParseError);
  EXPECT_THROW(load_pattern("0(0) B\n0(0) R\n"), ParseError);
  EXPECT_THROW(load_pattern("0(0)\n"), ParseError);
  try {
    load_pattern("0(0) B\n1(9) B\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Ports, LoadSave) {
  const auto p = load_ports("# doubler\nport in 5(1) 1\nport out 3(3) 1\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1].name, "out");
  EXPECT_EQ(p[1].cell, L("3(3)"));
  EXPECT_EQ(save_ports(p), "port in 5(1) 1\nport out 3(3) 1\n");
  EXPECT_THROW(load_ports("port in 5(1) 11\n"), ParseError);
  EXPECT_THROW(load_ports("port in 5(1) 1\nport in 3(3) 1\n"), ParseError);
  EXPECT_THROW(load_ports("gate in 5(1) 1\n"), ParseError);
}

TEST(Templates, Catalogue) {
  EXPECT_EQ(structure_variants().size(), 16u);
  for (StructureKind k : all_structure_kinds()) EXPECT_EQ(structure_kind_from_string(to_string(k)), k);
  EXPECT_THROW(structure_kind_from_string("bridge"), UsageError);
  EXPECT_THROW(build_structure(StructureKind::ring3, {true}), UsageError);
  EXPECT_THROW(build_structure(StructureKind::doubler).port("sideways"), UsageError);
}

TEST(Templates, TrackElementIsDownTrack) {
  const auto a = build_structure(StructureKind::track_element);
  const auto b = build_structure(StructureKind::vertical_track_down);
  EXPECT_EQ(a.cells, b.cells);
}

TEST(Templates, DoublerFileMatchesInference) {
  const auto tpl = build_structure(StructureKind::doubler);
  const auto inf = infer_initial_pattern(data::fixtures("exdoubl").front(), rules());
  Configuration idle = inf.pattern;
  for (TileRef t : reds_outside(inf.pattern, {})) idle.set(t, State::W);
  EXPECT_EQ(tpl.cells, idle);
}

// ---- placement ----------------------------------------------------------------

TEST(Place, IdentityAtCentre) {
  const auto tpl = build_structure(StructureKind::selector);
  const auto m = expand_map(8);
  EXPECT_EQ(place(tpl.cells, *m, TileRef::centre(), 0), tpl.cells);
  const auto placed = place(tpl, *m, TileRef::centre(), 0);
  for (std::size_t i = 0; i < tpl.ports.size(); ++i) {
    EXPECT_EQ(placed.ports[i].cell, tpl.ports[i].cell);
    EXPECT_EQ(placed.ports[i].neighbor, tpl.ports[i].neighbor);
  }
}

TEST(Place, RingRotationsAreSectorRotations) {
  const auto tpl = build_structure(StructureKind::ring1, {true});
  const auto m = expand_map(8);
  std::vector<Configuration> placed;
  for (int r = 0; r < 5; ++r) placed.push_back(place(tpl.cells, *m, TileRef::centre(), r));
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) EXPECT_EQ(placed[a].rotated((b - a + 5) % 5), placed[b]);
  }
}

TEST(Place, DoublerOffCentreKeepsRuleMultiset) {
  const auto tpl = build_structure(StructureKind::doubler);
  const auto m = expand_map(11);
  const auto moved = place(tpl, *m, L("5(3)"), 2);
  EXPECT_EQ(moved.cells.size(), tpl.cells.size());

  auto multiset = [&](const PatternTemplate& t) {
    std::set<TileRef> watched;
    for (const auto& [c, s] : t.cells.cells()) watched.insert(c);
    for (const auto& p : t.ports) watched.insert(p.cell);
    std::multiset<int> ids;
    for (const auto& e : run(*m, rules(), with_locomotive(t, "in"), 6, watched).trace.events) ids.insert(e.rule_id);
    return ids;
  };
  EXPECT_EQ(multiset(moved), multiset(tpl));
}

TEST(Place, TooShallow) {
  const auto tpl = build_structure(StructureKind::doubler);
  EXPECT_THROW(place(tpl.cells, *expand_map(3), L("40(2)"), 0), MapTooShallow);
}

// ---- per-variant properties -------------------------------------------------------

class Variant : public testing::TestWithParam<std::pair<StructureKind, StructureParams>> {
 protected:
  PatternTemplate tpl() const { return build_structure(GetParam().first, GetParam().second); }
};

TEST_P(Variant, IdleFixedPoint) {
  const auto t = tpl();
  ASSERT_FALSE(t.cells.empty());
  Configuration c = t.cells;
  for (int k = 0; k < 20; ++k) {
    c = run_auto(rules(), c, 1).config;
    ASSERT_EQ(c, t.cells) << "step " << k + 1;
  }
}

TEST_P(Variant, PortsOnWhiteCells) {
  const auto t = tpl();
  for (const Port& p : t.ports) {
    EXPECT_EQ(t.cells.get(p.cell), State::W) << p.name;
    EXPECT_GE(p.neighbor, 1);
    EXPECT_LE(p.neighbor, 10);
  }
}

TEST_P(Variant, FileMatchesDerivation) {
  const auto t = tpl();
  const auto d = derive_structure(GetParam().first, GetParam().second, rules());
  EXPECT_EQ(d.tpl.cells, t.cells);
  ASSERT_EQ(d.tpl.ports.size(), t.ports.size());
  for (std::size_t i = 0; i < t.ports.size(); ++i) {
    EXPECT_EQ(d.tpl.ports[i].name, t.ports[i].name);
    EXPECT_EQ(d.tpl.ports[i].cell, t.ports[i].cell);
    EXPECT_EQ(d.tpl.ports[i].neighbor, t.ports[i].neighbor);
  }
}

TEST_P(Variant, RotationEquivariance) {
  const auto t = tpl();
  const auto m = expand_map(9);
  const Configuration start = with_locomotive(t, t.ports.front().name);
  constexpr int kSteps = 8;
  const auto base = run(*m, rules(), start, kSteps);
  for (int r = 1; r < 5; ++r) {
    const Configuration placed = place(start, *m, TileRef::centre(), r);
    ASSERT_EQ(placed, start.rotated(r));
    const auto turned = run(*m, rules(), placed, kSteps);
    EXPECT_EQ(turned.config, base.config.rotated(r)) << "rotation " << r;
    std::vector<TraceEvent> relabelled;
    for (auto e : base.trace.events) {
      e.cell = rotate_tile(e.cell, r);
      relabelled.push_back(e);
    }
    std::sort(relabelled.begin(), relabelled.end(),
              [](const auto& a, const auto& b) { return std::tie(a.time, a.cell) < std::tie(b.time, b.cell); });
    EXPECT_EQ(turned.trace.events, relabelled) << "rotation " << r;
  }
}

INSTANTIATE_TEST_SUITE_P(All, Variant, testing::ValuesIn(structure_variants()), variant_name);

// ---- behavioural contracts ----------------------------------------------------

struct Passage {
  StructureKind kind;
  const char* fixture;
  const char* entry;
  bool doubled;
  std::vector<const char*> exits;
  std::size_t reds_at_exit;  // locomotive cells when the exits are reached
};

class Contract : public testing::TestWithParam<Passage> {};

TEST_P(Contract, ReachesExitsAtFixtureStep) {
  const Passage& p = GetParam();
  const auto tpl = build_structure(p.kind);
  const auto fx = data::fixtures(p.fixture).front();
  int when = -1;
  for (const char* exit : p.exits) {
    const int k = oracle::arrival_from_fixture(fx, tpl.port(exit), rules());
    ASSERT_GE(k, 0) << exit;
    if (when >= 0) {
      ASSERT_EQ(k, when);
    }
    when = k;
  }
  const auto h = oracle::history(rules(), with_locomotive(tpl, p.entry, p.doubled), when);
  EXPECT_EQ(reds_outside(h.front(), tpl.cells).size(), p.doubled ? 2u : 1u);
  const auto reds = reds_outside(h.back(), tpl.cells);
  EXPECT_EQ(reds.size(), p.reds_at_exit);
  for (const char* exit : p.exits) EXPECT_EQ(h.back().get(tpl.port(exit).cell), State::R) << exit;
}

INSTANTIATE_TEST_SUITE_P(
    Passages, Contract,
    testing::Values(Passage{StructureKind::vertical_track_down, "exvertd/simple", "in", false, {"out"}, 1},
                    Passage{StructureKind::vertical_track_up, "exvertm/simple", "in", false, {"out"}, 1},
                    Passage{StructureKind::fixed_switch, "exfixs/from-left", "in_left", false, {"out"}, 1},
                    Passage{StructureKind::fixed_switch, "exfixs/from-right", "in_right", false, {"out"}, 1},
                    Passage{StructureKind::doubler, "exdoubl", "in", false, {"out"}, 2},
                    Passage{StructureKind::selector, "exsels", "in", false, {"right"}, 1},
                    Passage{StructureKind::selector, "exseld", "in", true, {"onward"}, 1},
                    Passage{StructureKind::fork, "exfork", "in", false, {"out_1", "out_2"}, 2},
                    Passage{StructureKind::controller_blue, "excontrol/blue", "in", false, {"out"}, 1},
                    Passage{StructureKind::sensor_blue, "exctrlblue/passes", "in", false, {"out"}, 1},
                    Passage{StructureKind::sensor_red, "exctrlred", "in", false, {"out", "signal_out"}, 2}),
    [](const auto& info) {
      std::string name = info.param.fixture;
      std::replace(name.begin(), name.end(), '/', '_');
      std::replace(name.begin(), name.end(), '-', '_');
      return name;
    });

TEST(Contracts, DoublerExitIsContiguous) {
  const auto tpl = build_structure(StructureKind::doubler);
  const int when = oracle::arrival_from_fixture(data::fixtures("exdoubl").front(), tpl.port("out"), rules());
  const auto reds = reds_outside(oracle::history(rules(), with_locomotive(tpl, "in"), when).back(), tpl.cells);
  ASSERT_EQ(reds.size(), 2u);
  EXPECT_TRUE(side_adjacent(reds[0], reds[1]));
}

TEST(Contracts, ForkEmitsTwoSeparateLocomotives) {
  const auto tpl = build_structure(StructureKind::fork);
  const int when = oracle::arrival_from_fixture(data::fixtures("exfork").front(), tpl.port("out_1"), rules());
  const auto reds = reds_outside(oracle::history(rules(), with_locomotive(tpl, "in"), when).back(), tpl.cells);
  ASSERT_EQ(reds.size(), 2u);
  EXPECT_FALSE(side_adjacent(reds[0], reds[1]));
  EXPECT_NE(tpl.port("out_1").cell, tpl.port("out_2").cell);
}

TEST(Contracts, SelectorSimpleNeverOnward) {
  const auto tpl = build_structure(StructureKind::selector);
  for (const auto& c : oracle::history(rules(), with_locomotive(tpl, "in"), 12)) EXPECT_EQ(c.get(tpl.port("onward").cell), State::W);
}

TEST(Contracts, RedControllerStopsLocomotive) {
  const auto tpl = build_structure(StructureKind::controller_red);
  const auto h = oracle::history(rules(), with_locomotive(tpl, "in"), 20);
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_EQ(h[k].get(tpl.port("out").cell), State::W) << k;
  EXPECT_TRUE(reds_outside(h.back(), tpl.cells).empty());
  EXPECT_EQ(h.back(), tpl.cells);
}

struct Flip {
  StructureKind kind;
  const char* fixture;
  const char* port;
  const char* cell;
};

class ColourChange : public testing::TestWithParam<Flip> {};

TEST_P(ColourChange, MatchesFixture) {
  const Flip& f = GetParam();
  const auto tpl = build_structure(f.kind);
  const auto flip = oracle::flip_from_fixture(data::fixtures(f.fixture).front(), L(f.cell), rules());
  ASSERT_GT(flip.step, 0);
  ASSERT_NE(flip.before, flip.after);
  const auto h = oracle::history(rules(), with_locomotive(tpl, f.port), flip.step);
  for (int k = 0; k < flip.step; ++k) EXPECT_EQ(h[k].get(L(f.cell)), flip.before) << k;
  EXPECT_EQ(h.back().get(L(f.cell)), flip.after);
}

INSTANTIATE_TEST_SUITE_P(
    Signals, ColourChange,
    testing::Values(Flip{StructureKind::controller_blue, "excontrols/blue-to-red", "signal_in", "1(1)"},
                    Flip{StructureKind::controller_red, "excontrols/red-to-blue", "signal_in", "1(1)"},
                    Flip{StructureKind::sensor_blue, "exctrlblue/blue-to-red", "signal_in", "1(2)"},
                    Flip{StructureKind::sensor_red, "exctrlred", "in", "1(2)"}),
    [](const auto& info) { return to_string(info.param.kind); });

TEST(Contracts, SensorAndControllerColoursComplement) {
  const auto blue = build_structure(StructureKind::controller_blue).cells;
  const auto red = build_structure(StructureKind::controller_red).cells;
  const auto d = diff(blue, red);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].cell, L("1(1)"));
}

// The half-turn exchanging 0(0) and 1(1) carries the going-down track onto
// the other side of its line; the same rules must drive it.
TEST(Contracts, TrackSideSymmetry) {
  const auto m = expand_map(10);
  const auto tpl = build_structure(StructureKind::vertical_track_down);
  EXPECT_EQ(place_tile(TileRef::centre(), *m, L("1(1)"), 0), L("1(1)"));
  EXPECT_EQ(place_tile(L("1(1)"), *m, L("1(1)"), 0), TileRef::centre());
  const auto mirrored = place(tpl, *m, L("1(1)"), 0);
  EXPECT_NE(mirrored.cells, tpl.cells);

  const auto fx = data::fixtures("exvertd/simple").front();
  std::set<TileRef> watched, image;
  std::map<TileRef, TileRef> to_image;
  for (TileRef c : fx.cells) {
    watched.insert(c);
    to_image[c] = place_tile(c, *m, L("1(1)"), 0);
    image.insert(to_image[c]);
  }
  const auto a = run(*m, rules(), with_locomotive(tpl, "in"), fx.steps(), watched).trace;
  const auto b = run(*m, rules(), with_locomotive(mirrored, "in"), fx.steps(), image).trace;
  EXPECT_TRUE(check_trace(a, fx).pass());
  ASSERT_EQ(a.events.size(), b.events.size());
  std::map<std::pair<int, TileRef>, int> got;
  for (const auto& e : b.events) got[{e.time, e.cell}] = e.rule_id;
  for (const auto& e : a.events) EXPECT_EQ((got[{e.time, to_image[e.cell]}]), e.rule_id) << e.cell << " t" << e.time;
}
