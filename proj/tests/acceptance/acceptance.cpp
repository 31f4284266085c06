// Acceptance program: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <exception>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pentaca/data.hpp"
#include "pentaca/engine.hpp"
#include "pentaca/pentagrid.hpp"
#include "pentaca/render.hpp"
#include "pentaca/rules.hpp"
#include "pentaca/structures.hpp"
#include "pentaca/verify.hpp"
#include "support/oracles.hpp"

using namespace pentaca;

namespace {

// Collects the first few failures of a criterion.
class Findings {
 public:
  void fail(const std::string& what) {
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  void note(std::string detail) { detail_ = std::move(detail); }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    if (ok()) return detail_;
    std::ostringstream s;
    s << count_ << " failure(s): ";
    for (std::size_t i = 0; i < failures_.size(); ++i) s << (i ? "; " : "") << failures_[i];
    return s.str();
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
  std::string detail_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << " s";
  return o.str();
}

std::string label(TileRef t) {
  std::ostringstream o;
  o << t;
  return o.str();
}

const RuleTable& rules() { return data::rules(); }

void rule_set_validation(Findings& f) {
  const auto start = Clock::now();
  const RuleTable table = parse_rules(data::rules_text());
  const auto conflicts = validate(table);
  const double took = seconds_since(start);
  f.expect(table.rules().size() == 352, "expected 352 rules, got " + std::to_string(table.rules().size()));
  for (const auto& c : conflicts) f.fail("rules " + std::to_string(c.first_id) + " and " + std::to_string(c.second_id));
  f.expect(took < 1.0, "took " + fmt_seconds(took));
  f.note(std::to_string(table.rules().size()) + " rules, 0 conflicts, " + fmt_seconds(took));
}

void fixture_replay(Findings& f) {
  const auto start = Clock::now();
  std::size_t blocks = 0;
  for (const auto& name : data::fixture_tables()) {
    for (const auto& fx : data::fixtures(name)) {
      ++blocks;
      try {
        const auto inf = infer_initial_pattern(fx, rules());
        const std::set<TileRef> watched(fx.cells.begin(), fx.cells.end());
        const auto trace = run_auto(rules(), inf.pattern, fx.steps(), watched, fx.start_time).trace;
        const auto report = check_trace(trace, fx);
        for (const auto& m : report.mismatches) {
          f.fail(fx.name + " " + label(m.cell) + " t" + std::to_string(m.time) + ": expected " +
                 std::to_string(m.expected) + ", got " + std::to_string(m.got));
        }
      } catch (const std::exception& e) {
        f.fail(fx.name + ": " + e.what());
      }
    }
  }
  const double took = seconds_since(start);
  f.expect(data::fixture_tables().size() == 20, "expected 20 tables");

  // Two rows written out in full, replayed independently of the fixture grid.
  auto row = [&](const char* table, const char* cell, const std::vector<int>& expected) {
    const auto fx = data::fixtures(table).front();
    const TileRef t = parse_label(cell);
    const auto inf = infer_initial_pattern(fx, rules());
    const auto trace = run_auto(rules(), inf.pattern, fx.steps(), std::set<TileRef>{t}, fx.start_time).trace;
    std::vector<int> got;
    for (const auto& e : trace.events) got.push_back(e.rule_id);
    f.expect(got == expected, std::string(table) + " row " + cell + " differs");
  };
  row("exdoubl", "0(0)", {143, 153, 157, 162, 169, 173});
  row("exseld", "2(4)", {187, 198, 227, 237, 187, 187});

  f.expect(took < 5.0, "took " + fmt_seconds(took));
  f.note(std::to_string(data::fixture_tables().size()) + " tables, " + std::to_string(blocks) +
         " runs, 0 mismatches, " + fmt_seconds(took));
}

void rotation_anchor(Findings& f) {
  const Rule* r17 = rules().find(17);
  const Rule* r18 = rules().find(18);
  if (!r17 || !r18) return f.fail("rule 17 or 18 missing");
  const RuleWord turned = rotate_word(r17->word, 2);
  int w_to_r = 0, other = 0;
  for (int i = 0; i < 10; ++i) {
    if (turned[i] == r18->word[i]) continue;
    if (turned[i] == State::W && r18->word[i] == State::R) {
      ++w_to_r;
    } else {
      ++other;
    }
  }
  f.expect(w_to_r == 1 && other == 0,
           format_word(turned) + " vs " + format_word(r18->word) + " is not a single W to R substitution");
  f.note(format_word(r17->word) + " turned by 2 = " + format_word(turned) + ", rule 18 = " + format_word(r18->word));
}

void idle_fixed_points(Findings& f) {
  const auto variants = structure_variants();
  for (const auto& [kind, params] : variants) {
    const auto tpl = build_structure(kind, params);
    const auto h = oracle::history(rules(), tpl.cells, 20);
    for (std::size_t k = 1; k < h.size(); ++k) {
      if (h[k] != tpl.cells) {
        f.fail(tpl.name + " changes at step " + std::to_string(k));
        break;
      }
    }
  }
  f.note(std::to_string(variants.size()) + " templates unchanged for 20 steps");
}

void quiescent_closure(Findings& f) {
  const auto m = expand_map(3);
  const auto r = run(*m, rules(), Configuration{}, 100);
  f.expect(r.config.empty(), "support appeared");
  f.note("empty after 100 steps");
}

void geometry(Findings& f) {
  const auto start = Clock::now();
  const auto m = expand_map(6);
  std::size_t checked = 0, vertices = 0;
  for (int id = 0; id < static_cast<int>(m->size()); ++id) {
    // Tiles of the last generation border the unexpanded ring.
    if (m->generation(id) >= m->depth()) continue;
    ++checked;
    if (!m->moore_complete(id)) {
      f.fail(label(m->tile(id)) + " has an incomplete neighbourhood");
      continue;
    }
    const auto& n = m->moore(id);
    const std::set<int> distinct(n.begin(), n.end());
    f.expect(distinct.size() == 10 && !distinct.count(id), label(m->tile(id)) + " neighbours not distinct");
    for (int s = 0; s < 5; ++s) {
      ++vertices;
      f.expect(oracle::vertex_walk(*m, id, s).size() == 4,
               label(m->tile(id)) + " vertex " + std::to_string(s + 1) + " is not shared by 4 tiles");
    }
  }
  const auto expected = oracle::substitution_levels(5);
  f.expect((expected == std::vector<std::size_t>{1, 3, 8, 21, 55}), "substitution oracle disagrees");
  for (int s = 1; s <= 5; ++s) {
    for (int d = 0; d < 5; ++d) {
      f.expect(m->sector_level_size(s, d) == expected[static_cast<std::size_t>(d)],
               "sector " + std::to_string(s) + " level " + std::to_string(d));
    }
  }
  for (int s = 1; s <= 5; ++s) {
    for (const auto& chain : {std::vector<int>{1, 2, 5, 13}, std::vector<int>{2, 7, 20}}) {
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const TileRef a{s, chain[i]}, b{s, chain[i + 1]};
        bool adjacent = false;
        for (int k = 1; k <= 5; ++k) adjacent = adjacent || m->side_neighbor(a, k) == b;
        f.expect(adjacent, label(a) + " and " + label(b) + " do not share a side");
      }
    }
  }
  const double took = seconds_since(start);
  f.expect(took < 2.0, "took " + fmt_seconds(took));
  f.note(std::to_string(checked) + " tiles, " + std::to_string(vertices) + " vertices, levels 1,3,8,21,55, " +
         fmt_seconds(took));
}

void behavioural_contracts(Findings& f) {
  struct Passage {
    StructureKind kind;
    const char* fixture;
    const char* entry;
    bool doubled;
    std::vector<const char*> exits;
    std::size_t reds_at_exit;
  };
  const std::vector<Passage> passages{
      {StructureKind::doubler, "exdoubl", "in", false, {"out"}, 2},
      {StructureKind::fork, "exfork", "in", false, {"out_1", "out_2"}, 2},
      {StructureKind::selector, "exsels", "in", false, {"right"}, 1},
      {StructureKind::selector, "exseld", "in", true, {"onward"}, 1},
      {StructureKind::sensor_blue, "exctrlblue/passes", "in", false, {"out"}, 1},
      {StructureKind::sensor_red, "exctrlred", "in", false, {"out", "signal_out"}, 2},
  };
  for (const auto& p : passages) {
    const auto tpl = build_structure(p.kind);
    const auto fx = data::fixtures(p.fixture).front();
    const std::string name = std::string(p.fixture);
    int when = -1;
    for (const char* exit : p.exits) {
      const int k = oracle::arrival_from_fixture(fx, tpl.port(exit), rules());
      if (k < 0 || (when >= 0 && k != when)) f.fail(name + ": no fixture arrival step for " + exit);
      when = std::max(when, k);
    }
    if (when < 0) continue;
    const auto h = oracle::history(rules(), with_locomotive(tpl, p.entry, p.doubled), when);
    const auto reds = oracle::reds_outside(h.back(), tpl.cells);
    f.expect(reds.size() == p.reds_at_exit, name + ": " + std::to_string(reds.size()) + " red cells at step " +
                                                std::to_string(when));
    for (const char* exit : p.exits) {
      f.expect(h.back().get(tpl.port(exit).cell) == State::R, name + ": port " + exit + " not red at step " +
                                                                  std::to_string(when));
    }
    if (p.kind == StructureKind::doubler && reds.size() == 2) {
      f.expect(oracle::side_adjacent(reds[0], reds[1]), "doubler output is not contiguous");
    }
    if (p.kind == StructureKind::fork && reds.size() == 2) {
      f.expect(!oracle::side_adjacent(reds[0], reds[1]), "fork output is one double locomotive");
    }
  }

  {
    const auto tpl = build_structure(StructureKind::selector);
    for (const auto& c : oracle::history(rules(), with_locomotive(tpl, "in"), 12)) {
      f.expect(c.get(tpl.port("onward").cell) == State::W, "selector sends a simple locomotive onward");
    }
  }
  {
    const auto tpl = build_structure(StructureKind::controller_red);
    const auto h = oracle::history(rules(), with_locomotive(tpl, "in"), 20);
    for (std::size_t k = 0; k < h.size(); ++k) {
      f.expect(h[k].get(tpl.port("out").cell) == State::W, "red controller output red at step " + std::to_string(k));
    }
    f.expect(oracle::reds_outside(h.back(), tpl.cells).empty(), "red controller leaves a locomotive alive");
  }

  struct Flip {
    StructureKind kind;
    const char* fixture;
    const char* port;
    const char* cell;
  };
  for (const Flip& fl : {Flip{StructureKind::sensor_blue, "exctrlblue/blue-to-red", "signal_in", "1(2)"},
                         Flip{StructureKind::sensor_red, "exctrlred", "in", "1(2)"}}) {
    const auto tpl = build_structure(fl.kind);
    const TileRef cell = parse_label(fl.cell);
    const auto flip = oracle::flip_from_fixture(data::fixtures(fl.fixture).front(), cell, rules());
    if (flip.step <= 0) {
      f.fail(std::string(fl.fixture) + ": no colour change in the fixture");
      continue;
    }
    const auto h = oracle::history(rules(), with_locomotive(tpl, fl.port), flip.step);
    for (int k = 0; k < flip.step; ++k) {
      f.expect(h[static_cast<std::size_t>(k)].get(cell) == flip.before,
               std::string(fl.fixture) + ": colour changes early at step " + std::to_string(k));
    }
    f.expect(h.back().get(cell) == flip.after,
             std::string(fl.fixture) + ": no colour change at step " + std::to_string(flip.step));
  }
  f.note("doubler, fork, selector, red controller and sensor flips hold");
}

void equivariance(Findings& f) {
  const auto m = expand_map(9);
  constexpr int kSteps = 8;
  const auto variants = structure_variants();
  for (const auto& [kind, params] : variants) {
    const auto tpl = build_structure(kind, params);
    const Configuration start = with_locomotive(tpl, tpl.ports.front().name);
    const auto base = run(*m, rules(), start, kSteps);
    for (int r = 0; r < 5; ++r) {
      const Configuration placed = place(start, *m, TileRef::centre(), r);
      const auto turned = run(*m, rules(), placed, kSteps);
      std::vector<TraceEvent> relabelled;
      for (auto e : base.trace.events) {
        e.cell = rotate_tile(e.cell, r);
        relabelled.push_back(e);
      }
      std::sort(relabelled.begin(), relabelled.end(),
                [](const auto& a, const auto& b) { return std::tie(a.time, a.cell) < std::tie(b.time, b.cell); });
      f.expect(turned.trace.events == relabelled && turned.config == base.config.rotated(r),
               tpl.name + " rotation " + std::to_string(r));
    }
  }
  f.note(std::to_string(variants.size()) + " templates x 5 rotations, " + std::to_string(kSteps) + " steps");
}

void renderer(Findings& f) {
  const auto a = render_svg({}, layout(*expand_map(4), 4));
  const auto b = render_svg({}, layout(*expand_map(4), 4));
  std::size_t sector = 0;
  for (std::size_t n : oracle::substitution_levels(4)) sector += n;
  const std::size_t polygons = oracle::count_polygons(a);
  f.expect(a == b, "output differs between runs");
  f.expect(a.rfind("<?xml", 0) == 0 && oracle::balanced_tags(a), "not well-formed");
  f.expect(polygons == 1 + 5 * sector, std::to_string(polygons) + " polygons");
  f.note(std::to_string(polygons) + " polygons, " + std::to_string(a.size()) + " bytes, stable");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Findings&)>>> criteria{
      {"rule-set validation", rule_set_validation},
      {"fixture replay", fixture_replay},
      {"rotation anchor", rotation_anchor},
      {"idle fixed points", idle_fixed_points},
      {"quiescent closure", quiescent_closure},
      {"geometry invariants", geometry},
      {"behavioural contracts", behavioural_contracts},
      {"rotation equivariance", equivariance},
      {"renderer", renderer},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Findings f;
    try {
      criteria[i].second(f);
    } catch (const std::exception& e) {
      f.fail(std::string("exception: ") + e.what());
    }
    failed += !f.ok();
    std::cout << (f.ok() ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << f.summary()
              << '\n';
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
