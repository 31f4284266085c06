#include <algorithm>
#include <map>
#include <set>

#include "pentaca/data.hpp"
#include "pentaca/error.hpp"
#include "pentaca/structures.hpp"

namespace pentaca {

namespace {

struct RunSpec {
  const char* fixture;
  const char* entry;  // port the locomotive starts on
  bool doubled;       // shares the entry of an earlier simple run, adds `<entry>_pair`
  std::vector<const char*> exits;  // names for the last occupied cells, by label order
};

struct Recipe {
  std::vector<RunSpec> runs;
  bool symmetric = false;  // union of the five sector rotations
  const char* borrow_from = nullptr;  // variant whose `out` port is reused
};

Recipe recipe(StructureKind kind, bool clockwise) {
  switch (kind) {
    case StructureKind::track_element:
    case StructureKind::vertical_track_down:
      return {{{"exvertd/simple", "in", false, {"out"}}, {"exvertd/double", "in", true, {}}}};
    case StructureKind::vertical_track_up:
      return {{{"exvertm/simple", "in", false, {"out"}}, {"exvertm/double", "in", true, {}}}};
    case StructureKind::ring1:
      if (clockwise) return {{{"exrond1h/simple", "in", false, {}}, {"exrond1h/double", "in", true, {}}}, true};
      return {{{"exrond1ah/simple", "in", false, {}}, {"exrond1ah/double", "in", true, {}}}, true};
    case StructureKind::ring2:
      if (clockwise) return {{{"exrond2hs", "in", false, {"out"}}, {"exrond2hd", "in", true, {}}}};
      return {{{"exrond2ahs", "in", false, {"out"}}, {"exrond2ahd", "in", true, {}}}};
    case StructureKind::ring3:
      if (clockwise) throw UsageError("no clockwise three-cell ring template is available");
      return {{{"exrond3ahs", "in", false, {"out"}}, {"exrond3ahd", "in", true, {}}}};
    case StructureKind::fixed_switch:
      return {{{"exfixs/from-left", "in_left", false, {"out"}},
               {"exfixs/from-right", "in_right", false, {}},
               {"exfixd/from-left", "in_left", true, {}},
               {"exfixd/from-right", "in_right", true, {}}}};
    case StructureKind::doubler:
      return {{{"exdoubl", "in", false, {"out"}}}};
    case StructureKind::selector:
      return {{{"exsels", "in", false, {"right"}}, {"exseld", "in", true, {"onward"}}}};
    case StructureKind::fork:
      return {{{"exfork", "in", false, {"out_1", "out_2"}}}};
    case StructureKind::controller_blue:
      return {{{"excontrol/blue", "in", false, {"out"}}, {"excontrols/blue-to-red", "signal_in", false, {}}}};
    case StructureKind::controller_red:
      return {{{"excontrol/red", "in", false, {}}, {"excontrols/red-to-blue", "signal_in", false, {}}},
              false,
              "controller_blue"};
    case StructureKind::sensor_blue:
      return {{{"exctrlblue/passes", "in", false, {"out"}}, {"exctrlblue/blue-to-red", "signal_in", false, {}}}};
    case StructureKind::sensor_red:
      return {{{"exctrlred", "in", false, {"out", "signal_out"}}}};
  }
  throw UsageError("unknown structure");
}

// 1-based Moore position of `to` around `from`, 0 if not adjacent.
int moore_index(TileRef from, TileRef to) {
  auto map = map_covering({from, to});
  const auto& m = map->moore_checked(map->id(from));
  const int target = map->id(to);
  for (int k = 0; k < 10; ++k) {
    if (m[k] == target) return k + 1;
  }
  return 0;
}

bool idle_fixed_point(const RuleTable& table, const Configuration& c) {
  Configuration cur = c;
  for (int k = 0; k < 20; ++k) {
    try {
      cur = run_auto(table, cur, 1).config;
    } catch (const NoRuleError&) {
      return false;
    }
    if (!(cur == c)) return false;
  }
  return true;
}

// Removes the fewest R cells of `pattern` so that the rest is idle.
Configuration strip_locomotives(const RuleTable& table, const Configuration& pattern, const std::string& name) {
  std::vector<TileRef> reds;
  for (const auto& [t, s] : pattern.cells()) {
    if (s == State::R) reds.push_back(t);
  }
  const int n = static_cast<int>(reds.size());
  for (int size = 0; size <= n; ++size) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
      Configuration c = pattern;
      for (int i = 0; i < n; ++i) {
        if (pick[i]) c.set(reds[i], State::W);
      }
      if (idle_fixed_point(table, c)) return c;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw InferenceError(name + ": no idle structure remains after removing R cells");
}

// R cells of `c` that are not R in the template.
std::vector<TileRef> locomotive_cells(const Configuration& c, const Configuration& tpl) {
  std::vector<TileRef> out;
  for (const auto& [t, s] : c.cells()) {
    if (s == State::R && tpl.get(t) != State::R) out.push_back(t);
  }
  return out;
}

void add_port(std::vector<Port>& ports, const std::string& name, TileRef cell, TileRef toward) {
  for (const Port& p : ports) {
    if (p.name == name) {
      if (p.cell != cell) throw InferenceError("port " + name + " derived at two cells");
      return;
    }
  }
  const int k = moore_index(cell, toward);
  if (k == 0) throw InferenceError("port " + name + ": " + format_label(toward) + " is not adjacent");
  ports.push_back({name, cell, k});
}

constexpr int kExitHorizon = 40;

}  // namespace

DerivedStructure derive_structure(StructureKind kind, const StructureParams& params, const RuleTable& table) {
  const Recipe rec = recipe(kind, params.clockwise);
  const std::string name = template_name(kind, params);

  std::vector<TraceFixture> fixtures;
  DerivedStructure out;
  for (const RunSpec& run : rec.runs) {
    fixtures.push_back(data::fixtures(run.fixture).front());
    out.sources.push_back(fixtures.back().name);
  }
  const auto inferred = infer_shared_structure(fixtures, table);
  out.radius = inferred.front().report.radius;
  out.defaulted = inferred.front().report.defaulted.size();

  Configuration cells = strip_locomotives(table, inferred.front().pattern, name);
  for (const auto& inf : inferred) {
    for (const auto& [t, s] : cells.cells()) {
      if (inf.pattern.get(t) != s) throw InferenceError(name + ": runs disagree on " + format_label(t));
    }
  }
  if (rec.symmetric) {
    Configuration sym;
    for (int r = 0; r < 5; ++r) {
      const Configuration rot = cells.rotated(r);
      for (const auto& [t, s] : rot.cells()) {
        if (sym.get(t) != State::W && sym.get(t) != s) {
          throw InferenceError(name + ": rotations disagree on " + format_label(t));
        }
        sym.set(t, s);
      }
    }
    cells = sym;
    if (!idle_fixed_point(table, cells)) throw InferenceError(name + ": symmetric pattern is not idle");
  }

  std::vector<Port> ports;
  std::vector<Configuration> starts;
  for (std::size_t i = 0; i < rec.runs.size(); ++i) {
    const RunSpec& run = rec.runs[i];
    const Configuration& pattern = inferred[i].pattern;
    Configuration start = cells;
    for (TileRef t : locomotive_cells(pattern, cells)) start.set(t, State::R);
    starts.push_back(start);

    const auto loco0 = locomotive_cells(start, cells);
    const auto next = run_auto(table, start, 1).config;
    const auto loco1 = locomotive_cells(next, cells);
    if (!run.doubled) {
      if (loco0.size() != 1 || loco1.empty()) throw InferenceError(name + ": " + run.fixture + " has no single locomotive");
      TileRef ahead = loco1.front();
      for (TileRef t : loco1) {
        if (moore_index(loco0.front(), t) != 0) ahead = t;
      }
      add_port(ports, run.entry, loco0.front(), ahead);
    } else {
      const Port* entry = nullptr;
      for (const Port& p : ports) {
        if (p.name == run.entry) entry = &p;
      }
      if (!entry || loco0.size() != 2 || std::find(loco0.begin(), loco0.end(), entry->cell) == loco0.end()) {
        throw InferenceError(name + ": " + run.fixture + " does not start on port " + run.entry);
      }
      TileRef other = loco0[0] == entry->cell ? loco0[1] : loco0[0];
      TileRef entry_cell = entry->cell;
      add_port(ports, std::string(run.entry) + "_pair", other, entry_cell);
    }

    if (!run.exits.empty()) {
      Configuration c = start;
      std::vector<std::vector<TileRef>> history;
      for (int k = 0; k < kExitHorizon; ++k) {
        auto loco = locomotive_cells(c, cells);
        if (loco.empty()) break;
        history.push_back(loco);
        c = run_auto(table, c, 1).config;
      }
      if (history.size() < 2 || history.back().size() != run.exits.size()) {
        throw InferenceError(name + ": " + run.fixture + " does not leave by " + std::to_string(run.exits.size()) +
                             " exits");
      }
      const auto& final_cells = history.back();
      const auto& earlier = history[history.size() - 2];
      for (std::size_t e = 0; e < final_cells.size(); ++e) {
        std::vector<TileRef> from;
        for (TileRef t : earlier) {
          if (moore_index(final_cells[e], t) != 0) from.push_back(t);
        }
        if (from.size() != 1) {
          throw InferenceError(name + ": exit " + run.exits[e] + " has no unique predecessor");
        }
        add_port(ports, run.exits[e], final_cells[e], from.front());
      }
    }
  }

  if (rec.borrow_from) {
    const auto donor = derive_structure(structure_kind_from_string(rec.borrow_from), {}, table);
    const Port& p = donor.tpl.port("out");
    if (cells.get(p.cell) != State::W) throw InferenceError(name + ": borrowed port lies on a structure cell");
    ports.push_back(p);
  }

  for (std::size_t i = 0; i < rec.runs.size(); ++i) {
    const TraceFixture& fx = fixtures[i];
    const std::set<TileRef> watched(fx.cells.begin(), fx.cells.end());
    const auto res = run_auto(table, starts[i], fx.steps(), watched, fx.start_time);
    if (!check_trace(res.trace, fx).pass()) {
      throw InferenceError(name + ": " + fx.name + " does not replay from the template");
    }
  }

  out.tpl.name = name;
  out.tpl.cells = cells;
  out.tpl.ports = ports;
  return out;
}

}  // namespace pentaca
