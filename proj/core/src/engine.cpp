#include "pentaca/engine.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "pentaca/error.hpp"

namespace pentaca {

void Configuration::set(TileRef t, State s) {
  if (s == State::W) {
    cells_.erase(t);
  } else {
    cells_[t] = s;
  }
}

Configuration Configuration::rotated(int r) const {
  Configuration out;
  for (const auto& [t, s] : cells_) out.set(rotate_tile(t, r), s);
  return out;
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  out << "time\tcell_label\trule_id\tnew_state\n";
  for (const auto& e : trace.events) {
    out << e.time << '\t' << format_label(e.cell) << '\t' << e.rule_id << '\t' << to_char(e.new_state) << '\n';
  }
  return out.str();
}

std::vector<CellDiff> diff(const Configuration& a, const Configuration& b) {
  std::vector<CellDiff> out;
  auto ia = a.cells().begin(), ea = a.cells().end();
  auto ib = b.cells().begin(), eb = b.cells().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.push_back({ia->first, ia->second, State::W});
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      out.push_back({ib->first, State::W, ib->second});
      ++ib;
    } else {
      if (ia->second != ib->second) out.push_back({ia->first, ia->second, ib->second});
      ++ia;
      ++ib;
    }
  }
  return out;
}

namespace {

[[noreturn]] void too_shallow(const Pentagrid& map, TileRef t) {
  throw MapTooShallow("cell " + format_label(t) + " reaches the frontier of the map of depth " +
                      std::to_string(map.depth()));
}

int checked_id(const Pentagrid& map, TileRef t) {
  int i = map.find(t);
  if (i < 0 || !map.moore_complete(i)) too_shallow(map, t);
  return i;
}

}  // namespace

std::vector<TileRef> active_set(const Configuration& config, const Pentagrid& map) {
  std::vector<int> ids;
  for (const auto& [t, s] : config.cells()) {
    int i = checked_id(map, t);
    ids.push_back(i);
    for (int n : map.moore(i)) ids.push_back(n);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<TileRef> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(map.tile(i));
  return out;
}

RuleWord neighborhood_word(const Configuration& config, const Pentagrid& map, TileRef t) {
  const auto& m = map.moore(checked_id(map, t));
  RuleWord w;
  for (int k = 0; k < 10; ++k) w[k] = config.get(map.tile(m[k]));
  return w;
}

StepResult step(const Pentagrid& map, const RuleTable& table, const Configuration& config,
                const std::set<TileRef>* watched, int time) {
  std::unordered_map<int, State> state;
  std::vector<int> eval;
  for (const auto& [t, s] : config.cells()) {
    int i = checked_id(map, t);
    state.emplace(i, s);
    eval.push_back(i);
    for (int n : map.moore(i)) eval.push_back(n);
  }
  if (watched) {
    for (TileRef t : *watched) eval.push_back(map.id(t));
  }
  std::sort(eval.begin(), eval.end());
  eval.erase(std::unique(eval.begin(), eval.end()), eval.end());

  auto read = [&](int i) {
    auto it = state.find(i);
    return it == state.end() ? State::W : it->second;
  };

  StepResult out;
  for (int i : eval) {
    TileRef t = map.tile(i);
    if (!map.moore_complete(i)) too_shallow(map, t);
    const auto& m = map.moore(i);
    RuleWord w;
    for (int k = 0; k < 10; ++k) w[k] = read(m[k]);
    State cur = read(i);
    auto hit = table.match(cur, encode_word(w));
    if (!hit) {
      auto key = canonical_key(cur, w);
      throw NoRuleError("time " + std::to_string(time) + ", cell " + format_label(t) + ": no rule for " +
                        to_char(cur) + " " + format_word(w) + " (canonical " + format_word(key.word) + ")");
    }
    const Rule& rule = table.rules()[*hit];
    out.config.set(t, rule.next);
    if (!watched || watched->count(t)) out.events.push_back({time, t, rule.id, rule.next});
  }
  return out;
}

RunResult run(const Pentagrid& map, const RuleTable& table, const Configuration& config, int steps,
              const std::optional<std::set<TileRef>>& watched, int start_time) {
  RunResult out{config, Trace{{}, watched}};
  for (int k = 0; k < steps; ++k) {
    auto r = step(map, table, out.config, watched ? &*watched : nullptr, start_time + k);
    out.config = std::move(r.config);
    out.trace.events.insert(out.trace.events.end(), r.events.begin(), r.events.end());
  }
  return out;
}

std::shared_ptr<const Pentagrid> map_covering(const std::vector<TileRef>& tiles) {
  const int cap = Pentagrid::max_depth();
  int depth = 3;
  while (true) {
    if (depth > cap) {
      throw MapTooShallow("pattern needs a map deeper than the cap " + std::to_string(cap));
    }
    auto map = expand_map(depth);
    int need = depth;
    for (TileRef t : tiles) {
      int i = map->find(t);
      if (i < 0) {
        need = depth + 1;
        break;
      }
      need = std::max(need, map->generation(i) + 3);
    }
    if (need <= depth) return map;
    depth = need;
  }
}

RunResult run_auto(const RuleTable& table, const Configuration& config, int steps,
                   const std::optional<std::set<TileRef>>& watched, int start_time) {
  RunResult out{config, Trace{{}, watched}};
  std::shared_ptr<const Pentagrid> map;
  for (int k = 0; k < steps; ++k) {
    std::vector<TileRef> touched;
    for (const auto& [t, s] : out.config.cells()) touched.push_back(t);
    if (watched) touched.insert(touched.end(), watched->begin(), watched->end());
    auto fits = [&] {
      if (!map) return false;
      for (TileRef t : touched) {
        int i = map->find(t);
        if (i < 0 || map->generation(i) + 3 > map->depth()) return false;
      }
      return true;
    };
    if (!fits()) map = map_covering(touched);
    auto r = step(*map, table, out.config, watched ? &*watched : nullptr, start_time + k);
    out.config = std::move(r.config);
    out.trace.events.insert(out.trace.events.end(), r.events.begin(), r.events.end());
  }
  return out;
}

}  // namespace pentaca
