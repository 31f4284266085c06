#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <set>

#include "pentaca/error.hpp"
#include "pentaca/structures.hpp"

namespace pentaca {

namespace {

using Domain = std::uint8_t;  // bit s set when state s is possible
constexpr Domain kAll = 0b111;

Domain bit(State s) { return static_cast<Domain>(1u << static_cast<unsigned>(s)); }
int popcount(Domain d) { return (d & 1) + ((d >> 1) & 1) + ((d >> 2) & 1); }

// (current, ten neighbours, next), as state numbers.
using Tuple = std::array<std::uint8_t, 12>;

struct Constraint {
  std::array<int, 12> var{};  // 0 is the constant-W variable
  int rule_id = 0;            // 0 when any rule may apply
  bool link = false;          // var[0] and var[1] are both B or both not B
};

struct Entry {
  int row;
  int column;
};

class TupleIndex {
 public:
  explicit TupleIndex(const RuleTable& table) {
    for (const Rule& rule : table.rules()) {
      std::set<RuleWord> seen;
      auto& mine = by_rule_[rule.id];
      for (int r = 0; r < 5; ++r) {
        RuleWord w = rotate_word(rule.word, r);
        if (!seen.insert(w).second) continue;
        Tuple t;
        t[0] = static_cast<std::uint8_t>(rule.current);
        for (int k = 0; k < 10; ++k) t[1 + k] = static_cast<std::uint8_t>(w[k]);
        t[11] = static_cast<std::uint8_t>(rule.next);
        mine.push_back(t);
        by_io_[t[0] * 3 + t[11]].push_back(t);
      }
    }
  }

  const std::vector<Tuple>& of_rule(int id) const { return by_rule_.at(id); }
  const std::vector<Tuple>& of_io(int cur, int next) const { return by_io_[cur * 3 + next]; }

 private:
  std::map<int, std::vector<Tuple>> by_rule_;
  std::array<std::vector<Tuple>, 9> by_io_;
};

// Generalised arc consistency over space-time state variables, with a
// depth-first search on the first time slice.
class Solver {
 public:
  Solver(const TupleIndex& tuples, int vars) : tuples_(tuples), dom_(vars, kAll), uses_(vars) {
    dom_[0] = bit(State::W);
  }

  int add(const Constraint& c) {
    int id = static_cast<int>(cons_.size());
    cons_.push_back(c);
    std::set<int> distinct(c.var.begin(), c.var.end());
    for (int v : distinct) {
      if (v != 0) uses_[v].push_back(id);
    }
    return id;
  }

  std::vector<Domain>& domains() { return dom_; }

  // Revises the given constraints and everything they wake up.
  bool propagate(const std::vector<int>& seeds) {
    std::vector<char> queued(cons_.size(), 0);
    std::deque<int> queue;
    for (int c : seeds) {
      if (!queued[c]) {
        queued[c] = 1;
        queue.push_back(c);
      }
    }
    while (!queue.empty()) {
      int c = queue.front();
      queue.pop_front();
      queued[c] = 0;
      std::array<Domain, 12> support{};
      if (!revise(cons_[c], support)) return false;
      for (int k = 0; k < 12; ++k) {
        int v = cons_[c].var[k];
        if (v == 0) continue;
        Domain nd = dom_[v] & support[k];
        if (nd == dom_[v]) continue;
        dom_[v] = nd;
        if (nd == 0) return false;
        for (int o : uses_[v]) {
          if (o != c && !queued[o]) {
            queued[o] = 1;
            queue.push_back(o);
          }
        }
      }
    }
    return true;
  }

  bool propagate_all() {
    std::vector<int> all(cons_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return propagate(all);
  }

  // Assigns the branch variables in order of fewest remaining values, then
  // `priority`, trying W before B before R.
  bool search(const std::vector<int>& branch, const std::vector<int>& priority, std::vector<int>& defaulted) {
    int best = -1;
    for (int v : branch) {
      if (popcount(dom_[v]) <= 1) continue;
      if (best < 0 || popcount(dom_[v]) < popcount(dom_[best]) ||
          (popcount(dom_[v]) == popcount(dom_[best]) && priority[v] < priority[best])) {
        best = v;
      }
    }
    if (best < 0) return true;
    for (State s : {State::W, State::B, State::R}) {
      if (!(dom_[best] & bit(s))) continue;
      auto saved = dom_;
      dom_[best] = bit(s);
      if (propagate(uses_[best])) {
        std::size_t mark = defaulted.size();
        if (s == State::W) defaulted.push_back(best);
        if (search(branch, priority, defaulted)) return true;
        defaulted.resize(mark);
      }
      dom_ = std::move(saved);
    }
    return false;
  }

 private:
  bool revise(const Constraint& c, std::array<Domain, 12>& support) const {
    if (c.link) {
      constexpr Domain kB = 1u << static_cast<unsigned>(State::B);
      auto allowed = [](Domain other) {
        return static_cast<Domain>(((other & kB) ? kB : 0) | ((other & ~kB & kAll) ? (kAll & ~kB) : 0));
      };
      support.fill(kAll);
      support[0] = dom_[c.var[0]] & allowed(dom_[c.var[1]]);
      support[1] = dom_[c.var[1]] & allowed(dom_[c.var[0]]);
      return support[0] && support[1];
    }
    bool any = false;
    std::array<Domain, 12> dom;
    for (int k = 0; k < 12; ++k) dom[k] = dom_[c.var[k]];
    bool full = false;
    auto scan = [&](const std::vector<Tuple>& list) {
      for (const Tuple& t : list) {
        if (full) return;
        bool ok = true;
        for (int k = 0; k < 12 && ok; ++k) ok = (dom[k] >> t[k]) & 1;
        if (!ok) continue;
        any = true;
        full = true;
        for (int k = 0; k < 12; ++k) {
          support[k] |= static_cast<Domain>(1u << t[k]);
          full = full && support[k] == dom[k];
        }
      }
    };
    if (c.rule_id) {
      scan(tuples_.of_rule(c.rule_id));
    } else {
      for (int cur = 0; cur < 3; ++cur) {
        if (!((dom_[c.var[0]] >> cur) & 1)) continue;
        for (int next = 0; next < 3; ++next) {
          if ((dom_[c.var[11]] >> next) & 1) scan(tuples_.of_io(cur, next));
        }
      }
    }
    return any;
  }

  const TupleIndex& tuples_;
  std::vector<Domain> dom_;
  std::vector<std::vector<int>> uses_;
  std::vector<Constraint> cons_;
};

// Cells within `radius` Moore steps of the seeds, with their distance.
std::map<int, int> moore_ball(const Pentagrid& map, const std::vector<int>& seeds, int radius) {
  std::map<int, int> dist;
  std::deque<int> queue;
  for (int s : seeds) {
    if (dist.emplace(s, 0).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    if (dist[c] == radius) continue;
    for (int n : map.moore_checked(c)) {
      if (dist.emplace(n, dist[c] + 1).second) queue.push_back(n);
    }
  }
  return dist;
}

std::shared_ptr<const Pentagrid> map_for_radius(const std::vector<TileRef>& watched, int radius) {
  auto map = map_covering(watched);
  while (true) {
    std::vector<int> seeds;
    bool fits = true;
    for (TileRef t : watched) seeds.push_back(map->id(t));
    for (int s : seeds) fits = fits && map->generation(s) + 2 * (radius + 1) + 1 <= map->depth();
    if (fits) return map;
    int need = map->depth() + 1;
    for (int s : seeds) need = std::max(need, map->generation(s) + 2 * (radius + 1) + 1);
    if (need > Pentagrid::max_depth()) {
      throw MapTooShallow("inference region needs a map of depth " + std::to_string(need));
    }
    map = expand_map(need);
  }
}

struct Problem {
  std::shared_ptr<const Pentagrid> map;
  std::vector<int> region;          // map ids, solved for
  std::map<int, int> slot;          // map id -> region index
  std::map<int, int> distance;      // map id -> Moore distance to the watched cells
  std::vector<int> steps;           // per run
  std::vector<int> base;            // per run, first variable

  int var(std::size_t run, int cell, int t) const {
    auto it = slot.find(cell);
    if (it == slot.end()) return 0;
    return base[run] + it->second * (steps[run] + 1) + t;
  }
  int vars() const {
    return base.back() + static_cast<int>(region.size()) * (steps.back() + 1);
  }

  Constraint dynamics(std::size_t run, int cell, int t, int rule_id) const {
    Constraint c;
    c.var[0] = var(run, cell, t);
    const auto& m = map->moore_checked(cell);
    for (int k = 0; k < 10; ++k) c.var[1 + k] = var(run, m[k], t);
    c.var[11] = var(run, cell, t + 1);
    c.rule_id = rule_id;
    return c;
  }
};

Problem make_problem(const std::vector<TraceFixture>& fixtures, int radius) {
  Problem p;
  std::vector<TileRef> watched;
  for (const auto& fx : fixtures) watched.insert(watched.end(), fx.cells.begin(), fx.cells.end());
  p.map = map_for_radius(watched, radius);
  std::vector<int> seeds;
  for (TileRef t : watched) seeds.push_back(p.map->id(t));
  p.distance = moore_ball(*p.map, seeds, radius + 1);
  for (const auto& [cell, d] : p.distance) {
    if (d <= radius) {
      p.slot[cell] = static_cast<int>(p.region.size());
      p.region.push_back(cell);
    }
  }
  int next = 1;
  for (const auto& fx : fixtures) {
    p.steps.push_back(fx.steps());
    p.base.push_back(next);
    next += static_cast<int>(p.region.size()) * (fx.steps() + 1);
  }
  return p;
}

std::string describe(const TraceFixture& fixture, const Entry& e) {
  return format_label(fixture.cells[e.row]) + " at time " + std::to_string(fixture.start_time + e.column) +
         " (rule " + std::to_string(fixture.grid[e.row][e.column]) + ")";
}

bool entries_consistent(const TupleIndex& tuples, const Problem& p, std::size_t run, const TraceFixture& fixture,
                        const std::vector<Entry>& entries) {
  Solver s(tuples, p.vars());
  for (const Entry& e : entries) {
    s.add(p.dynamics(run, p.map->id(fixture.cells[e.row]), e.column, fixture.grid[e.row][e.column]));
  }
  return s.propagate_all();
}

// Locates a minimal set of fixture entries whose rules cannot hold together
// and reports two of them.
[[noreturn]] void explain_contradiction(const TupleIndex& tuples, const Problem& p, std::size_t run,
                                       const TraceFixture& fixture) {
  std::vector<Entry> order;
  for (int k = 0; k < fixture.steps(); ++k) {
    for (std::size_t r = 0; r < fixture.cells.size(); ++r) order.push_back({static_cast<int>(r), k});
  }
  std::vector<Entry> prefix;
  Entry last{-1, -1};
  for (const Entry& e : order) {
    prefix.push_back(e);
    if (!entries_consistent(tuples, p, run, fixture, prefix)) {
      last = e;
      break;
    }
  }
  if (last.row < 0) throw InferenceError("fixture " + fixture.name + " has no consistent pattern");
  prefix.pop_back();
  for (std::size_t i = prefix.size(); i-- > 0;) {
    std::vector<Entry> trial = prefix;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    trial.push_back(last);
    if (!entries_consistent(tuples, p, run, fixture, trial)) prefix.erase(prefix.begin() + static_cast<std::ptrdiff_t>(i));
  }
  if (prefix.empty()) {
    throw InferenceError("fixture " + fixture.name + ": entry " + describe(fixture, last) +
                         " contradicts its own cell");
  }
  throw InferenceError("fixture " + fixture.name + ": entries " + describe(fixture, prefix.front()) + " and " +
                       describe(fixture, last) + " contradict each other");
}

}  // namespace

std::vector<Inference> infer_shared_structure(const std::vector<TraceFixture>& fixtures, const RuleTable& table,
                                              const InferenceOptions& options) {
  std::vector<Inference> out(fixtures.size());
  if (fixtures.empty()) return out;
  for (const auto& fx : fixtures) {
    if (fx.empty() || fx.steps() == 0) throw InferenceError("fixture " + fx.name + " is empty");
    for (std::size_t r = 0; r < fx.cells.size(); ++r) {
      for (int id : fx.grid[r]) {
        if (!table.find(id)) {
          throw InferenceError("fixture " + fx.name + " cites rule " + std::to_string(id) +
                               " which is not in the table");
        }
      }
    }
  }
  const TupleIndex tuples(table);

  for (int radius = options.min_radius; radius <= options.max_radius; ++radius) {
    const Problem p = make_problem(fixtures, radius);
    Solver solver(tuples, p.vars());
    for (std::size_t run = 0; run < fixtures.size(); ++run) {
      const TraceFixture& fx = fixtures[run];
      std::map<std::pair<int, int>, int> cited;  // (cell, column) -> rule id
      for (std::size_t r = 0; r < fx.cells.size(); ++r) {
        for (int k = 0; k < fx.steps(); ++k) cited[{p.map->id(fx.cells[r]), k}] = fx.grid[r][k];
      }
      for (const auto& [cell, d] : p.distance) {
        for (int t = 0; t < p.steps[run]; ++t) {
          auto it = cited.find({cell, t});
          solver.add(p.dynamics(run, cell, t, it == cited.end() ? 0 : it->second));
        }
      }
      if (run > 0) {
        for (int cell : p.region) {
          Constraint link;
          link.link = true;
          link.var[0] = p.var(0, cell, 0);
          link.var[1] = p.var(run, cell, 0);
          solver.add(link);
        }
      }
    }
    if (!solver.propagate_all()) {
      if (radius == options.min_radius) {
        for (std::size_t run = 0; run < fixtures.size(); ++run) {
          const TraceFixture& fx = fixtures[run];
          std::vector<Entry> all;
          for (int k = 0; k < fx.steps(); ++k) {
            for (std::size_t r = 0; r < fx.cells.size(); ++r) all.push_back({static_cast<int>(r), k});
          }
          if (!entries_consistent(tuples, p, run, fx, all)) explain_contradiction(tuples, p, run, fx);
        }
      }
      continue;
    }

    std::vector<int> branch;
    std::vector<int> priority(p.vars(), 0);
    for (std::size_t run = 0; run < fixtures.size(); ++run) {
      for (int cell : p.region) {
        int v = p.var(run, cell, 0);
        branch.push_back(v);
        priority[v] = p.distance.at(cell);
      }
    }
    std::vector<int> defaulted;
    if (!solver.search(branch, priority, defaulted)) continue;

    const auto& dom = solver.domains();
    for (int v = 1; v < p.vars(); ++v) {
      if (popcount(dom[v]) != 1) throw std::logic_error("inference left a variable open");
    }
    std::set<int> defaulted_set(defaulted.begin(), defaulted.end());
    for (std::size_t run = 0; run < fixtures.size(); ++run) {
      Inference& inf = out[run];
      for (int cell : p.region) {
        Domain d = dom[p.var(run, cell, 0)];
        State s = d == bit(State::B) ? State::B : d == bit(State::R) ? State::R : State::W;
        inf.pattern.set(p.map->tile(cell), s);
        if (defaulted_set.count(p.var(run, cell, 0))) inf.report.defaulted.push_back(p.map->tile(cell));
      }
      std::sort(inf.report.defaulted.begin(), inf.report.defaulted.end());
      inf.report.radius = radius;
      inf.report.region_size = p.region.size();
    }
    return out;
  }
  std::string names;
  for (const auto& fx : fixtures) names += (names.empty() ? "" : ", ") + fx.name;
  throw InferenceError("fixture " + names + ": no pattern within " + std::to_string(options.max_radius) +
                       " Moore steps of the watched cells reproduces it");
}

Inference infer_initial_pattern(const TraceFixture& fixture, const RuleTable& table,
                                const InferenceOptions& options) {
  if (fixture.empty() || fixture.steps() == 0) return {};
  return infer_shared_structure({fixture}, table, options).front();
}

}  // namespace pentaca
