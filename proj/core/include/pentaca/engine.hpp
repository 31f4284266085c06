#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pentaca/pentagrid.hpp"
#include "pentaca/rules.hpp"
#include "pentaca/tile.hpp"

namespace pentaca {

// Finite-support configuration; every tile not stored is W.
class Configuration {
 public:
  Configuration() = default;

  State get(TileRef t) const {
    auto it = cells_.find(t);
    return it == cells_.end() ? State::W : it->second;
  }
  void set(TileRef t, State s);

  const std::map<TileRef, State>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }

  // Image under the sector rotation automorphism.
  Configuration rotated(int r) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::map<TileRef, State> cells_;
};

struct TraceEvent {
  int time;
  TileRef cell;
  int rule_id;
  State new_state;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;  // sorted by (time, cell)
  std::optional<std::set<TileRef>> watched;
};

// Header line plus one `time<TAB>cell<TAB>rule<TAB>state` line per event.
std::string format_trace(const Trace& trace);

struct CellDiff {
  TileRef cell;
  State before;
  State after;

  friend bool operator==(const CellDiff&, const CellDiff&) = default;
};

std::vector<CellDiff> diff(const Configuration& a, const Configuration& b);

// Support plus the Moore halo, sorted. Throws MapTooShallow when a support
// cell lacks a complete neighbourhood in the map.
std::vector<TileRef> active_set(const Configuration& config, const Pentagrid& map);

// Reads the neighbourhood word of a cell; throws MapTooShallow if incomplete.
RuleWord neighborhood_word(const Configuration& config, const Pentagrid& map, TileRef t);

struct StepResult {
  Configuration config;
  std::vector<TraceEvent> events;
};

// One synchronous step. Events are produced for watched cells (all active
// cells when `watched` is null) and stamped with `time`.
StepResult step(const Pentagrid& map, const RuleTable& table, const Configuration& config,
                const std::set<TileRef>* watched = nullptr, int time = 0);

struct RunResult {
  Configuration config;
  Trace trace;
};

// Iterates step. Watched cells that are not active still produce events
// (they apply the all-W rule). Errors are annotated with the failing time.
RunResult run(const Pentagrid& map, const RuleTable& table, const Configuration& config, int steps,
              const std::optional<std::set<TileRef>>& watched = std::nullopt, int start_time = 0);

// Same as run() but picks the map itself, deepening it when the evolving
// support or the watched cells approach the frontier.
RunResult run_auto(const RuleTable& table, const Configuration& config, int steps,
                   const std::optional<std::set<TileRef>>& watched = std::nullopt, int start_time = 0);

// Smallest cached map on which every given tile, and every tile within two
// steps of it, has a complete neighbourhood.
std::shared_ptr<const Pentagrid> map_covering(const std::vector<TileRef>& tiles);

}  // namespace pentaca
