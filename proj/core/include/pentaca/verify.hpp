#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pentaca/engine.hpp"
#include "pentaca/pentagrid.hpp"
#include "pentaca/rules.hpp"
#include "pentaca/tile.hpp"

namespace pentaca {

inline constexpr int kMaxRuleId = 352;

// One block of an execution table: the rule applied to each watched cell at
// consecutive times start_time, start_time+1, ...
struct TraceFixture {
  std::string name;
  std::vector<TileRef> cells;
  int start_time = 0;
  std::vector<std::vector<int>> grid;  // grid[row][column]

  int steps() const { return grid.empty() ? 0 : static_cast<int>(grid.front().size()); }
  bool empty() const { return cells.empty(); }
};

// A fixture file holds one or more blocks. Each block starts with a header
// `<block>\tt<k>\tt<k+1>...`, followed by `<cell>\t<id>...` rows; `#` lines
// are comments. A file with a single block named `cell` yields one fixture
// called `table`; otherwise blocks are named `table/block`.
std::vector<TraceFixture> parse_fixtures(std::string_view text, const std::string& table = "fixture");

// Single-block convenience form; throws ParseError if there are several.
TraceFixture parse_fixture(std::string_view text, const std::string& name = "fixture");

std::string format_fixture(const TraceFixture& fixture);

struct Mismatch {
  int time;
  TileRef cell;
  int expected;
  int got;
};

struct Report {
  std::vector<Mismatch> mismatches;
  bool pass() const { return mismatches.empty(); }
};

// Throws Error("coverage", ...) when the trace lacks an event the fixture
// expects.
Report check_trace(const Trace& trace, const TraceFixture& fixture);

struct Inconsistency {
  int time;
  std::string detail;
};

struct ConsistencyReport {
  std::vector<Inconsistency> issues;
  bool pass() const { return issues.empty(); }
};

// Simulation-free cross-check: at every time, the cited rules must admit
// one rotation each such that all states they pin (the cells themselves,
// their neighbours, and the next state of each row) agree.
ConsistencyReport neighborhood_consistency(const TraceFixture& fixture, const RuleTable& table,
                                           const Pentagrid& map);

}  // namespace pentaca
