#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pentaca/engine.hpp"
#include "pentaca/pentagrid.hpp"
#include "pentaca/rules.hpp"
#include "pentaca/tile.hpp"
#include "pentaca/verify.hpp"

namespace pentaca {

// ---- inference ------------------------------------------------------------

struct InferenceOptions {
  // Radii (in Moore steps around the watched cells) tried in turn for the
  // region whose states are solved for; everything beyond it is W.
  int min_radius = 2;
  int max_radius = 3;
};

struct InferenceReport {
  int radius = 0;
  // Cells of the t=0 pattern which the constraints left open and the search
  // set to W.
  std::vector<TileRef> defaulted;
  std::size_t region_size = 0;
};

struct Inference {
  Configuration pattern;  // configuration at the fixture's start time
  InferenceReport report;
};

// Solves for the configuration at the fixture's start time whose evolution
// applies exactly the fixture's rules to its watched cells. The region
// around the watched cells is solved over every step of the fixture, the
// surrounding ring is held W, so simulating the result reproduces the
// fixture. Throws InferenceError naming two fixture entries when the cited
// rules contradict each other, or when no pattern fits in the region.
Inference infer_initial_pattern(const TraceFixture& fixture, const RuleTable& table,
                                const InferenceOptions& options = {});

// Joint form for several runs over one structure: the patterns returned,
// one per fixture, agree on which cells are B at the start time and may
// differ only in W/R, so the runs differ by their locomotives alone.
std::vector<Inference> infer_shared_structure(const std::vector<TraceFixture>& fixtures, const RuleTable& table,
                                              const InferenceOptions& options = {});

// ---- patterns -------------------------------------------------------------

// Lines `<label> <B|R>`; `#` comments. W entries are rejected.
Configuration load_pattern(std::string_view text);
// Sorted by label, one line per cell, no comments.
std::string save_pattern(const Configuration& config);

struct Port {
  std::string name;
  TileRef cell;
  int neighbor = 0;  // 1..10, Moore position of the adjacent track cell
};

// `port <name> <label> <index>` lines; `#` comments.
std::vector<Port> load_ports(std::string_view text);
std::string save_ports(const std::vector<Port>& ports);

// ---- templates ------------------------------------------------------------

enum class StructureKind {
  track_element,
  vertical_track_down,
  vertical_track_up,
  ring1,
  ring2,
  ring3,
  fixed_switch,
  doubler,
  selector,
  fork,
  controller_blue,
  controller_red,
  sensor_blue,
  sensor_red,
};

const std::vector<StructureKind>& all_structure_kinds();
std::string to_string(StructureKind kind);
// Throws UsageError for unknown names.
StructureKind structure_kind_from_string(std::string_view name);

struct StructureParams {
  bool clockwise = true;  // rings only
};

struct PatternTemplate {
  std::string name;
  Configuration cells;  // idle structure, frame rooted at 0(0)
  std::vector<Port> ports;

  const Port& port(std::string_view name) const;
};

// File stem of a template: the kind name, with `_clockwise` or
// `_counterclockwise` appended for rings.
std::string template_name(StructureKind kind, const StructureParams& params = {});

// Every (kind, params) pair for which a template exists. The clockwise
// three-cell ring has no execution table and is absent.
std::vector<std::pair<StructureKind, StructureParams>> structure_variants();

// Loads the frozen pattern and port files shipped with the library. Throws
// UsageError for a variant without a template.
PatternTemplate build_structure(StructureKind kind, const StructureParams& params = {});

// Template plus locomotive: R at the port cell, and for a double locomotive
// also at the cell of port `<port>_pair`.
Configuration with_locomotive(const PatternTemplate& tpl, std::string_view port, bool doubled = false);

// ---- derivation -----------------------------------------------------------

struct DerivedStructure {
  PatternTemplate tpl;
  std::vector<std::string> sources;  // fixture names, one per run
  int radius = 0;
  std::size_t defaulted = 0;  // cells of the first run left open and set to W
};

// Rebuilds a template from its execution tables: joint inference over the
// runs, removal of the fewest R cells that leaves a 20-step fixed point, and
// ports read off the simulated locomotive paths. Entry ports point to the
// cell the locomotive moves to next, exit ports to the cell it came from.
// Every run is replayed from template plus locomotive and must match its
// fixture; InferenceError otherwise.
DerivedStructure derive_structure(StructureKind kind, const StructureParams& params, const RuleTable& table);

// Copies `local` cells, given in the frame of 0(0), into the map's frame at
// `anchor` with `rotation` (0..4): side k of 0(0) is carried to side
// k+rotation of the anchor, then the frame is transported tile by tile along
// side adjacencies. Throws MapTooShallow when the walk leaves the map.
Configuration place(const Configuration& local, const Pentagrid& map, TileRef anchor, int rotation);
PatternTemplate place(const PatternTemplate& tpl, const Pentagrid& map, TileRef anchor, int rotation);

// Image of a single local tile under the same transport.
TileRef place_tile(TileRef local, const Pentagrid& map, TileRef anchor, int rotation);

// Maps a Moore position (1..10) of a local cell to the position of the same
// neighbour around the placed cell.
int place_neighbor(TileRef local, int neighbor, const Pentagrid& map, TileRef anchor, int rotation);

}  // namespace pentaca
