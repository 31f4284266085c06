#include "pentaca/structures.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <sstream>

#include "pentaca/data.hpp"
#include "pentaca/error.hpp"

namespace pentaca {

namespace {

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto w = words(line);
    if (!w.empty()) f(line_no, w);
  }
}

int mod5(int x) { return ((x % 5) + 5) % 5; }

}  // namespace

Configuration load_pattern(std::string_view text) {
  Configuration config;
  std::map<TileRef, int> seen;
  for_each_line(text, [&](int line_no, const std::vector<std::string_view>& w) {
    if (w.size() != 2 || w[1].size() != 1) throw ParseError(line_no, "expected `<cell> <B|R>`");
    TileRef t;
    State s;
    try {
      t = parse_label(w[0]);
      s = state_from_char(w[1][0]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (s == State::W) throw ParseError(line_no, "W cells are implicit and may not be listed");
    if (auto [it, fresh] = seen.emplace(t, line_no); !fresh) {
      throw ParseError(line_no, "cell " + format_label(t) + " already listed on line " + std::to_string(it->second));
    }
    config.set(t, s);
  });
  return config;
}

std::string save_pattern(const Configuration& config) {
  std::ostringstream out;
  for (const auto& [t, s] : config.cells()) out << format_label(t) << ' ' << to_char(s) << '\n';
  return out.str();
}

std::vector<Port> load_ports(std::string_view text) {
  std::vector<Port> ports;
  for_each_line(text, [&](int line_no, const std::vector<std::string_view>& w) {
    if (w.size() != 4 || w[0] != "port") throw ParseError(line_no, "expected `port <name> <cell> <index>`");
    Port p;
    p.name = std::string(w[1]);
    try {
      p.cell = parse_label(w[2]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    auto [ptr, ec] = std::from_chars(w[3].data(), w[3].data() + w[3].size(), p.neighbor);
    if (ec != std::errc() || ptr != w[3].data() + w[3].size() || p.neighbor < 1 || p.neighbor > 10) {
      throw ParseError(line_no, "neighbour index must be in 1..10");
    }
    for (const Port& q : ports) {
      if (q.name == p.name) throw ParseError(line_no, "port '" + p.name + "' defined twice");
    }
    ports.push_back(p);
  });
  return ports;
}

std::string save_ports(const std::vector<Port>& ports) {
  std::ostringstream out;
  for (const Port& p : ports) out << "port " << p.name << ' ' << format_label(p.cell) << ' ' << p.neighbor << '\n';
  return out.str();
}

// ---- placement ------------------------------------------------------------

namespace {

struct Frame {
  int target;  // id in the target map
  int offset;  // local side k is target side k + offset
};

// Transports the frame of 0(0) to `anchor` and outward until every local
// tile in `wanted` has a frame.
std::map<TileRef, Frame> transport(const std::vector<TileRef>& wanted, const Pentagrid& map, TileRef anchor,
                                   int rotation) {
  std::map<TileRef, Frame> frames;
  if (wanted.empty()) return frames;
  auto local = map_covering(wanted);
  int a = map.find(anchor);
  if (a < 0) throw MapTooShallow("anchor " + format_label(anchor) + " lies outside the map");

  std::vector<char> want(local->size(), 0);
  std::size_t remaining = 0;
  int reach = 0;  // shortest paths to a tile never climb above its generation
  for (TileRef t : wanted) {
    int i = local->id(t);
    reach = std::max(reach, local->generation(i));
    if (!want[i]) {
      want[i] = 1;
      ++remaining;
    }
  }
  std::vector<Frame> seen(local->size(), Frame{-1, 0});
  std::deque<int> queue{0};
  seen[0] = {a, mod5(rotation)};
  while (!queue.empty() && remaining > 0) {
    int l = queue.front();
    queue.pop_front();
    if (want[l]) {
      frames[local->tile(l)] = seen[l];
      --remaining;
    }
    const Frame f = seen[l];
    for (int k = 0; k < 5; ++k) {
      int ln = local->sides(l)[k];
      if (ln < 0 || seen[ln].target >= 0 || local->generation(ln) > reach) continue;
      int tn = map.sides(f.target)[mod5(k + f.offset)];
      if (tn < 0) {
        throw MapTooShallow("placement at " + format_label(anchor) + " leaves the map of depth " +
                            std::to_string(map.depth()));
      }
      int back_local = -1, back_target = -1;
      for (int j = 0; j < 5; ++j) {
        if (local->sides(ln)[j] == l) back_local = j;
        if (map.sides(tn)[j] == f.target) back_target = j;
      }
      if (back_target < 0) {
        throw MapTooShallow("placement at " + format_label(anchor) + " leaves the map of depth " +
                            std::to_string(map.depth()));
      }
      seen[ln] = {tn, mod5(back_target - back_local)};
      queue.push_back(ln);
    }
  }
  if (remaining > 0) throw MapTooShallow("placement did not reach every template cell");
  return frames;
}

}  // namespace

Configuration place(const Configuration& local, const Pentagrid& map, TileRef anchor, int rotation) {
  std::vector<TileRef> cells;
  for (const auto& [t, s] : local.cells()) cells.push_back(t);
  auto frames = transport(cells, map, anchor, rotation);
  Configuration out;
  for (const auto& [t, s] : local.cells()) out.set(map.tile(frames.at(t).target), s);
  return out;
}

TileRef place_tile(TileRef local, const Pentagrid& map, TileRef anchor, int rotation) {
  auto frames = transport({local}, map, anchor, rotation);
  return map.tile(frames.at(local).target);
}

int place_neighbor(TileRef local, int neighbor, const Pentagrid& map, TileRef anchor, int rotation) {
  if (neighbor < 1 || neighbor > 10) throw UsageError("neighbour index must be in 1..10");
  auto frames = transport({local}, map, anchor, rotation);
  const int offset = frames.at(local).offset;
  // Sides and vertices rotate together, so the offset applies to both blocks.
  if (neighbor <= 5) return mod5(neighbor - 1 + offset) + 1;
  return mod5(neighbor - 6 + offset) + 6;
}

PatternTemplate place(const PatternTemplate& tpl, const Pentagrid& map, TileRef anchor, int rotation) {
  PatternTemplate out;
  out.name = tpl.name;
  out.cells = place(tpl.cells, map, anchor, rotation);
  for (const Port& p : tpl.ports) {
    out.ports.push_back({p.name, place_tile(p.cell, map, anchor, rotation),
                         place_neighbor(p.cell, p.neighbor, map, anchor, rotation)});
  }
  return out;
}

// ---- templates ------------------------------------------------------------

const std::vector<StructureKind>& all_structure_kinds() {
  static const std::vector<StructureKind> kinds = {
      StructureKind::track_element,   StructureKind::vertical_track_down, StructureKind::vertical_track_up,
      StructureKind::ring1,           StructureKind::ring2,               StructureKind::ring3,
      StructureKind::fixed_switch,    StructureKind::doubler,             StructureKind::selector,
      StructureKind::fork,            StructureKind::controller_blue,     StructureKind::controller_red,
      StructureKind::sensor_blue,     StructureKind::sensor_red,
  };
  return kinds;
}

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::track_element: return "track_element";
    case StructureKind::vertical_track_down: return "vertical_track_down";
    case StructureKind::vertical_track_up: return "vertical_track_up";
    case StructureKind::ring1: return "ring1";
    case StructureKind::ring2: return "ring2";
    case StructureKind::ring3: return "ring3";
    case StructureKind::fixed_switch: return "fixed_switch";
    case StructureKind::doubler: return "doubler";
    case StructureKind::selector: return "selector";
    case StructureKind::fork: return "fork";
    case StructureKind::controller_blue: return "controller_blue";
    case StructureKind::controller_red: return "controller_red";
    case StructureKind::sensor_blue: return "sensor_blue";
    case StructureKind::sensor_red: return "sensor_red";
  }
  return "?";
}

StructureKind structure_kind_from_string(std::string_view name) {
  for (StructureKind k : all_structure_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown structure '" + std::string(name) + "'");
}

const Port& PatternTemplate::port(std::string_view port_name) const {
  for (const Port& p : ports) {
    if (p.name == port_name) return p;
  }
  throw UsageError("structure " + name + " has no port '" + std::string(port_name) + "'");
}

std::string template_name(StructureKind kind, const StructureParams& params) {
  std::string file = to_string(kind);
  if (kind == StructureKind::ring1 || kind == StructureKind::ring2 || kind == StructureKind::ring3) {
    file += params.clockwise ? "_clockwise" : "_counterclockwise";
  }
  return file;
}

std::vector<std::pair<StructureKind, StructureParams>> structure_variants() {
  std::vector<std::pair<StructureKind, StructureParams>> out;
  for (StructureKind k : all_structure_kinds()) {
    if (k == StructureKind::ring1 || k == StructureKind::ring2) out.push_back({k, {true}});
    if (k == StructureKind::ring1 || k == StructureKind::ring2 || k == StructureKind::ring3) {
      out.push_back({k, {false}});
    } else {
      out.push_back({k, {}});
    }
  }
  return out;
}

Configuration with_locomotive(const PatternTemplate& tpl, std::string_view port, bool doubled) {
  Configuration c = tpl.cells;
  c.set(tpl.port(port).cell, State::R);
  if (doubled) c.set(tpl.port(std::string(port) + "_pair").cell, State::R);
  return c;
}

PatternTemplate build_structure(StructureKind kind, const StructureParams& params) {
  if (kind == StructureKind::ring3 && params.clockwise) {
    throw UsageError("no clockwise three-cell ring template is available");
  }
  const std::string file = template_name(kind, params);
  PatternTemplate tpl;
  tpl.name = file;
  tpl.cells = load_pattern(data::pattern_text(file));
  tpl.ports = load_ports(data::ports_text(file));
  return tpl;
}

}  // namespace pentaca
