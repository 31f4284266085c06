#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pentaca/engine.hpp"
#include "pentaca/pentagrid.hpp"
#include "pentaca/tile.hpp"

namespace pentaca {

using Point = std::complex<double>;

struct TilePolygon {
  TileRef tile;
  // Counter-clockwise; side k (1..5) runs from vertex k-1 to vertex k mod 5.
  std::array<Point, 5> vertices;
};

// Euclidean distance from the origin to a vertex of the central tile in the
// Poincare disc, from cosh(R) = cot(pi/5) cot(pi/4).
double central_circumradius();

class DiscLayout {
 public:
  DiscLayout() = default;
  DiscLayout(int depth, std::vector<TilePolygon> polygons);

  int depth() const { return depth_; }
  const std::vector<TilePolygon>& polygons() const { return polygons_; }  // sorted by label
  const TilePolygon* find(TileRef t) const;

 private:
  int depth_ = 0;
  std::vector<TilePolygon> polygons_;
};

// Tiles of generation <= depth, the central tile regular and centred at the
// origin with side 1 facing up, every other tile the reflection of its
// father across their shared side. Throws UsageError if depth exceeds the
// map's depth.
DiscLayout layout(const Pentagrid& map, int depth);

struct Palette {
  std::string w = "#ffffff";
  std::string b = "#4060ff";
  std::string r = "#ff4040";
};

// `w=#ffffff,b=#4060ff,r=#ff4040`, any subset, in any order.
Palette parse_palette(std::string_view text);

// Deterministic SVG of every laid-out tile. Throws RenderError when a
// configuration cell lies outside the layout.
std::string render_svg(const Configuration& config, const DiscLayout& layout, const Palette& palette = {});

}  // namespace pentaca
