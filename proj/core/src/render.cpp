#include "pentaca/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numbers>
#include <regex>
#include <sstream>

#include "pentaca/error.hpp"

namespace pentaca {

namespace {

// Inversion in the circle through a and b orthogonal to the unit circle,
// or the mirror in the diameter through them.
Point reflect(Point z, Point a, Point b) {
  const double cross = a.real() * b.imag() - a.imag() * b.real();
  if (std::abs(cross) < 1e-12) {
    const Point u = std::abs(a) > std::abs(b) ? a / std::abs(a) : b / std::abs(b);
    return u * u * std::conj(z);
  }
  // Centre c satisfies |c|^2 = rho^2 + 1 and |a - c| = |b - c| = rho.
  const double ka = (std::norm(a) + 1) / 2;
  const double kb = (std::norm(b) + 1) / 2;
  const Point c{(ka * b.imag() - kb * a.imag()) / cross, (a.real() * kb - b.real() * ka) / cross};
  const double rho2 = std::norm(c) - 1;
  return c + rho2 / std::conj(z - c);
}

int mod5(int x) { return ((x % 5) + 5) % 5; }

}  // namespace

double central_circumradius() {
  const double cosh_r = 1.0 / std::tan(std::numbers::pi / 5) / std::tan(std::numbers::pi / 4);
  return std::tanh(std::acosh(cosh_r) / 2);
}

DiscLayout::DiscLayout(int depth, std::vector<TilePolygon> polygons) : depth_(depth), polygons_(std::move(polygons)) {
  std::sort(polygons_.begin(), polygons_.end(), [](const auto& x, const auto& y) { return x.tile < y.tile; });
}

const TilePolygon* DiscLayout::find(TileRef t) const {
  auto it = std::lower_bound(polygons_.begin(), polygons_.end(), t,
                             [](const TilePolygon& p, TileRef key) { return p.tile < key; });
  return it != polygons_.end() && it->tile == t ? &*it : nullptr;
}

DiscLayout layout(const Pentagrid& map, int depth) {
  if (depth < 0 || depth > map.depth()) {
    throw UsageError("layout depth " + std::to_string(depth) + " exceeds the map depth " +
                     std::to_string(map.depth()));
  }
  std::vector<std::optional<std::array<Point, 5>>> placed(map.size());
  const double r = central_circumradius();
  std::array<Point, 5> centre;
  for (int k = 0; k < 5; ++k) {
    centre[k] = std::polar(r, std::numbers::pi / 2 - std::numbers::pi / 5 + 2 * std::numbers::pi * k / 5);
  }
  const int root = map.id(TileRef::centre());
  placed[root] = centre;

  std::vector<TilePolygon> out;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    const auto& v = *placed[t];
    out.push_back({map.tile(t), v});
    for (int k = 0; k < 5; ++k) {
      const int n = map.sides(t)[k];
      if (n < 0 || placed[n] || map.generation(n) > depth) continue;
      int j = 0;
      while (map.sides(n)[j] != t) ++j;
      const Point a = v[k], b = v[mod5(k + 1)];
      std::array<Point, 5> w;
      // Side j of n runs from b back to a; the mirror image reverses the order.
      for (int m = 0; m < 5; ++m) {
        const Point src = v[mod5(k + 1 - m)];
        w[mod5(j + m)] = m < 2 ? src : reflect(src, a, b);
      }
      placed[n] = w;
      queue.push_back(n);
    }
  }
  return DiscLayout(depth, std::move(out));
}

Palette parse_palette(std::string_view text) {
  Palette p;
  static const std::regex colour("#[0-9a-fA-F]{6}");
  std::string s(text);
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.size() < 3 || item[1] != '=' || !std::regex_match(item.substr(2), colour)) {
      throw ParseError("bad palette entry '" + item + "', expected w|b|r=#rrggbb");
    }
    switch (item[0]) {
      case 'w': p.w = item.substr(2); break;
      case 'b': p.b = item.substr(2); break;
      case 'r': p.r = item.substr(2); break;
      default: throw ParseError("bad palette key '" + item.substr(0, 1) + "'");
    }
  }
  return p;
}

std::string render_svg(const Configuration& config, const DiscLayout& layout, const Palette& palette) {
  for (const auto& [t, s] : config.cells()) {
    if (!layout.find(t)) {
      throw RenderError("cell " + format_label(t) + " lies outside the layout of depth " +
                        std::to_string(layout.depth()));
    }
  }
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
         "viewBox=\"-1.02 -1.02 2.04 2.04\">\n"
      << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.004\"/>\n"
      << "<g stroke=\"#000000\" stroke-width=\"0.002\" stroke-linejoin=\"round\">\n";
  char buf[64];
  for (const auto& poly : layout.polygons()) {
    const State s = config.get(poly.tile);
    const std::string& fill = s == State::B ? palette.b : s == State::R ? palette.r : palette.w;
    out << "<polygon data-cell=\"" << format_label(poly.tile) << "\" fill=\"" << fill << "\" points=\"";
    for (int k = 0; k < 5; ++k) {
      // SVG's y axis points down.
      std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", k ? " " : "", poly.vertices[k].real(),
                    -poly.vertices[k].imag() + 0.0);
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace pentaca
