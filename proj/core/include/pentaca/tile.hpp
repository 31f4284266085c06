#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace pentaca {

// Address of a pentagon: the centre 0(0), or `index(sector)` where sector is
// one of the five quarters around the centre and index is the breadth-first
// number of the tile in that sector's Fibonacci tree (the sector root is 1).
struct TileRef {
  int sector = 0;
  int index = 0;

  static constexpr TileRef centre() { return {0, 0}; }

  constexpr bool is_centre() const { return sector == 0; }

  // Ordering is by sector then index, which is also the order used for
  // deterministic output (patterns, traces).
  friend constexpr auto operator<=>(const TileRef&, const TileRef&) = default;
};

// Label grammar `N(S)`: index first, sector in parentheses.
std::string format_label(TileRef t);

// Throws ParseError naming the offending token.
TileRef parse_label(std::string_view text);

bool is_valid(TileRef t);

inline std::ostream& operator<<(std::ostream& os, TileRef t) { return os << format_label(t); }

}  // namespace pentaca

template <>
struct std::hash<pentaca::TileRef> {
  std::size_t operator()(const pentaca::TileRef& t) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(t.sector) << 40) ^ t.index);
  }
};
