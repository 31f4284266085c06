#include "pentaca/tile.hpp"

#include <charconv>

#include "pentaca/error.hpp"

namespace pentaca {

std::string format_label(TileRef t) {
  return std::to_string(t.index) + "(" + std::to_string(t.sector) + ")";
}

bool is_valid(TileRef t) {
  if (t.sector == 0) return t.index == 0;
  return t.sector >= 1 && t.sector <= 5 && t.index >= 1;
}

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

TileRef parse_label(std::string_view text) {
  const std::string token(text);
  auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') {
    throw ParseError("malformed tile label '" + token + "'");
  }
  TileRef t;
  if (!parse_int(text.substr(0, open), t.index) ||
      !parse_int(text.substr(open + 1, text.size() - open - 2), t.sector)) {
    throw ParseError("malformed tile label '" + token + "'");
  }
  if (!is_valid(t)) {
    throw ParseError("tile label out of range '" + token + "'");
  }
  return t;
}

}  // namespace pentaca
