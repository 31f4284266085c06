#include "pentaca/pentagrid.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <string>

#include "pentaca/error.hpp"

namespace pentaca {

namespace {

int mod5(int x) { return ((x % 5) + 5) % 5; }

// Unoriented construction: tiles are created breadth-first, and before a new
// tile is invented for an open side we try to close the vertex at either end
// of that side, since every vertex carries exactly four tiles.
class RawMap {
 public:
  std::vector<std::array<int, 5>> nb;
  std::vector<int> gen;

  explicit RawMap(int depth) {
    add_tile(0);
    std::deque<int> queue{0};
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      if (gen[t] > depth) continue;
      close(t);
      for (int s = 0; s < 5; ++s) {
        if (nb[t][s] >= 0) continue;
        int n = add_tile(gen[t] + 1);
        nb[t][s] = n;
        nb[n][0] = t;
        queue.push_back(n);
        close(n);
        close(t);
      }
    }
  }

  int idx(int a, int b) const {
    for (int s = 0; s < 5; ++s) {
      if (nb[a][s] == b) return s;
    }
    throw std::logic_error("pentagrid: broken side reciprocity");
  }

 private:
  int add_tile(int g) {
    nb.push_back({-1, -1, -1, -1, -1});
    gen.push_back(g);
    return static_cast<int>(nb.size()) - 1;
  }

  void link(int t, int s, int x, int j) {
    if (nb[x][j] >= 0 && nb[x][j] != t) throw std::logic_error("pentagrid: vertex closure conflict");
    nb[t][s] = x;
    nb[x][j] = t;
  }

  // Finds the tile across side s of t by walking around one of the side's
  // endpoints, returning the tile and the side index on its end.
  bool walk(int t, int s, int& x, int& j) const {
    if (int n = nb[t][mod5(s - 1)]; n >= 0) {
      if (int d = nb[n][mod5(idx(n, t) - 1)]; d >= 0) {
        if (int p = nb[d][mod5(idx(d, n) - 1)]; p >= 0) {
          x = p;
          j = mod5(idx(p, d) - 1);
          return true;
        }
      }
    }
    if (int b = nb[t][mod5(s + 1)]; b >= 0) {
      if (int d = nb[b][mod5(idx(b, t) + 1)]; d >= 0) {
        if (int p = nb[d][mod5(idx(d, b) + 1)]; p >= 0) {
          x = p;
          j = mod5(idx(p, d) + 1);
          return true;
        }
      }
    }
    return false;
  }

  void close(int t) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int s = 0; s < 5; ++s) {
        int x, j;
        if (nb[t][s] < 0 && walk(t, s, x, j)) {
          link(t, s, x, j);
          changed = true;
        }
      }
    }
  }
};

}  // namespace

int Pentagrid::max_depth() {
  if (const char* env = std::getenv("PENTACA_MAX_DEPTH")) {
    try {
      std::size_t used = 0;
      int v = std::stoi(env, &used);
      if (used == std::string(env).size() && v >= 0) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("PENTACA_MAX_DEPTH is not a non-negative integer: '") + env + "'");
  }
  return kDefaultMaxDepth;
}

Pentagrid::Pentagrid(int depth) : depth_(depth) {
  if (depth < 0) throw UsageError("map depth must be non-negative");
  if (depth > max_depth()) {
    throw UsageError("map depth " + std::to_string(depth) + " exceeds the cap " +
                     std::to_string(max_depth()) + " (set PENTACA_MAX_DEPTH to raise it)");
  }
  RawMap raw(depth);
  const int n = static_cast<int>(raw.nb.size());

  // Orientation: side 1 faces the father. When two lower-generation
  // neighbours exist they are consecutive, and the father is the first of
  // the pair in counter-clockwise order.
  std::vector<int> rot(n, 0), father(n, -1);
  for (int t = 1; t < n; ++t) {
    int low[2], count = 0;
    for (int s = 0; s < 5; ++s) {
      int x = raw.nb[t][s];
      if (x >= 0 && raw.gen[x] == raw.gen[t] - 1) {
        if (count == 2) throw std::logic_error("pentagrid: tile with three lower neighbours");
        low[count++] = s;
      }
    }
    int f = low[0];
    if (count == 2 && mod5(low[0] + 1) != low[1]) f = low[1];
    rot[t] = f;
    father[t] = raw.nb[t][f];
  }

  // Children in counter-clockwise order starting from the father's side 2.
  std::vector<std::vector<int>> children(n);
  for (int t = 1; t < n; ++t) children[father[t]].push_back(t);
  for (int t = 0; t < n; ++t) {
    auto key = [&](int c) { return mod5(raw.idx(t, c) - rot[t]); };
    std::sort(children[t].begin(), children[t].end(),
              [&](int a, int b) { return key(a) < key(b); });
  }

  // Breadth-first numbering per sector; ids follow label order.
  std::vector<int> order;
  order.reserve(n);
  std::vector<TileRef> label(n);
  order.push_back(0);
  label[0] = TileRef::centre();
  for (int sector = 1; sector <= 5; ++sector) {
    int root = raw.nb[0][sector - 1];
    std::deque<int> q{root};
    int next = 1;
    while (!q.empty()) {
      int t = q.front();
      q.pop_front();
      label[t] = {sector, next++};
      order.push_back(t);
      for (int c : children[t]) q.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n) throw std::logic_error("pentagrid: numbering is not a spanning tree");

  std::vector<int> new_id(n);
  for (int i = 0; i < n; ++i) new_id[order[i]] = i;

  labels_.resize(n);
  gen_.resize(n);
  side_.resize(n);
  moore_.resize(n);
  for (int i = 0; i < n; ++i) {
    int t = order[i];
    labels_[i] = label[t];
    gen_[i] = raw.gen[t];
    for (int k = 0; k < 5; ++k) {
      int x = raw.nb[t][mod5(k + rot[t])];
      side_[i][k] = x < 0 ? -1 : new_id[x];
    }
    by_sector_[label[t].sector].push_back(i);
  }

  auto side_index = [&](int a, int b) {
    for (int s = 0; s < 5; ++s) {
      if (side_[a][s] == b) return s;
    }
    return -1;
  };
  for (int i = 0; i < n; ++i) {
    auto& m = moore_[i];
    for (int k = 0; k < 5; ++k) m[k] = side_[i][k];
    for (int k = 0; k < 5; ++k) {
      // Vertex between sides k+1 and k (1-based): step from side k, i.e.
      // the previous side, around the shared vertex.
      m[5 + k] = -1;
      int nbr = side_[i][mod5(k - 1)];
      if (nbr < 0) continue;
      int back = side_index(nbr, i);
      if (back < 0) continue;
      m[5 + k] = side_[nbr][mod5(back - 1)];
    }
  }
}

int Pentagrid::find(TileRef t) const {
  if (!is_valid(t)) return -1;
  if (t.is_centre()) return 0;
  const auto& v = by_sector_[t.sector];
  if (static_cast<std::size_t>(t.index) > v.size()) return -1;
  return v[static_cast<std::size_t>(t.index) - 1];
}

int Pentagrid::id(TileRef t) const {
  int i = find(t);
  if (i < 0) {
    throw NavigationError("tile " + format_label(t) + " lies outside the map of depth " +
                          std::to_string(depth_));
  }
  return i;
}

bool Pentagrid::moore_complete(int id) const {
  const auto& m = moore(id);
  return std::none_of(m.begin(), m.end(), [](int x) { return x < 0; });
}

const std::array<int, 10>& Pentagrid::moore_checked(int id) const {
  if (!moore_complete(id)) {
    throw NavigationError("tile " + format_label(tile(id)) + " needs map depth >= " +
                          std::to_string(depth_for_moore(generation(id))) + " (map depth " +
                          std::to_string(depth_) + ")");
  }
  return moore(id);
}

TileRef Pentagrid::side_neighbor(TileRef t, int k) const {
  if (k < 1 || k > 5) throw UsageError("side index must be in 1..5");
  int i = id(t);
  int x = side_[i][k - 1];
  if (x < 0) {
    throw NavigationError("tile " + format_label(t) + " needs map depth >= " +
                          std::to_string(generation(i)) + " (map depth " + std::to_string(depth_) + ")");
  }
  return tile(x);
}

TileRef Pentagrid::vertex_neighbor(TileRef t, int k) const {
  if (k < 1 || k > 5) throw UsageError("vertex index must be in 1..5");
  int i = id(t);
  int x = moore_[i][4 + k];
  if (x < 0) {
    throw NavigationError("tile " + format_label(t) + " needs map depth >= " +
                          std::to_string(depth_for_moore(generation(i))) + " (map depth " +
                          std::to_string(depth_) + ")");
  }
  return tile(x);
}

std::size_t Pentagrid::sector_level_size(int sector, int d) const {
  std::size_t count = 0;
  for (int i : by_sector_[sector]) {
    if (gen_[i] == d + 1) ++count;
  }
  return count;
}

std::vector<TileRef> Pentagrid::tiles() const { return labels_; }

std::shared_ptr<const Pentagrid> expand_map(int depth) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Pentagrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[depth];
  if (!slot) {
    try {
      slot = std::make_shared<const Pentagrid>(depth);
    } catch (...) {
      cache.erase(depth);
      throw;
    }
  }
  return slot;
}

TileRef rotate_tile(TileRef t, int r) {
  if (t.is_centre()) return t;
  return {mod5(t.sector - 1 + r) + 1, t.index};
}

}  // namespace pentaca
