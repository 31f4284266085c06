#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "pentaca/tile.hpp"

namespace pentaca {

// Oriented combinatorial map of the {5,4} tiling around the centre.
//
// Tiles at graph distance <= depth() from 0(0) are fully resolved; the ring
// at distance depth()+1 is present but may miss some side-neighbours.
// Side positions run counter-clockwise; position 1 of a non-central tile is
// the side shared with its tree father, and side k of the centre is 1(k).
// Vertex position 5+k is the vertex shared by sides k and k-1 (side 0 being
// side 5).
//
// Immutable after construction.
class Pentagrid {
 public:
  static constexpr int kDefaultMaxDepth = 12;

  // Cap on depth, overridable through PENTACA_MAX_DEPTH.
  static int max_depth();

  // Throws UsageError when depth is negative or above max_depth().
  explicit Pentagrid(int depth);

  int depth() const { return depth_; }
  std::size_t size() const { return labels_.size(); }

  bool contains(TileRef t) const { return find(t) >= 0; }
  // Dense id in [0, size()), or -1 when the tile is outside the map.
  int find(TileRef t) const;
  // Like find() but throws NavigationError for tiles outside the map.
  int id(TileRef t) const;
  TileRef tile(int id) const { return labels_[static_cast<std::size_t>(id)]; }

  int generation(int id) const { return gen_[static_cast<std::size_t>(id)]; }
  int generation(TileRef t) const { return generation(id(t)); }
  bool resolved(int id) const { return generation(id) <= depth_; }

  // k in 1..5. Throws NavigationError when the neighbour is not in the map.
  TileRef side_neighbor(TileRef t, int k) const;
  TileRef vertex_neighbor(TileRef t, int k) const;

  // Id-level access. Entry 0..4 are sides 1..5, entries 5..9 are vertex
  // positions 6..10; -1 marks a neighbour beyond the expanded region.
  const std::array<int, 5>& sides(int id) const { return side_[static_cast<std::size_t>(id)]; }
  const std::array<int, 10>& moore(int id) const { return moore_[static_cast<std::size_t>(id)]; }
  // True when all 10 neighbours of the tile are known.
  bool moore_complete(int id) const;
  // Throws NavigationError if the tile's Moore neighbourhood is incomplete.
  const std::array<int, 10>& moore_checked(int id) const;

  // Number of tiles of the given sector at tree depth d (root is depth 0).
  std::size_t sector_level_size(int sector, int d) const;

  // All tiles, sorted by label.
  std::vector<TileRef> tiles() const;

  // Smallest map depth at which `t` has a complete Moore neighbourhood, for
  // tiles of the given generation.
  static int depth_for_moore(int generation) { return generation + 1; }

 private:
  int depth_;
  std::vector<TileRef> labels_;
  std::vector<int> gen_;
  std::vector<std::array<int, 5>> side_;
  std::vector<std::array<int, 10>> moore_;
  std::array<std::vector<int>, 6> by_sector_;  // index -> id, per sector
};

// Builds (and caches) the map of the given depth. Safe to call concurrently.
std::shared_ptr<const Pentagrid> expand_map(int depth);

// The automorphism turning every sector s into sector s+r (mod 5), keeping
// tree indices; the centre is fixed.
TileRef rotate_tile(TileRef t, int r);

}  // namespace pentaca
