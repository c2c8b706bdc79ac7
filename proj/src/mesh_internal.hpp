#pragma once

#include "fraccon/mesh.hpp"

#include <cstdint>
#include <set>
#include <utility>

namespace fraccon::detail {

using EdgeKey = std::pair<int, int>;

inline EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

/// Fracture segments keyed by unsplit node ids.
inline std::set<EdgeKey> fracture_edges(const Mesh& mesh) {
  std::set<EdgeKey> edges;
  for (const auto& f : mesh.fractures)
    for (std::size_t k = 0; k + 1 < f.nodes.size(); ++k)
      edges.insert(edge_key(f.nodes[k], f.nodes[k + 1]));
  return edges;
}

inline int origin_of(const Mesh& mesh, int node) {
  return mesh.origin.empty() ? node : mesh.origin[static_cast<std::size_t>(node)];
}

/// Left-hand unit normal of the direction a -> b.
inline Vec2 left_normal(const Vec2& a, const Vec2& b) {
  const Vec2 t = (b - a).normalized();
  return {-t.y(), t.x()};
}

}  // namespace fraccon::detail
