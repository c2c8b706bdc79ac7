#include "fraccon/mesh.hpp"

#include "fraccon/error.hpp"
#include "mesh_internal.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace fraccon {

double signed_area(const Mesh& mesh, const Tri3& elem) {
  const Vec2 a = mesh.pos(elem.nodes[0]);
  const Vec2 b = mesh.pos(elem.nodes[1]);
  const Vec2 c = mesh.pos(elem.nodes[2]);
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double total_area(const Mesh& mesh) {
  double area = 0.0;
  for (const auto& e : mesh.elements) area += signed_area(mesh, e);
  return area;
}

void validate(Mesh& mesh) {
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    if (mesh.nodes[i].id != static_cast<int>(i))
      throw MeshError("node ids must be dense and ordered; found id " +
                      std::to_string(mesh.nodes[i].id) + " at position " + std::to_string(i));

  std::map<detail::EdgeKey, int> edge_count;
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
    const auto& e = mesh.elements[i];
    if (e.id != static_cast<int>(i))
      throw MeshError("element ids must be dense and ordered; found id " + std::to_string(e.id));
    for (int n : e.nodes)
      if (n < 0 || n >= mesh.n_node())
        throw MeshError("element " + std::to_string(e.id) + " references missing node " +
                        std::to_string(n));
    if (signed_area(mesh, e) < kAreaTolerance)
      throw MeshError("element " + std::to_string(e.id) +
                      " is degenerate or not counter-clockwise");
    for (int k = 0; k < 3; ++k) ++edge_count[detail::edge_key(e.nodes[k], e.nodes[(k + 1) % 3])];
  }

  std::vector<bool> on_boundary(mesh.nodes.size(), false);
  for (const auto& [edge, count] : edge_count) {
    if (count > 2) throw MeshError("non-manifold edge " + std::to_string(edge.first) + "-" +
                                   std::to_string(edge.second));
    if (count == 1) on_boundary[edge.first] = on_boundary[edge.second] = true;
  }

  for (std::size_t i = 0; i < mesh.fractures.size(); ++i) {
    auto& f = mesh.fractures[i];
    if (f.id != static_cast<int>(i))
      throw MeshError("fracture ids must be dense and ordered; found id " + std::to_string(f.id));
    if (f.nodes.size() < 2)
      throw MeshError("fracture " + std::to_string(f.id) + " needs at least two nodes");
    std::vector<int> sorted = f.nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MeshError("fracture " + std::to_string(f.id) + " visits a node twice");
    for (std::size_t k = 0; k + 1 < f.nodes.size(); ++k) {
      const int a = f.nodes[k];
      const int b = f.nodes[k + 1];
      if (a < 0 || b < 0 || a >= mesh.n_node() || b >= mesh.n_node())
        throw MeshError("fracture " + std::to_string(f.id) + " references a missing node");
      if (!edge_count.contains(detail::edge_key(a, b)))
        throw MeshError("fracture " + std::to_string(f.id) + " is non-conforming: segment " +
                        std::to_string(a) + "-" + std::to_string(b) + " is not a mesh edge");
    }
    f.is_through_going = on_boundary[f.nodes.front()] && on_boundary[f.nodes.back()];
  }
}

std::vector<BoundaryEdge> external_boundary(const Mesh& mesh) {
  const auto frac = detail::fracture_edges(mesh);
  std::map<detail::EdgeKey, std::vector<BoundaryEdge>> edges;
  for (const auto& e : mesh.elements)
    for (int k = 0; k < 3; ++k) {
      const int a = e.nodes[k];
      const int b = e.nodes[(k + 1) % 3];
      edges[detail::edge_key(a, b)].push_back({e.id, a, b});
    }
  std::vector<BoundaryEdge> out;
  for (const auto& [key, list] : edges) {
    if (list.size() != 1) continue;
    const auto& be = list.front();
    if (frac.contains(
            detail::edge_key(detail::origin_of(mesh, be.a), detail::origin_of(mesh, be.b))))
      continue;
    out.push_back(be);
  }
  return out;
}

std::vector<int> pairs_along(const Mesh& mesh, int fracture) {
  std::vector<int> ids;
  for (const auto& p : mesh.pairs)
    if (p.fracture == fracture) ids.push_back(p.id);
  auto rank = [](PairBranch b) { return b == PairBranch::AfterCrossing ? 1 : 0; };
  std::stable_sort(ids.begin(), ids.end(), [&](int l, int r) {
    const auto& pl = mesh.pairs[static_cast<std::size_t>(l)];
    const auto& pr = mesh.pairs[static_cast<std::size_t>(r)];
    if (pl.path_index != pr.path_index) return pl.path_index < pr.path_index;
    return rank(pl.branch) < rank(pr.branch);
  });
  return ids;
}

std::vector<PathSegment> segment_table(const Mesh& mesh) {
  std::vector<PathSegment> table;
  for (const auto& f : mesh.fractures) {
    // path index -> (pair facing the previous segment, pair facing the next)
    std::map<int, std::pair<int, int>> at;
    for (const auto& p : mesh.pairs) {
      if (p.fracture != f.id) continue;
      auto& slot = at.try_emplace(p.path_index, -1, -1).first->second;
      if (p.branch != PairBranch::AfterCrossing) slot.first = p.id;
      if (p.branch != PairBranch::BeforeCrossing) slot.second = p.id;
    }
    auto lookup = [&](int k, bool incoming) {
      auto it = at.find(k);
      if (it == at.end()) return -1;
      return incoming ? it->second.first : it->second.second;
    };
    for (std::size_t k = 0; k + 1 < f.nodes.size(); ++k) {
      PathSegment s;
      s.fracture = f.id;
      s.pair_a = lookup(static_cast<int>(k), false);
      s.pair_b = lookup(static_cast<int>(k + 1), true);
      // unsplit ids keep their original coordinates
      s.a = mesh.pos(f.nodes[k]);
      s.b = mesh.pos(f.nodes[k + 1]);
      table.push_back(s);
    }
  }
  return table;
}

Mesh prepare(const Mesh& mesh) { return build_contact_pairs(split_fractures(mesh)); }

}  // namespace fraccon
