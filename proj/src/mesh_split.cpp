#include "fraccon/error.hpp"
#include "fraccon/mesh.hpp"
#include "mesh_internal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace fraccon {
namespace {

struct PathRole {
  int fracture;
  int index;
  bool interior;
};

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::map<int, std::vector<PathRole>> path_roles(const Mesh& mesh) {
  std::map<int, std::vector<PathRole>> roles;
  for (const auto& f : mesh.fractures) {
    const int last = static_cast<int>(f.nodes.size()) - 1;
    for (int k = 0; k <= last; ++k)
      roles[f.nodes[static_cast<std::size_t>(k)]].push_back({f.id, k, k > 0 && k < last});
  }
  for (const auto& [node, list] : roles) {
    if (list.size() == 1) continue;
    const bool crossing =
        list.size() == 2 && list[0].fracture != list[1].fracture && list[0].interior && list[1].interior;
    if (!crossing)
      throw MeshError("node " + std::to_string(node) +
                      " joins fractures in an unsupported way (only two fractures crossing "
                      "through each other's interior are allowed)");
  }
  return roles;
}

std::vector<std::vector<int>> node_elements(const Mesh& mesh) {
  std::vector<std::vector<int>> incident(mesh.nodes.size());
  for (const auto& e : mesh.elements)
    for (int n : e.nodes) incident[static_cast<std::size_t>(n)].push_back(e.id);
  return incident;
}

/// Unit normal of a fracture at a path node: mean of the adjacent segment
/// left normals.
Vec2 path_normal(const Mesh& mesh, const FracturePath& f, std::size_t k) {
  Vec2 n = Vec2::Zero();
  if (k > 0) n += detail::left_normal(mesh.pos(f.nodes[k - 1]), mesh.pos(f.nodes[k]));
  if (k + 1 < f.nodes.size()) n += detail::left_normal(mesh.pos(f.nodes[k]), mesh.pos(f.nodes[k + 1]));
  if (n.norm() < 1e-12) throw MeshError("fracture " + std::to_string(f.id) + " folds back on itself");
  return n.normalized();
}

double local_length(const Mesh& mesh, const FracturePath& f, std::size_t k) {
  double h = 0.0;
  int count = 0;
  if (k > 0) h += (mesh.pos(f.nodes[k]) - mesh.pos(f.nodes[k - 1])).norm(), ++count;
  if (k + 1 < f.nodes.size()) h += (mesh.pos(f.nodes[k + 1]) - mesh.pos(f.nodes[k])).norm(), ++count;
  return h / count;
}

}  // namespace

Mesh split_fractures(const Mesh& input) {
  if (input.is_split) throw MeshError("mesh is already split");
  Mesh mesh = input;
  if (mesh.origin.size() != mesh.nodes.size()) {
    mesh.origin.resize(mesh.nodes.size());
    std::iota(mesh.origin.begin(), mesh.origin.end(), 0);
  }
  mesh.is_split = true;
  if (mesh.fractures.empty()) return mesh;

  std::map<detail::EdgeKey, int> owner;
  for (const auto& f : mesh.fractures)
    for (std::size_t k = 0; k + 1 < f.nodes.size(); ++k)
      if (!owner.emplace(detail::edge_key(f.nodes[k], f.nodes[k + 1]), f.id).second)
        throw MeshError("fractures overlap along edge " + std::to_string(f.nodes[k]) + "-" +
                        std::to_string(f.nodes[k + 1]));

  const auto roles = path_roles(mesh);
  const auto incident = node_elements(input);
  const auto boundary = external_boundary(input);
  std::vector<bool> on_boundary(input.nodes.size(), false);
  for (const auto& be : boundary) on_boundary[be.a] = on_boundary[be.b] = true;

  for (const auto& [v, list] : roles) {
    const auto& elems = incident[static_cast<std::size_t>(v)];
    DisjointSet sets(elems.size());
    std::map<int, std::vector<std::size_t>> by_edge;  // neighbour node -> local element slots
    for (std::size_t s = 0; s < elems.size(); ++s)
      for (int n : input.elements[static_cast<std::size_t>(elems[s])].nodes)
        if (n != v) by_edge[n].push_back(s);
    for (const auto& [w, slots] : by_edge) {
      if (owner.contains(detail::edge_key(v, w))) continue;
      for (std::size_t s = 1; s < slots.size(); ++s) sets.unite(slots[0], slots[s]);
    }

    std::map<std::size_t, std::vector<int>> sectors;  // root slot (== min slot) -> elements
    for (std::size_t s = 0; s < elems.size(); ++s) sectors[sets.find(s)].push_back(elems[s]);

    std::size_t expected = 2;
    if (list.size() == 2) expected = 4;
    else if (!list.front().interior) expected = on_boundary[static_cast<std::size_t>(v)] ? 2 : 1;
    if (sectors.size() != expected)
      throw MeshError("node " + std::to_string(v) + " splits into " +
                      std::to_string(sectors.size()) + " sectors, expected " +
                      std::to_string(expected));
    if (expected == 1) continue;

    std::vector<int> copies;
    for (const auto& [root, sector] : sectors) {
      int copy = v;
      if (!copies.empty()) {
        copy = mesh.n_node();
        const auto& src = input.nodes[static_cast<std::size_t>(v)];
        mesh.nodes.push_back({copy, src.x, src.y});
        mesh.origin.push_back(v);
        for (int e : sector)
          for (int& n : mesh.elements[static_cast<std::size_t>(e)].nodes)
            if (n == v) n = copy;
      }
      copies.push_back(copy);
    }
    mesh.duplicates[v] = std::move(copies);
  }
  return mesh;
}

Mesh build_contact_pairs(const Mesh& input) {
  if (!input.is_split) throw MeshError("contact pairs need a split mesh");
  Mesh mesh = input;
  mesh.pairs.clear();
  const auto incident = node_elements(mesh);

  auto side = [&](int copy, const Vec2& x, const Vec2& n, double h) {
    Vec2 c = Vec2::Zero();
    const auto& elems = incident[static_cast<std::size_t>(copy)];
    for (int e : elems) {
      const auto& t = mesh.elements[static_cast<std::size_t>(e)];
      c += (mesh.pos(t.nodes[0]) + mesh.pos(t.nodes[1]) + mesh.pos(t.nodes[2])) / 3.0;
    }
    c /= static_cast<double>(elems.size());
    const double s = n.dot(c - x);
    if (std::abs(s) < 1e-12 * h)
      throw MeshError("ambiguous side classification at node " + std::to_string(copy));
    return s > 0.0 ? 1 : -1;
  };

  std::map<int, std::vector<std::pair<int, int>>> on_paths;  // node -> (fracture, index)
  for (const auto& f : mesh.fractures)
    for (std::size_t k = 0; k < f.nodes.size(); ++k)
      on_paths[f.nodes[k]].emplace_back(f.id, static_cast<int>(k));

  for (const auto& f : mesh.fractures) {
    double arc = 0.0;
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
      const int v = f.nodes[k];
      if (k > 0) arc += (mesh.pos(v) - mesh.pos(f.nodes[k - 1])).norm();
      const bool interior = k > 0 && k + 1 < f.nodes.size();
      auto dup = mesh.duplicates.find(v);
      if (dup == mesh.duplicates.end()) {
        if (interior) throw MeshError("unmatched duplicate: interior node " + std::to_string(v) +
                                      " of fracture " + std::to_string(f.id) + " was not split");
        continue;  // crack tip
      }
      const auto& copies = dup->second;
      const Vec2 x = mesh.pos(v);
      const Vec2 n = path_normal(mesh, f, k);
      const Vec2 m{n.y(), -n.x()};
      const double h = local_length(mesh, f, k);

      ContactPair base;
      base.fracture = f.id;
      base.path_index = static_cast<int>(k);
      base.arc_coord = arc;
      base.normal = n;
      base.tangent = m;
      base.gap0 = f.gap0;

      const auto& paths = on_paths[v];
      if (paths.size() == 1) {
        if (copies.size() != 2)
          throw MeshError("unmatched duplicate at node " + std::to_string(v));
        const int s0 = side(copies[0], x, n, h);
        const int s1 = side(copies[1], x, n, h);
        if (s0 == s1)
          throw MeshError("both copies of node " + std::to_string(v) + " lie on one side of fracture " +
                          std::to_string(f.id));
        ContactPair p = base;
        p.id = mesh.n_pair();
        p.node_plus = s0 > 0 ? copies[0] : copies[1];
        p.node_minus = s0 > 0 ? copies[1] : copies[0];
        mesh.pairs.push_back(p);
        continue;
      }

      // crossing: pair the copies across this fracture on either side of the other one
      const auto& other_ref = paths[0].first == f.id ? paths[1] : paths[0];
      const auto& other = mesh.fractures[static_cast<std::size_t>(other_ref.first)];
      const Vec2 n_other = path_normal(mesh, other, static_cast<std::size_t>(other_ref.second));
      const double h_other = local_length(mesh, other, static_cast<std::size_t>(other_ref.second));
      const Vec2 prev = mesh.pos(f.nodes[k - 1]);
      const int prev_side = n_other.dot(prev - x) > 0.0 ? 1 : -1;
      for (int s_other : {prev_side, -prev_side}) {
        int plus = -1, minus = -1, found = 0;
        for (int c : copies) {
          if (side(c, x, n_other, h_other) != s_other) continue;
          ++found;
          (side(c, x, n, h) > 0 ? plus : minus) = c;
        }
        if (found != 2 || plus < 0 || minus < 0)
          throw MeshError("cannot match crossing copies at node " + std::to_string(v));
        ContactPair p = base;
        p.id = mesh.n_pair();
        p.node_plus = plus;
        p.node_minus = minus;
        p.is_crossing_pair = true;
        p.branch = s_other == prev_side ? PairBranch::BeforeCrossing : PairBranch::AfterCrossing;
        mesh.pairs.push_back(p);
      }
    }
  }
  return mesh;
}

}  // namespace fraccon
