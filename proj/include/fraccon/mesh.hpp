#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

namespace fraccon {

using Vec2 = Eigen::Vector2d;

struct Node {
  int id = 0;
  double x = 0.0;
  double y = 0.0;

  Vec2 pos() const { return {x, y}; }
};

/// Linear triangle, vertices counter-clockwise.
struct Tri3 {
  int id = 0;
  std::array<int, 3> nodes{};
};

/// Fracture traced along mesh edges. Node ids refer to the unsplit mesh.
struct FracturePath {
  int id = 0;
  std::vector<int> nodes;
  bool is_through_going = false;
  double gap0 = 0.0;
};

/// Where a pair sits relative to a crossing on its own fracture.
enum class PairBranch { Regular, BeforeCrossing, AfterCrossing };

struct ContactPair {
  int id = 0;
  int node_plus = -1;
  int node_minus = -1;
  int fracture = -1;
  int path_index = -1;  // position of the original node along the path
  double arc_coord = 0.0;
  Vec2 normal{0.0, 1.0};   // from the minus side toward the plus side
  Vec2 tangent{1.0, 0.0};  // normal rotated by -90 degrees
  bool is_crossing_pair = false;
  PairBranch branch = PairBranch::Regular;
  double gap0 = 0.0;
};

/// One straight piece of a fracture path with the pairs at its two ends
/// (-1 at an undoubled crack tip).
struct PathSegment {
  int fracture = -1;
  int pair_a = -1;
  int pair_b = -1;
  Vec2 a;
  Vec2 b;

  double length() const { return (b - a).norm(); }
};

struct Mesh {
  std::vector<Node> nodes;
  std::vector<Tri3> elements;
  std::vector<FracturePath> fractures;
  std::vector<ContactPair> pairs;

  /// origin[n] is the unsplit node id a (possibly duplicated) node came from.
  std::vector<int> origin;
  /// Unsplit node id -> all of its copies (the original id first).
  std::map<int, std::vector<int>> duplicates;
  bool is_split = false;

  int n_node() const { return static_cast<int>(nodes.size()); }
  int n_elem() const { return static_cast<int>(elements.size()); }
  int n_frac() const { return static_cast<int>(fractures.size()); }
  int n_pair() const { return static_cast<int>(pairs.size()); }

  Vec2 pos(int node) const { return nodes[static_cast<std::size_t>(node)].pos(); }
};

inline constexpr double kAreaTolerance = 1e-14;

double signed_area(const Mesh& mesh, const Tri3& elem);
double total_area(const Mesh& mesh);

/// Checks dense ids, positive orientation and that every fracture segment is
/// a mesh edge. Recomputes is_through_going. Throws MeshError.
void validate(Mesh& mesh);

Mesh parse_mesh(std::istream& in);
Mesh load_mesh(const std::filesystem::path& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

enum class GridPattern {
  Diagonal,  // two triangles per cell, split along the "/" diagonal
  Crossed    // four triangles per cell around a centre node
};

struct FractureSpec {
  Vec2 from;
  Vec2 to;
  double gap0 = 0.0;
};

/// Tensor-product grid given by its coordinate lines (strictly increasing).
struct GridSpec {
  std::vector<double> x_lines;
  std::vector<double> y_lines;
  GridPattern pattern = GridPattern::Diagonal;
};

/// Uniform lines over [lo, lo + length] with n cells.
std::vector<double> uniform_lines(double lo, double length, int n);

/// Symmetric lines about `center`: uniform spacing `h` over the core
/// [center - core, center + core], then geometric growth by `ratio` for
/// `n_grow` cells on either side.
std::vector<double> graded_lines(double center, double core, double h, double ratio,
                                 int n_grow);

Mesh generate_grid_mesh(const GridSpec& grid, const std::vector<FractureSpec>& fractures);

Mesh generate_rect_mesh(double width, double height, int nx, int ny,
                        const std::vector<FractureSpec>& fractures,
                        GridPattern pattern = GridPattern::Diagonal);

/// Duplicates fracture nodes so both faces can move independently.
/// Crack-tip nodes keep a single copy; crossing nodes get four.
Mesh split_fractures(const Mesh& mesh);

/// Builds one contact pair per duplicated path node (two per fracture at a
/// crossing) with its local frame.
Mesh build_contact_pairs(const Mesh& mesh);

/// split_fractures followed by build_contact_pairs.
Mesh prepare(const Mesh& mesh);

/// Segment table of every fracture, in path order.
std::vector<PathSegment> segment_table(const Mesh& mesh);

/// Boundary edge of the external boundary (fracture faces excluded).
struct BoundaryEdge {
  int element = -1;
  int a = -1;
  int b = -1;  // a -> b runs counter-clockwise around the domain
};

std::vector<BoundaryEdge> external_boundary(const Mesh& mesh);

/// Pairs of a fracture ordered by arc coordinate (crossing pairs: before, after).
std::vector<int> pairs_along(const Mesh& mesh, int fracture);

}  // namespace fraccon
