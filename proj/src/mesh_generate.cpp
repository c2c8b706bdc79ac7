#include "fraccon/error.hpp"
#include "fraccon/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace fraccon {
namespace {

int nearest_line(const std::vector<double>& lines, double v) {
  auto it = std::lower_bound(lines.begin(), lines.end(), v);
  if (it == lines.end()) return static_cast<int>(lines.size()) - 1;
  if (it == lines.begin()) return 0;
  const auto i = static_cast<int>(it - lines.begin());
  return (v - lines[static_cast<std::size_t>(i - 1)] <= *it - v) ? i - 1 : i;
}

void check_lines(const std::vector<double>& lines, const char* axis) {
  if (lines.size() < 2) throw ConfigError(std::string(axis) + " grid needs at least one cell");
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (!(lines[i] > lines[i - 1]))
      throw ConfigError(std::string(axis) + " grid lines must be strictly increasing");
}

}  // namespace

std::vector<double> uniform_lines(double lo, double length, int n) {
  if (n < 1 || !(length > 0.0)) throw ConfigError("uniform grid needs n >= 1 and length > 0");
  std::vector<double> lines(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) lines[static_cast<std::size_t>(i)] = lo + length * i / n;
  return lines;
}

std::vector<double> graded_lines(double center, double core, double h, double ratio,
                                 int n_grow) {
  if (!(h > 0.0) || !(core >= 0.0) || !(ratio >= 1.0) || n_grow < 0)
    throw ConfigError("invalid graded grid parameters");
  const int n_core = std::max(1, static_cast<int>(std::lround(core / h)));
  std::vector<double> right;
  for (int i = 0; i <= n_core; ++i) right.push_back(i * h);
  double step = h;
  for (int k = 0; k < n_grow; ++k) {
    step *= ratio;
    right.push_back(right.back() + step);
  }
  std::vector<double> lines;
  for (auto it = right.rbegin(); it != right.rend(); ++it)
    if (*it > 0.0) lines.push_back(center - *it);
  for (double r : right) lines.push_back(center + r);
  return lines;
}

Mesh generate_grid_mesh(const GridSpec& grid, const std::vector<FractureSpec>& fractures) {
  check_lines(grid.x_lines, "x");
  check_lines(grid.y_lines, "y");
  const int nx = static_cast<int>(grid.x_lines.size()) - 1;
  const int ny = static_cast<int>(grid.y_lines.size()) - 1;
  const bool crossed = grid.pattern == GridPattern::Crossed;
  auto corner = [&](int i, int j) { return j * (nx + 1) + i; };
  const int n_corner = (nx + 1) * (ny + 1);
  auto centre = [&](int i, int j) { return n_corner + j * nx + i; };

  Mesh mesh;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.push_back({corner(i, j), grid.x_lines[static_cast<std::size_t>(i)],
                            grid.y_lines[static_cast<std::size_t>(j)]});
  if (crossed)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        mesh.nodes.push_back(
            {centre(i, j),
             0.5 * (grid.x_lines[static_cast<std::size_t>(i)] + grid.x_lines[static_cast<std::size_t>(i + 1)]),
             0.5 * (grid.y_lines[static_cast<std::size_t>(j)] + grid.y_lines[static_cast<std::size_t>(j + 1)])});

  auto add = [&](int a, int b, int c) {
    mesh.elements.push_back({static_cast<int>(mesh.elements.size()), {a, b, c}});
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c00 = corner(i, j), c10 = corner(i + 1, j);
      const int c01 = corner(i, j + 1), c11 = corner(i + 1, j + 1);
      if (crossed) {
        const int m = centre(i, j);
        add(c00, c10, m);
        add(c10, c11, m);
        add(c11, c01, m);
        add(c01, c00, m);
      } else {
        add(c00, c10, c11);
        add(c00, c11, c01);
      }
    }

  for (const auto& spec : fractures) {
    const int i0 = nearest_line(grid.x_lines, spec.from.x());
    const int j0 = nearest_line(grid.y_lines, spec.from.y());
    const int i1 = nearest_line(grid.x_lines, spec.to.x());
    const int j1 = nearest_line(grid.y_lines, spec.to.y());
    const int di = i1 - i0, dj = j1 - j0;
    const std::string where = "fracture " + std::to_string(mesh.fractures.size());
    if (di == 0 && dj == 0) throw MeshError(where + " has zero length after snapping");
    const bool axis = di == 0 || dj == 0;
    const bool diagonal = std::abs(di) == std::abs(dj);
    if (!axis && !diagonal)
      throw MeshError(where + " is non-conforming: not along grid lines or diagonals");
    if (diagonal && !crossed && (di > 0) != (dj > 0))
      throw MeshError(where + " is non-conforming: the diagonal pattern only has '/' diagonals");

    FracturePath path;
    path.id = static_cast<int>(mesh.fractures.size());
    path.gap0 = spec.gap0;
    const int si = (di > 0) - (di < 0), sj = (dj > 0) - (dj < 0);
    const int steps = std::max(std::abs(di), std::abs(dj));
    int i = i0, j = j0;
    path.nodes.push_back(corner(i, j));
    for (int s = 0; s < steps; ++s) {
      if (!axis && crossed) path.nodes.push_back(centre(std::min(i, i + si), std::min(j, j + sj)));
      i += si;
      j += sj;
      path.nodes.push_back(corner(i, j));
    }
    mesh.fractures.push_back(std::move(path));
  }

  mesh.origin.resize(mesh.nodes.size());
  for (std::size_t n = 0; n < mesh.origin.size(); ++n) mesh.origin[n] = static_cast<int>(n);
  validate(mesh);
  return mesh;
}

Mesh generate_rect_mesh(double width, double height, int nx, int ny,
                        const std::vector<FractureSpec>& fractures, GridPattern pattern) {
  GridSpec grid{uniform_lines(0.0, width, nx), uniform_lines(0.0, height, ny), pattern};
  return generate_grid_mesh(grid, fractures);
}

}  // namespace fraccon
