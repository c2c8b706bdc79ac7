#pragma once

#include "fraccon/contact.hpp"
#include "fraccon/elasticity.hpp"
#include "fraccon/mesh.hpp"
#include "fraccon/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fraccon {

/// Coordinate lines of one grid axis.
struct AxisSpec {
  enum class Kind { Uniform, Graded, Explicit };
  Kind kind = Kind::Uniform;
  // Uniform
  double lo = 0.0;
  double length = 1.0;
  int n = 10;
  // Graded
  double center = 0.0;
  double core = 1.0;
  double h = 0.1;
  double ratio = 1.2;
  int n_grow = 0;
  // Explicit
  std::vector<double> lines;

  std::vector<double> build() const;
};

struct GridConfig {
  AxisSpec x;
  AxisSpec y;
  GridPattern pattern = GridPattern::Diagonal;
  std::vector<FractureSpec> fractures;
};

/// Exactly one of file / grid is set.
struct MeshSource {
  std::string file;
  std::optional<GridConfig> grid;
};

/// Closed-form profile the run is scored against (fracture `fracture`).
struct ReferenceSpec {
  enum class Kind { None, InclinedSlip, SneddonOpening, ConstantSlip };
  Kind kind = Kind::None;
  int fracture = 0;
  double alpha = 0.0;      // InclinedSlip [rad]
  double sigma_inf = 0.0;  // InclinedSlip [Pa]
  double half_length = 1.0;
  double pressure = 0.0;   // SneddonOpening [Pa]
};

struct OutputSpec {
  std::string directory = "out";
  bool profiles = true;
  bool field = true;
  bool summary = true;
};

struct RunConfig {
  std::string name = "run";
  MeshSource mesh;
  MaterialParams material;
  FrictionParams friction;
  std::vector<BoundaryCondition> bcs;
  SolverConfig solver;
  OutputSpec outputs;
  ReferenceSpec reference;
  int threads = 1;
};

/// Throws ConfigError naming the field path (e.g. "material.nu").
void validate_config(const RunConfig& cfg);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
RunConfig preset_config(const std::string& name);
/// 45 degree crack under face pressure `pressure` plus remote horizontal
/// compression ratio * pressure.
RunConfig sif_sweep_config(double ratio, double pressure = 10e6);
/// Unfractured rectangle under uniform horizontal tension.
RunConfig patch_test_config(double traction = 1e6);

struct FractureProfileRecord {
  int fracture = 0;
  int pair = -1;
  double eta = 0.0;
  double uN_jump = 0.0;
  double uT_jump = 0.0;
  double lambdaN = 0.0;
  double lambdaT = 0.0;
  std::string state;
};

/// One record per pair in arc order (crossing pairs appear twice at the same eta).
std::vector<FractureProfileRecord> fracture_profile(const Mesh& mesh, const SolutionState& state,
                                                    int fracture);

struct RunSummary {
  std::string preset;
  std::optional<double> rel_L2;
  double max_penetration = 0.0;
  int newton_iters = 0;
  double wall_time_s = 0.0;
  bool converged = false;
};

struct RunResult {
  Problem problem;
  std::vector<SolutionState> steps;
  RunSummary summary;

  const SolutionState& final_state() const { return steps.back(); }
};

Mesh build_mesh(const MeshSource& source);
/// Mesh, split, pairs, load steps. Never throws on non-convergence.
RunResult execute(const RunConfig& cfg);
std::optional<double> reference_error(const RunConfig& cfg, const Mesh& mesh,
                                      const SolutionState& state);
/// max(0, -min(g + [[u_N]])) over all pairs.
double max_penetration(const Mesh& mesh, const SolutionState& state);

/// Writes <directory>/<stem>_fracture<id>.csv for every fracture; returns the paths.
std::vector<std::filesystem::path> export_profiles(const Mesh& mesh, const SolutionState& state,
                                                   const std::filesystem::path& directory,
                                                   const std::string& stem);
void write_profile_csv(const std::vector<FractureProfileRecord>& records, std::ostream& out);
void export_field(const Mesh& mesh, const MaterialParams& mat, const SolutionState& state,
                  const std::filesystem::path& path);
void write_vtk(const Mesh& mesh, const MaterialParams& mat, const SolutionState& state,
               std::ostream& out);
std::string summary_json(const RunSummary& summary);

/// Runs, prints the convergence table to `log` and writes the requested
/// exports. Returns 0 iff every load step converged; otherwise also writes
/// <directory>/<name>_diagnostics.txt.
int run(const RunConfig& cfg, std::ostream& log);

/// Human-readable mesh statistics before and after splitting.
void mesh_info(const Mesh& mesh, std::ostream& out);

}  // namespace fraccon
