#include "fraccon/cli.hpp"

#include "fraccon/error.hpp"
#include "fraccon/oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace fraccon {

Mesh build_mesh(const MeshSource& source) {
  if (source.grid) {
    GridSpec spec;
    spec.x_lines = source.grid->x.build();
    spec.y_lines = source.grid->y.build();
    spec.pattern = source.grid->pattern;
    return generate_grid_mesh(spec, source.grid->fractures);
  }
  return load_mesh(source.file);
}

RunResult execute(const RunConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  res.problem =
      Problem::create(prepare(build_mesh(cfg.mesh)), cfg.material, cfg.friction, cfg.bcs, cfg.threads);
  res.steps = run_load_steps(res.problem, cfg.solver);
  const auto& last = res.final_state();
  res.summary.preset = cfg.name;
  res.summary.converged =
      last.converged && static_cast<int>(res.steps.size()) == cfg.solver.n_load_steps;
  for (const auto& s : res.steps) res.summary.newton_iters += s.newton_iters;
  res.summary.max_penetration = max_penetration(res.problem.mesh, last);
  if (res.summary.converged) res.summary.rel_L2 = reference_error(cfg, res.problem.mesh, last);
  res.summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

double max_penetration(const Mesh& mesh, const SolutionState& state) {
  double worst = 0.0;
  for (const auto& p : mesh.pairs)
    worst = std::max(worst, -jump_displacement(p, state.U).normal_gap());
  return worst;
}

std::vector<FractureProfileRecord> fracture_profile(const Mesh& mesh, const SolutionState& state,
                                                    int fracture) {
  std::vector<FractureProfileRecord> out;
  for (int q : pairs_along(mesh, fracture)) {
    const auto& p = mesh.pairs[static_cast<std::size_t>(q)];
    const auto kin = pair_kinematics(p, state.U, state.Lambda);
    FractureProfileRecord r;
    r.fracture = fracture;
    r.pair = q;
    r.eta = p.arc_coord;
    r.uN_jump = kin.jump_normal;
    r.uT_jump = kin.jump_tangent;
    r.lambdaN = kin.lambda_normal;
    r.lambdaT = kin.lambda_tangent;
    r.state = to_string(state.states[static_cast<std::size_t>(q)]);
    out.push_back(r);
  }
  return out;
}

std::optional<double> reference_error(const RunConfig& cfg, const Mesh& mesh,
                                      const SolutionState& state) {
  const auto& ref = cfg.reference;
  if (ref.kind == ReferenceSpec::Kind::None || ref.fracture >= mesh.n_frac()) return std::nullopt;
  const auto profile = fracture_profile(mesh, state, ref.fracture);
  std::vector<ProfileSample> samples;
  switch (ref.kind) {
    case ReferenceSpec::Kind::InclinedSlip: {
      InclinedCrackCase c{ref.alpha, ref.sigma_inf, ref.half_length, cfg.material, cfg.friction};
      for (const auto& r : profile) samples.push_back({r.eta, r.uT_jump});
      return profile_error(samples, [&](double eta) { return inclined_crack_slip(eta, c); },
                           2.0 * ref.half_length)
          .rel_L2;
    }
    case ReferenceSpec::Kind::SneddonOpening: {
      for (const auto& r : profile) samples.push_back({r.eta, r.uN_jump});
      const double l = ref.half_length;
      return profile_error(
                 samples,
                 [&](double eta) { return sneddon_opening(eta - l, ref.pressure, l, cfg.material); },
                 2.0 * l)
          .rel_L2;
    }
    case ReferenceSpec::Kind::ConstantSlip: {
      for (const auto& r : profile) samples.push_back({r.eta, std::abs(r.uT_jump)});
      const double len = profile.empty() ? 0.0 : profile.back().eta;
      return profile_error(samples, [](double) { return constant_slip_reference(); }, len).rel_L2;
    }
    case ReferenceSpec::Kind::None: break;
  }
  return std::nullopt;
}

void write_profile_csv(const std::vector<FractureProfileRecord>& records, std::ostream& out) {
  out << "eta,uN_jump,uT_jump,lambdaN,lambdaT,state\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : records)
    out << r.eta << ',' << r.uN_jump << ',' << r.uT_jump << ',' << r.lambdaN << ',' << r.lambdaT
        << ',' << r.state << '\n';
}

std::vector<std::filesystem::path> export_profiles(const Mesh& mesh, const SolutionState& state,
                                                   const std::filesystem::path& directory,
                                                   const std::string& stem) {
  std::filesystem::create_directories(directory);
  std::vector<std::filesystem::path> paths;
  for (int f = 0; f < mesh.n_frac(); ++f) {
    const auto path = directory / (stem + "_fracture" + std::to_string(f) + ".csv");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_profile_csv(fracture_profile(mesh, state, f), out);
    if (!out) throw Error("write failed for " + path.string());
    paths.push_back(path);
  }
  return paths;
}

void write_vtk(const Mesh& mesh, const MaterialParams& mat, const SolutionState& state,
               std::ostream& out) {
  out << "# vtk DataFile Version 3.0\n";
  out << "fracture contact solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "POINTS " << mesh.n_node() << " double\n";
  for (const auto& n : mesh.nodes) out << n.x << ' ' << n.y << " 0\n";
  out << "CELLS " << mesh.n_elem() << ' ' << 4 * mesh.n_elem() << '\n';
  for (const auto& e : mesh.elements)
    out << "3 " << e.nodes[0] << ' ' << e.nodes[1] << ' ' << e.nodes[2] << '\n';
  out << "CELL_TYPES " << mesh.n_elem() << '\n';
  for (int i = 0; i < mesh.n_elem(); ++i) out << "5\n";
  out << "POINT_DATA " << mesh.n_node() << "\nVECTORS displacement double\n";
  for (int n = 0; n < mesh.n_node(); ++n)
    out << state.U(2 * n) << ' ' << state.U(2 * n + 1) << " 0\n";
  out << "CELL_DATA " << mesh.n_elem() << "\nTENSORS stress double\n";
  const Matrix3 D = plane_strain_D(mat);
  for (const auto& e : mesh.elements) {
    const auto s = element_stress(mesh, e, D, state.U);
    const double szz = mat.nu * (s(0) + s(1));
    out << s(0) << ' ' << s(2) << " 0\n" << s(2) << ' ' << s(1) << " 0\n0 0 " << szz << "\n\n";
  }
}

void export_field(const Mesh& mesh, const MaterialParams& mat, const SolutionState& state,
                  const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_vtk(mesh, mat, state, out);
  if (!out) throw Error("write failed for " + path.string());
}

std::string summary_json(const RunSummary& s) {
  nlohmann::json j;
  j["preset"] = s.preset;
  j["rel_L2"] = s.rel_L2 ? nlohmann::json(*s.rel_L2) : nlohmann::json(nullptr);
  j["max_penetration"] = s.max_penetration;
  j["newton_iters"] = s.newton_iters;
  j["wall_time_s"] = s.wall_time_s;
  return j.dump(2) + "\n";
}

int run(const RunConfig& cfg, std::ostream& log) {
  const RunResult res = execute(cfg);
  const auto& mesh = res.problem.mesh;
  log << cfg.name << ": " << mesh.n_node() << " nodes, " << mesh.n_elem() << " elements, "
      << mesh.n_pair() << " contact pairs\n";
  log << std::setw(6) << "step" << std::setw(8) << "newton" << std::setw(8) << "loops"
      << std::setw(14) << "|R|_2" << "  status\n";
  for (const auto& s : res.steps)
    log << std::setw(6) << s.step << std::setw(8) << s.newton_iters << std::setw(8)
        << s.state_loops << std::setw(14) << std::setprecision(4) << std::scientific
        << s.residual_norm << std::defaultfloat << "  "
        << (s.converged ? "converged" : "FAILED: " + s.message) << '\n';

  const std::filesystem::path dir = cfg.outputs.directory;
  std::filesystem::create_directories(dir);
  const auto& last = res.final_state();
  if (cfg.outputs.profiles)
    for (const auto& p : export_profiles(mesh, last, dir, cfg.name)) log << "wrote " << p.string() << '\n';
  if (cfg.outputs.field) {
    const auto p = dir / (cfg.name + ".vtk");
    export_field(mesh, cfg.material, last, p);
    log << "wrote " << p.string() << '\n';
  }
  if (cfg.outputs.summary) {
    const auto p = dir / (cfg.name + "_summary.json");
    std::ofstream(p) << summary_json(res.summary);
    log << "wrote " << p.string() << '\n';
  }
  if (res.summary.rel_L2) log << "rel_L2 = " << *res.summary.rel_L2 << '\n';
  log << "wall time " << res.summary.wall_time_s << " s\n";

  if (res.summary.converged) return 0;
  const auto p = dir / (cfg.name + "_diagnostics.txt");
  std::ofstream diag(p);
  diag << "run '" << cfg.name << "' did not converge\n";
  for (const auto& s : res.steps) {
    diag << "step " << s.step << ": " << (s.converged ? "converged" : s.message) << "\n  residuals:";
    for (double r : s.residual_history) diag << ' ' << r;
    diag << '\n';
  }
  log << "diagnostics written to " << p.string() << '\n';
  return 1;
}

void mesh_info(const Mesh& mesh, std::ostream& out) {
  out << "nodes:     " << mesh.n_node() << '\n';
  out << "elements:  " << mesh.n_elem() << '\n';
  out << "area:      " << total_area(mesh) << '\n';
  out << "fractures: " << mesh.n_frac() << '\n';
  for (const auto& f : mesh.fractures) {
    double len = 0.0;
    for (std::size_t i = 1; i < f.nodes.size(); ++i)
      len += (mesh.pos(f.nodes[i]) - mesh.pos(f.nodes[i - 1])).norm();
    out << "  fracture " << f.id << ": " << f.nodes.size() << " nodes, length " << len
        << (f.is_through_going ? ", through-going" : "") << '\n';
  }
  if (mesh.n_frac() == 0 || mesh.is_split) return;
  const Mesh split = prepare(mesh);
  int crossing = 0;
  for (const auto& p : split.pairs) crossing += p.is_crossing_pair ? 1 : 0;
  out << "after splitting: " << split.n_node() << " nodes, " << split.n_pair()
      << " contact pairs (" << crossing << " at crossings)\n";
}

}  // namespace fraccon
