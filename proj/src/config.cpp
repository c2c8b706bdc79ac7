#include "fraccon/cli.hpp"

#include "fraccon/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace fraccon {

using nlohmann::json;

std::vector<double> AxisSpec::build() const {
  switch (kind) {
    case Kind::Uniform: return uniform_lines(lo, length, n);
    case Kind::Graded: return graded_lines(center, core, h, ratio, n_grow);
    case Kind::Explicit: return lines;
  }
  return {};
}

namespace {

// ---- reading helpers, every error carries the field path

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vec2 as_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T, class F>
void opt(const json& j, const std::string& key, const std::string& path, T& dst, F conv) {
  if (auto it = j.find(key); it != j.end()) dst = conv(*it, path + "." + key);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(path + "." + it.key(), "unknown field");
  }
}

AxisSpec read_axis(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  AxisSpec a;
  if (j.contains("lines")) {
    check_keys(j, path, {"lines"});
    a.kind = AxisSpec::Kind::Explicit;
    a.lines = as_numbers(j["lines"], path + ".lines");
  } else if (j.contains("graded")) {
    check_keys(j, path, {"graded"});
    const auto& g = j["graded"];
    const std::string p = path + ".graded";
    check_keys(g, p, {"center", "core", "h", "ratio", "n_grow"});
    a.kind = AxisSpec::Kind::Graded;
    a.center = as_number(need(g, "center", p), p + ".center");
    a.core = as_number(need(g, "core", p), p + ".core");
    a.h = as_number(need(g, "h", p), p + ".h");
    a.ratio = as_number(need(g, "ratio", p), p + ".ratio");
    a.n_grow = as_int(need(g, "n_grow", p), p + ".n_grow");
  } else if (j.contains("uniform")) {
    check_keys(j, path, {"uniform"});
    const auto& u = j["uniform"];
    const std::string p = path + ".uniform";
    check_keys(u, p, {"lo", "length", "n"});
    a.kind = AxisSpec::Kind::Uniform;
    a.lo = as_number(need(u, "lo", p), p + ".lo");
    a.length = as_number(need(u, "length", p), p + ".length");
    a.n = as_int(need(u, "n", p), p + ".n");
  } else {
    fail(path, "expected one of 'uniform', 'graded' or 'lines'");
  }
  return a;
}

MeshSource read_mesh(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"file", "grid"});
  MeshSource m;
  const bool has_file = j.contains("file"), has_grid = j.contains("grid");
  if (has_file == has_grid) fail(path, "exactly one of 'file' or 'grid' is required");
  if (has_file) {
    m.file = as_string(j["file"], path + ".file");
    return m;
  }
  const auto& g = j["grid"];
  const std::string p = path + ".grid";
  check_keys(g, p, {"x", "y", "pattern", "fractures"});
  GridConfig grid;
  grid.x = read_axis(need(g, "x", p), p + ".x");
  grid.y = read_axis(need(g, "y", p), p + ".y");
  if (g.contains("pattern")) {
    const auto s = as_string(g["pattern"], p + ".pattern");
    if (s == "diagonal")
      grid.pattern = GridPattern::Diagonal;
    else if (s == "crossed")
      grid.pattern = GridPattern::Crossed;
    else
      fail(p + ".pattern", "expected 'diagonal' or 'crossed'");
  }
  if (g.contains("fractures")) {
    const auto& fr = g["fractures"];
    if (!fr.is_array()) fail(p + ".fractures", "expected an array");
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const std::string q = p + ".fractures[" + std::to_string(i) + "]";
      check_keys(fr[i], q, {"from", "to", "gap0"});
      FractureSpec f;
      f.from = as_vec2(need(fr[i], "from", q), q + ".from");
      f.to = as_vec2(need(fr[i], "to", q), q + ".to");
      opt(fr[i], "gap0", q, f.gap0, as_number);
      grid.fractures.push_back(f);
    }
  }
  m.grid = grid;
  return m;
}

BoundaryCondition read_bc(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"type", "target", "ux", "uy", "traction", "stress", "fracture", "pressure",
                       "ramp"});
  BoundaryCondition bc;
  const auto type = as_string(need(j, "type", path), path + ".type");
  if (type == "dirichlet")
    bc.kind = BcKind::Dirichlet;
  else if (type == "neumann")
    bc.kind = BcKind::Neumann;
  else if (type == "pressure")
    bc.kind = BcKind::FractureFacePressure;
  else
    fail(path + ".type", "expected 'dirichlet', 'neumann' or 'pressure'");

  if (bc.kind != BcKind::FractureFacePressure) {
    const auto& t = need(j, "target", path);
    const std::string p = path + ".target";
    if (t.is_string()) {
      if (t.get<std::string>() != "boundary") fail(p, "expected \"boundary\" or an object");
      bc.target.type = BoundaryTarget::Type::Boundary;
    } else if (t.is_object() && t.contains("side")) {
      check_keys(t, p, {"side"});
      const auto s = as_string(t["side"], p + ".side");
      bc.target.type = BoundaryTarget::Type::Side;
      if (s == "left")
        bc.target.side = BoundarySide::Left;
      else if (s == "right")
        bc.target.side = BoundarySide::Right;
      else if (s == "bottom")
        bc.target.side = BoundarySide::Bottom;
      else if (s == "top")
        bc.target.side = BoundarySide::Top;
      else
        fail(p + ".side", "expected left, right, bottom or top");
    } else if (t.is_object() && t.contains("point")) {
      check_keys(t, p, {"point"});
      bc.target.type = BoundaryTarget::Type::Point;
      bc.target.point = as_vec2(t["point"], p + ".point");
    } else if (t.is_object() && t.contains("nodes")) {
      check_keys(t, p, {"nodes"});
      bc.target.type = BoundaryTarget::Type::Nodes;
      const auto& ns = t["nodes"];
      if (!ns.is_array()) fail(p + ".nodes", "expected an array of node ids");
      for (std::size_t i = 0; i < ns.size(); ++i)
        bc.target.nodes.push_back(as_int(ns[i], p + ".nodes[" + std::to_string(i) + "]"));
    } else {
      fail(p, "expected \"boundary\", {\"side\"}, {\"point\"} or {\"nodes\"}");
    }
  }

  switch (bc.kind) {
    case BcKind::Dirichlet:
      for (int c = 0; c < 2; ++c) {
        const std::string key = c == 0 ? "ux" : "uy";
        if (j.contains(key) && !j[key].is_null())
          bc.displacement[static_cast<std::size_t>(c)] = as_number(j[key], path + "." + key);
      }
      if (!bc.displacement[0] && !bc.displacement[1])
        fail(path, "Dirichlet condition needs 'ux' and/or 'uy'");
      break;
    case BcKind::Neumann:
      if (j.contains("stress")) {
        const auto& s = j["stress"];
        const std::string p = path + ".stress";
        if (!s.is_array() || s.size() != 2) fail(p, "expected [[sxx, sxy], [syx, syy]]");
        Eigen::Matrix2d m;
        for (int r = 0; r < 2; ++r) {
          const Vec2 row = as_vec2(s[static_cast<std::size_t>(r)], p + "[" + std::to_string(r) + "]");
          m.row(r) = row.transpose();
        }
        bc.stress = m;
      } else {
        bc.traction = as_vec2(need(j, "traction", path), path + ".traction");
      }
      break;
    case BcKind::FractureFacePressure:
      bc.fracture = as_int(need(j, "fracture", path), path + ".fracture");
      bc.pressure = as_number(need(j, "pressure", path), path + ".pressure");
      break;
  }
  opt(j, "ramp", path, bc.ramp, as_numbers);
  return bc;
}

json axis_json(const AxisSpec& a) {
  switch (a.kind) {
    case AxisSpec::Kind::Uniform:
      return {{"uniform", {{"lo", a.lo}, {"length", a.length}, {"n", a.n}}}};
    case AxisSpec::Kind::Graded:
      return {{"graded",
               {{"center", a.center}, {"core", a.core}, {"h", a.h}, {"ratio", a.ratio},
                {"n_grow", a.n_grow}}}};
    case AxisSpec::Kind::Explicit: return {{"lines", a.lines}};
  }
  return {};
}

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json bc_json(const BoundaryCondition& bc) {
  json j;
  switch (bc.kind) {
    case BcKind::Dirichlet: j["type"] = "dirichlet"; break;
    case BcKind::Neumann: j["type"] = "neumann"; break;
    case BcKind::FractureFacePressure: j["type"] = "pressure"; break;
  }
  if (bc.kind != BcKind::FractureFacePressure) {
    switch (bc.target.type) {
      case BoundaryTarget::Type::Boundary: j["target"] = "boundary"; break;
      case BoundaryTarget::Type::Side: {
        static const char* names[] = {"left", "right", "bottom", "top"};
        j["target"] = {{"side", names[static_cast<int>(bc.target.side)]}};
        break;
      }
      case BoundaryTarget::Type::Point: j["target"] = {{"point", vec_json(bc.target.point)}}; break;
      case BoundaryTarget::Type::Nodes: j["target"] = {{"nodes", bc.target.nodes}}; break;
    }
  }
  switch (bc.kind) {
    case BcKind::Dirichlet:
      if (bc.displacement[0]) j["ux"] = *bc.displacement[0];
      if (bc.displacement[1]) j["uy"] = *bc.displacement[1];
      break;
    case BcKind::Neumann:
      if (bc.stress) {
        const auto& s = *bc.stress;
        j["stress"] = json::array({json::array({s(0, 0), s(0, 1)}), json::array({s(1, 0), s(1, 1)})});
      } else {
        j["traction"] = vec_json(bc.traction);
      }
      break;
    case BcKind::FractureFacePressure:
      j["fracture"] = bc.fracture;
      j["pressure"] = bc.pressure;
      break;
  }
  if (!bc.ramp.empty()) j["ramp"] = bc.ramp;
  return j;
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  const bool has_file = !cfg.mesh.file.empty();
  if (has_file == cfg.mesh.grid.has_value())
    throw ConfigError("mesh: exactly one of 'file' or 'grid' is required");
  // MaterialParams / FrictionParams messages already carry their field paths
  cfg.material.validate();
  if (!(cfg.friction.cohesion >= 0.0)) throw ConfigError("friction.cohesion must be non-negative");
  if (!(cfg.friction.friction_angle >= 0.0 && cfg.friction.friction_angle < 0.5 * M_PI))
    throw ConfigError("friction.friction_angle must lie in [0, 90) degrees");
  if (!(cfg.solver.newton_tol > 0.0)) throw ConfigError("solver.tolerance must be positive");
  if (cfg.solver.max_newton < 1) throw ConfigError("solver.max_newton must be at least 1");
  if (cfg.solver.max_state_loops < 1)
    throw ConfigError("solver.max_state_loops must be at least 1");
  if (cfg.solver.n_load_steps < 1) throw ConfigError("solver.load_steps must be at least 1");
  if (cfg.solver.linear.max_iterations < 1)
    throw ConfigError("solver.gmres_max_iterations must be at least 1");
  if (!(cfg.solver.linear.tolerance > 0.0))
    throw ConfigError("solver.gmres_tolerance must be positive");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  bool any_dirichlet = false;
  for (std::size_t i = 0; i < cfg.bcs.size(); ++i) {
    const auto& bc = cfg.bcs[i];
    any_dirichlet = any_dirichlet || bc.kind == BcKind::Dirichlet;
    if (!bc.ramp.empty() && static_cast<int>(bc.ramp.size()) != cfg.solver.n_load_steps)
      throw ConfigError("bcs[" + std::to_string(i) + "].ramp must have one factor per load step");
  }
  if (!any_dirichlet) throw ConfigError("bcs: at least one Dirichlet condition is required");
  const auto& r = cfg.reference;
  if (r.kind != ReferenceSpec::Kind::None && r.fracture < 0)
    throw ConfigError("reference.fracture must be non-negative");
  if (r.kind == ReferenceSpec::Kind::InclinedSlip &&
      !(r.alpha > 0.0 && r.alpha < 0.5 * M_PI && r.sigma_inf > 0.0 && r.half_length > 0.0))
    throw ConfigError("reference: inclined slip needs 0 < alpha < 90 deg, sigma_inf > 0, half_length > 0");
  if (r.kind == ReferenceSpec::Kind::SneddonOpening && !(r.half_length > 0.0))
    throw ConfigError("reference.half_length must be positive");
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j, "config", {"name", "mesh", "material", "friction", "bcs", "solver", "outputs",
                           "reference", "threads"});
  RunConfig cfg;
  opt(j, "name", "", cfg.name, as_string);
  cfg.mesh = read_mesh(need(j, "mesh", "config"), "mesh");

  const auto& m = need(j, "material", "config");
  check_keys(m, "material", {"E", "nu"});
  cfg.material.E = as_number(need(m, "E", "material"), "material.E");
  cfg.material.nu = as_number(need(m, "nu", "material"), "material.nu");

  if (j.contains("friction")) {
    const auto& f = j["friction"];
    check_keys(f, "friction", {"cohesion", "friction_angle_deg", "friction_angle_rad", "tan_phi"});
    opt(f, "cohesion", "friction", cfg.friction.cohesion, as_number);
    int given = 0;
    if (f.contains("friction_angle_deg")) {
      cfg.friction.friction_angle =
          as_number(f["friction_angle_deg"], "friction.friction_angle_deg") * M_PI / 180.0;
      ++given;
    }
    if (f.contains("friction_angle_rad")) {
      cfg.friction.friction_angle = as_number(f["friction_angle_rad"], "friction.friction_angle_rad");
      ++given;
    }
    if (f.contains("tan_phi")) {
      cfg.friction.friction_angle = std::atan(as_number(f["tan_phi"], "friction.tan_phi"));
      ++given;
    }
    if (given > 1)
      throw ConfigError("friction: give only one of friction_angle_deg, friction_angle_rad, tan_phi");
  }

  const auto& bcs = need(j, "bcs", "config");
  if (!bcs.is_array()) fail("bcs", "expected an array");
  for (std::size_t i = 0; i < bcs.size(); ++i)
    cfg.bcs.push_back(read_bc(bcs[i], "bcs[" + std::to_string(i) + "]"));

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    check_keys(s, "solver", {"tolerance", "max_newton", "max_state_loops", "load_steps",
                             "linear_solver", "gmres_max_iterations", "gmres_tolerance",
                             "precondition"});
    opt(s, "tolerance", "solver", cfg.solver.newton_tol, as_number);
    opt(s, "max_newton", "solver", cfg.solver.max_newton, as_int);
    opt(s, "max_state_loops", "solver", cfg.solver.max_state_loops, as_int);
    opt(s, "load_steps", "solver", cfg.solver.n_load_steps, as_int);
    opt(s, "gmres_max_iterations", "solver", cfg.solver.linear.max_iterations, as_int);
    opt(s, "gmres_tolerance", "solver", cfg.solver.linear.tolerance, as_number);
    opt(s, "precondition", "solver", cfg.solver.precondition, as_bool);
    if (s.contains("linear_solver")) {
      const auto k = as_string(s["linear_solver"], "solver.linear_solver");
      if (k == "direct")
        cfg.solver.linear.kind = LinearSolverConfig::Kind::Direct;
      else if (k == "iterative")
        cfg.solver.linear.kind = LinearSolverConfig::Kind::Iterative;
      else
        fail("solver.linear_solver", "expected 'direct' or 'iterative'");
    }
  }

  if (j.contains("outputs")) {
    const auto& o = j["outputs"];
    check_keys(o, "outputs", {"directory", "profiles", "field", "summary"});
    opt(o, "directory", "outputs", cfg.outputs.directory, as_string);
    opt(o, "profiles", "outputs", cfg.outputs.profiles, as_bool);
    opt(o, "field", "outputs", cfg.outputs.field, as_bool);
    opt(o, "summary", "outputs", cfg.outputs.summary, as_bool);
  }

  if (j.contains("reference")) {
    const auto& r = j["reference"];
    check_keys(r, "reference", {"type", "fracture", "alpha_rad", "sigma_inf", "half_length",
                                "pressure"});
    const auto t = as_string(need(r, "type", "reference"), "reference.type");
    if (t == "none")
      cfg.reference.kind = ReferenceSpec::Kind::None;
    else if (t == "inclined_slip")
      cfg.reference.kind = ReferenceSpec::Kind::InclinedSlip;
    else if (t == "sneddon_opening")
      cfg.reference.kind = ReferenceSpec::Kind::SneddonOpening;
    else if (t == "constant_slip")
      cfg.reference.kind = ReferenceSpec::Kind::ConstantSlip;
    else
      fail("reference.type", "expected none, inclined_slip, sneddon_opening or constant_slip");
    opt(r, "fracture", "reference", cfg.reference.fracture, as_int);
    opt(r, "alpha_rad", "reference", cfg.reference.alpha, as_number);
    opt(r, "sigma_inf", "reference", cfg.reference.sigma_inf, as_number);
    opt(r, "half_length", "reference", cfg.reference.half_length, as_number);
    opt(r, "pressure", "reference", cfg.reference.pressure, as_number);
  }
  opt(j, "threads", "", cfg.threads, as_int);
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  if (cfg.mesh.grid) {
    const auto& g = *cfg.mesh.grid;
    json fr = json::array();
    for (const auto& f : g.fractures)
      fr.push_back({{"from", vec_json(f.from)}, {"to", vec_json(f.to)}, {"gap0", f.gap0}});
    j["mesh"] = {{"grid",
                  {{"x", axis_json(g.x)},
                   {"y", axis_json(g.y)},
                   {"pattern", g.pattern == GridPattern::Diagonal ? "diagonal" : "crossed"},
                   {"fractures", fr}}}};
  } else {
    j["mesh"] = {{"file", cfg.mesh.file}};
  }
  j["material"] = {{"E", cfg.material.E}, {"nu", cfg.material.nu}};
  j["friction"] = {{"cohesion", cfg.friction.cohesion},
                   {"friction_angle_rad", cfg.friction.friction_angle}};
  j["bcs"] = json::array();
  for (const auto& bc : cfg.bcs) j["bcs"].push_back(bc_json(bc));
  j["solver"] = {
      {"tolerance", cfg.solver.newton_tol},
      {"max_newton", cfg.solver.max_newton},
      {"max_state_loops", cfg.solver.max_state_loops},
      {"load_steps", cfg.solver.n_load_steps},
      {"linear_solver",
       cfg.solver.linear.kind == LinearSolverConfig::Kind::Direct ? "direct" : "iterative"},
      {"gmres_max_iterations", cfg.solver.linear.max_iterations},
      {"gmres_tolerance", cfg.solver.linear.tolerance},
      {"precondition", cfg.solver.precondition}};
  j["outputs"] = {{"directory", cfg.outputs.directory},
                  {"profiles", cfg.outputs.profiles},
                  {"field", cfg.outputs.field},
                  {"summary", cfg.outputs.summary}};
  static const char* ref_names[] = {"none", "inclined_slip", "sneddon_opening", "constant_slip"};
  j["reference"] = {{"type", ref_names[static_cast<int>(cfg.reference.kind)]},
                    {"fracture", cfg.reference.fracture},
                    {"alpha_rad", cfg.reference.alpha},
                    {"sigma_inf", cfg.reference.sigma_inf},
                    {"half_length", cfg.reference.half_length},
                    {"pressure", cfg.reference.pressure}};
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

}  // namespace fraccon
