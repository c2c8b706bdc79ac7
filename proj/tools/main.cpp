#include "fraccon/cli.hpp"
#include "fraccon/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"2D frictional contact solver for fractured elastic media"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "assembly threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "solve the problem described by a JSON config");
  run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

  std::string preset, report, dump, out_dir;
  auto* bench_cmd = app.add_subcommand("bench", "run a built-in benchmark preset");
  bench_cmd->add_option("preset", preset, "preset name")
      ->required()
      ->check(CLI::IsMember(fraccon::preset_names()));
  bench_cmd->add_option("--report", report, "write the summary JSON here as well");
  bench_cmd->add_option("--output-dir", out_dir, "export directory (default out/<preset>)");
  bench_cmd->add_option("--dump-config", dump, "write the preset config and exit");

  std::string mesh_path;
  auto* info_cmd = app.add_subcommand("mesh-info", "print mesh statistics");
  info_cmd->add_option("meshfile", mesh_path, "mesh file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto cfg = fraccon::parse_config(config_path);
      if (app.count("--threads")) cfg.threads = threads;
      return fraccon::run(cfg, std::cout);
    }
    if (*bench_cmd) {
      auto cfg = fraccon::preset_config(preset);
      cfg.threads = threads;
      if (!out_dir.empty()) cfg.outputs.directory = out_dir;
      if (!dump.empty()) {
        std::ofstream(dump) << fraccon::serialize_config(cfg);
        return 0;
      }
      const int status = fraccon::run(cfg, std::cout);
      if (!report.empty()) {
        const std::filesystem::path src =
            std::filesystem::path(cfg.outputs.directory) / (cfg.name + "_summary.json");
        std::filesystem::copy_file(src, report, std::filesystem::copy_options::overwrite_existing);
      }
      return status;
    }
    if (*info_cmd) {
      fraccon::mesh_info(fraccon::load_mesh(mesh_path), std::cout);
      return 0;
    }
  } catch (const fraccon::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const fraccon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
