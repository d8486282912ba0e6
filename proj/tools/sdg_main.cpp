// Command-line driver: run benchmarks through the AMR loop, list them, audit meshes.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>

#include "sdg/adaptivity.hpp"
#include "sdg/benchmarks.hpp"
#include "sdg/config.hpp"
#include "sdg/error.hpp"
#include "sdg/io.hpp"
#include "sdg/kernels.hpp"
#include "sdg/parallel.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFailure = 1;
constexpr int kExitIrregular = 3;

struct RunFlags {
  std::string config;
  std::string benchmark;
  std::optional<int> k;
  std::optional<std::string> mode;
  std::optional<double> theta;
  std::optional<long long> max_dofs;
  std::optional<int> max_iterations;
  std::optional<double> initial_h;
  std::optional<std::string> solver;
  std::optional<std::string> out;
  bool export_fields = false;
  bool export_mesh = false;
  bool dump_system = false;
};

// Flags override the config file; the same validation path is used for both.
sdg::RunConfig build_config(const RunFlags& f) {
  sdg::RunConfig c;
  if (!f.config.empty()) {
    c = sdg::load_run_config(f.config);
  } else if (f.benchmark.empty()) {
    throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'benchmark': give --benchmark or --config");
  }
  if (!f.benchmark.empty()) {
    const auto names = sdg::benchmark_names();
    if (std::find(names.begin(), names.end(), f.benchmark) == names.end()) {
      throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'benchmark': unknown benchmark '" + f.benchmark + "'");
    }
    c.benchmark = f.benchmark;
    c.problem.reset();
  }
  if (f.k) {
    if (*f.k < 1) throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'order': must be >= 1");
    c.amr.order = *f.k;
  }
  if (f.mode) {
    if (*f.mode == "adaptive") c.amr.mode = sdg::RefinementMode::Adaptive;
    else if (*f.mode == "uniform") c.amr.mode = sdg::RefinementMode::Uniform;
    else throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'amr.mode': expected adaptive or uniform");
  }
  if (f.theta) {
    if (!(*f.theta > 0.0 && *f.theta <= 1.0)) {
      throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'amr.theta': must lie in (0, 1]");
    }
    c.amr.theta = *f.theta;
  }
  if (f.max_dofs) {
    if (*f.max_dofs <= 0) throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'amr.max_dofs': must be positive");
    c.amr.max_dofs = static_cast<std::size_t>(*f.max_dofs);
  }
  if (f.max_iterations) {
    if (*f.max_iterations < 0) {
      throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'amr.max_iterations': must be >= 0");
    }
    c.amr.max_iterations = *f.max_iterations;
  }
  if (f.initial_h) {
    if (!(*f.initial_h > 0.0)) throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'initial_h': must be positive");
    c.initial_h = *f.initial_h;
  }
  if (f.solver) {
    if (*f.solver == "condensed") c.amr.solver.method = sdg::SolverMethod::Condensed;
    else if (*f.solver == "full-lu") c.amr.solver.method = sdg::SolverMethod::FullLU;
    else throw sdg::Error(sdg::ErrorCode::ConfigError, "key 'solver': expected condensed or full-lu");
  }
  if (f.out) c.out_dir = *f.out;
  c.export_fields = c.export_fields || f.export_fields;
  c.export_mesh = c.export_mesh || f.export_mesh;
  c.dump_system = c.dump_system || f.dump_system;
  return c;
}

std::string iteration_path(const std::string& dir, const std::string& stem, int it, const std::string& ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03d.%s", stem.c_str(), it, ext.c_str());
  return (std::filesystem::path(dir) / buf).string();
}

int run(const RunFlags& flags) {
  sdg::RunConfig cfg;
  try {
    cfg = build_config(flags);
  } catch (const sdg::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const sdg::Benchmark bench = cfg.resolve();
  std::filesystem::create_directories(cfg.out_dir);
  const sdg::PolygonalMesh mesh = sdg::build_initial_mesh(bench.problem.domain, bench.initial_h);

  std::cout << "benchmark " << bench.name << "  k=" << cfg.amr.order << "  mode=" << sdg::to_string(cfg.amr.mode)
            << "  theta=" << cfg.amr.theta << "  max_dofs=" << cfg.amr.max_dofs
            << "  simd=" << sdg::kernels::to_string(sdg::kernels::active()) << "  threads=" << sdg::thread_count()
            << '\n';

  auto observer = [&](const sdg::IterationState& s) {
    if (cfg.export_fields) {
      sdg::write_solution_vtk(iteration_path(cfg.out_dir, "solution", s.iteration, "vtk"), s.mesh, s.dofs,
                              s.solution);
      if (!s.dofs.W.slot_edge.empty()) {
        sdg::write_fracture_vtk(iteration_path(cfg.out_dir, "fracture", s.iteration, "vtk"), s.mesh, s.dofs,
                                s.solution);
      }
    }
    if (cfg.export_mesh) sdg::write_mesh_json(iteration_path(cfg.out_dir, "mesh", s.iteration, "json"), s.mesh);
    if (cfg.dump_system) sdg::write_system_dump(iteration_path(cfg.out_dir, "system", s.iteration, "txt"), s.system);
    std::printf("  it %3d  N %8zu  elements %7zu  eta %.6e", s.iteration, s.dofs.n_free(), s.mesh.elements.size(),
                s.estimate.eta);
    std::printf("\n");
    std::fflush(stdout);
  };

  const sdg::ConvergenceHistory history =
      sdg::amr_loop(mesh, bench.problem, bench.exact ? &*bench.exact : nullptr, cfg.amr, observer);
  const std::string csv = (std::filesystem::path(cfg.out_dir) / "history.csv").string();
  sdg::write_history_csv(csv, history);
  sdg::write_convergence_svg((std::filesystem::path(cfg.out_dir) / "convergence.svg").string(), history,
                             cfg.amr.order, bench.name + ", k = " + std::to_string(cfg.amr.order));
  std::cout << "wrote " << csv << '\n';
  if (history.halted) {
    std::cerr << "stopped early: " << history.halt_reason << '\n';
    return kExitFailure;
  }
  return 0;
}

int list_benchmarks() {
  for (const std::string& name : sdg::benchmark_names()) {
    const sdg::Benchmark b = sdg::make_benchmark(name);
    std::printf("%-12s %s (initial h = %g%s)\n", name.c_str(), b.description.c_str(), b.initial_h,
                b.exact ? ", exact solution" : "");
  }
  return 0;
}

int check(const std::string& benchmark, int levels, double h_override) {
  sdg::Benchmark b;
  try {
    b = sdg::make_benchmark(benchmark);
  } catch (const sdg::Error& e) {
    std::cerr << "config error: key 'benchmark': " << e.what() << '\n';
    return kExitConfig;
  }
  sdg::PolygonalMesh mesh = sdg::build_initial_mesh(b.problem.domain, h_override > 0.0 ? h_override : b.initial_h);
  for (int l = 0; l < levels; ++l) {
    std::vector<int> all(mesh.elements.size());
    std::iota(all.begin(), all.end(), 0);
    mesh = sdg::refine(mesh, all);
  }
  const sdg::RegularityReport r = sdg::check_regularity(mesh);
  std::printf("elements %zu  triangles %zu  edges %zu\n", mesh.elements.size(), mesh.triangles.size(),
              mesh.edges.size());
  for (auto kind : {sdg::EdgeKind::Boundary, sdg::EdgeKind::Interior, sdg::EdgeKind::Dual, sdg::EdgeKind::Fracture}) {
    std::printf("  %-9s %zu\n", sdg::to_string(kind), mesh.count(kind));
  }
  std::printf("rho_S %.6f (element %d)  rho_E %.6f (element %d)\n", r.rho_S, r.worst_rho_S_element, r.rho_E,
              r.worst_rho_E_element);
  std::printf("h_max %.6g  h_min %.6g  max hanging nodes per side %d\n", r.h_max, r.h_min,
              sdg::max_hanging_nodes_per_side(mesh));
  std::printf("regularity %s\n", r.below_floor ? "BELOW FLOOR" : "ok");
  return r.below_floor ? kExitIrregular : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staggered DG solver for Darcy flow in fractured porous media"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run_cmd = app.add_subcommand("run", "solve a benchmark through the adaptive loop");
  run_cmd->add_option("--config", flags.config, "JSON run configuration");
  run_cmd->add_option("--benchmark", flags.benchmark, "benchmark name (see list-benchmarks)");
  run_cmd->add_option("--k", flags.k, "polynomial order");
  run_cmd->add_option("--mode", flags.mode, "adaptive or uniform");
  run_cmd->add_option("--theta", flags.theta, "marking fraction in (0, 1]");
  run_cmd->add_option("--max-dofs", flags.max_dofs, "stop before the system exceeds this size");
  run_cmd->add_option("--max-iterations", flags.max_iterations, "number of refinement steps");
  run_cmd->add_option("--initial-h", flags.initial_h, "initial grid spacing");
  run_cmd->add_option("--solver", flags.solver, "condensed or full-lu");
  run_cmd->add_option("--out", flags.out, "output directory");
  run_cmd->add_flag("--export-fields", flags.export_fields, "write VTK fields per iteration");
  run_cmd->add_flag("--export-mesh", flags.export_mesh, "write mesh JSON per iteration");
  run_cmd->add_flag("--dump-system", flags.dump_system, "write the assembled system per iteration");

  app.add_subcommand("list-benchmarks", "list the built-in benchmarks");

  std::string check_name;
  int check_levels = 0;
  double check_h = 0.0;
  CLI::App* check_cmd = app.add_subcommand("check", "mesh and regularity audit");
  check_cmd->add_option("--benchmark", check_name, "benchmark name")->required();
  check_cmd->add_option("--levels", check_levels, "uniform refinement levels");
  check_cmd->add_option("--initial-h", check_h, "initial grid spacing override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return run(flags);
    if (check_cmd->parsed()) return check(check_name, check_levels, check_h);
    return list_benchmarks();
  } catch (const sdg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == sdg::ErrorCode::ConfigError ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
