/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/cli_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fsi/error.hpp"
#include "fsi/vtk.hpp"

namespace fsi {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw InvalidArgument("config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw InvalidArgument("config: '" + key + "' expects a boolean, got '" + text + "'");
}

std::string level_file(const std::string& dir, const std::string& stem, int level, const char* ext) {
  return (std::filesystem::path(dir) / (stem + "_level" + std::to_string(level) + ext)).string();
}

void write_grid_csv(const std::string& path, const PlateField& w, int n) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "x,y,value\r\n";
  char buf[96];
  for (const GridSample& s : sample_grid(w, n)) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.9e\r\n", s.x, s.y, s.value);
    out << buf;
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

void export_level(const RunConfig& cfg, const LevelRun& run, std::ostream& log) {
  const int level = run.record.level;
  if (cfg.export_vtk) {
    const std::string fluid = level_file(cfg.output_dir, "fluid", level, ".vtk");
    const std::string plate = level_file(cfg.output_dir, "plate", level, ".vtk");
    write_vtk_fluid(fluid, run.solution->uh, run.solution->ph);
    write_vtk_plate(plate, run.solution->w1h, "w1h");
    log << "wrote " << fluid << "\nwrote " << plate << '\n';
  }
  if (cfg.export_grid) {
    const std::string grid = level_file(cfg.output_dir, "w1h_grid", level, ".csv");
    write_grid_csv(grid, run.solution->w1h, cfg.grid_resolution);
    log << "wrote " << grid << '\n';
  }
}

void check_tolerance(const RunConfig& cfg, const LevelRecord& r) {
  const double worst = std::max({r.schur_mismatch, r.w1_integral, r.trace_mismatch});
  if (worst > cfg.solver_tolerance)
    throw SolverError("level " + std::to_string(r.level) + " [coupled_solver]: consistency residual " +
                      std::to_string(worst) + " exceeds solver_tolerance");
}

void print_record(const LevelRecord& r, std::ostream& log) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "level %d: %d triangles, %d tetrahedra, %d plate unknowns, %d fluid unknowns\n"
                "  plate  H2 %.4e  H1 %.4e  L2 %.4e\n"
                "  fluid  L2 %.4e  H1 %.4e  p %.4e\n"
                "  c~ %.3e  energy residual %.3e (relative %.3e)\n",
                r.level, r.plate_elements, r.fluid_elements, r.plate_dofs, r.fluid_unknowns, r.plate.h2, r.plate.h1,
                r.plate.l2, r.fluid.l2, r.fluid.h1, r.fluid.p, r.c_tilde, r.energy.residual, r.energy.relative);
  log << buf;
}

ManufacturedCase case_for(const RunConfig& cfg) { return manufactured_case(cfg.lambda, cfg.rho); }

int command_converge(const RunConfig& cfg, std::ostream& log) {
  StudyOptions opt = cfg.study_options();
  const ManufacturedCase mc = case_for(cfg);
  ConvergenceReport report;
  report.case_name = cfg.case_name;
  report.lambda = cfg.lambda;
  report.rho = cfg.rho;
  report.h2_norm = cfg.h2_norm;
  for (int level : cfg.levels) {
    LevelRun run = run_level(mc, level, opt);
    check_tolerance(cfg, run.record);
    export_level(cfg, run, log);
    report.levels.push_back(run.record);
  }
  write_rate_table(report, log);
  if (cfg.export_csv) {
    const auto dir = std::filesystem::path(cfg.output_dir);
    std::ofstream csv(dir / "report.csv", std::ios::binary);
    std::ofstream txt(dir / "rates.txt", std::ios::binary);
    if (!csv || !txt) throw IoError("cannot write report files in '" + cfg.output_dir + "'");
    write_report_csv(report, csv);
    write_rate_table(report, txt);
    if (!csv || !txt) throw IoError("write to report files failed");
    log << "wrote " << (dir / "report.csv").string() << "\nwrote " << (dir / "rates.txt").string() << '\n';
  }
  return kExitOk;
}

int command_solve(const RunConfig& cfg, std::ostream& log) {
  const StudyOptions opt = cfg.study_options();
  LevelRun run = run_level(case_for(cfg), cfg.level, opt);
  print_record(run.record, log);
  check_tolerance(cfg, run.record);
  export_level(cfg, run, log);
  if (cfg.export_csv) {
    ConvergenceReport report;
    report.case_name = cfg.case_name;
    report.lambda = cfg.lambda;
    report.rho = cfg.rho;
    report.h2_norm = cfg.h2_norm;
    report.levels.push_back(run.record);
    const std::string path = level_file(cfg.output_dir, "solve", cfg.level, ".csv");
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + path + "' for writing");
    write_report_csv(report, csv);
    log << "wrote " << path << '\n';
  }
  return kExitOk;
}

int command_infsup(const RunConfig& cfg, std::ostream& log) {
  const auto rows = infsup_study(cfg.levels, cfg.reference_level);
  log << "discrete inf-sup witness beta_h = |lap xi_h| (reference level " << cfg.reference_level << ")\n";
  write_infsup_table(rows, log);
  if (cfg.export_csv) {
    const auto path = std::filesystem::path(cfg.output_dir) / "infsup.csv";
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + path.string() + "' for writing");
    csv << "level,beta,integral,identity_error,error,order\r\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e,%.3e,%.6e,%.4f\r\n", r.level, r.beta, r.integral,
                    r.identity_error, r.error, r.order);
      csv << buf;
    }
    log << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int command_mesh_dump(const RunConfig& cfg, std::ostream& log) {
  const Mesh2 m2 = build_square_mesh(cfg.level);
  const Mesh3 m3 = build_cube_mesh(cfg.level);
  const std::string p2 = level_file(cfg.output_dir, "square_mesh", cfg.level, ".vtk");
  const std::string p3 = level_file(cfg.output_dir, "cube_mesh", cfg.level, ".vtk");
  write_vtk_mesh(p2, m2);
  write_vtk_mesh(p3, m3);
  log << "square: " << m2.num_vertices() << " vertices, " << m2.num_edges() << " edges, " << m2.num_triangles()
      << " triangles\ncube: " << m3.num_vertices() << " vertices, " << m3.num_edges() << " edges, " << m3.num_faces()
      << " faces, " << m3.num_tets() << " tetrahedra\nwrote " << p2 << "\nwrote " << p3 << '\n';
  return kExitOk;
}

}  // namespace

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>("levels", item));
  if (out.empty()) throw InvalidArgument("config: 'levels' is empty");
  return out;
}

void RunConfig::set(const std::string& key_in, const std::string& value) {
  std::string key = trim(key_in);
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "case") {
    case_name = trim(value);
  } else if (key == "levels") {
    levels = parse_levels(value);
  } else if (key == "level") {
    level = parse_number<int>(key, value);
  } else if (key == "lambda") {
    lambda = parse_number<double>(key, value);
  } else if (key == "rho") {
    rho = parse_number<double>(key, value);
  } else if (key == "plate_load_degree") {
    plate_load_degree = parse_number<int>(key, value);
  } else if (key == "fluid_load_degree") {
    fluid_load_degree = parse_number<int>(key, value);
  } else if (key == "plate_error_degree") {
    plate_error_degree = parse_number<int>(key, value);
  } else if (key == "fluid_error_degree") {
    fluid_error_degree = parse_number<int>(key, value);
  } else if (key == "fluid_level_offset") {
    fluid_level_offset = parse_number<int>(key, value);
  } else if (key == "solver_tolerance") {
    solver_tolerance = parse_number<double>(key, value);
  } else if (key == "out" || key == "output_dir") {
    output_dir = trim(value);
  } else if (key == "export") {
    export_csv = export_vtk = export_grid = false;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t == "csv") export_csv = true;
      else if (t == "vtk") export_vtk = true;
      else if (t == "grid") export_grid = true;
      else if (t == "none" || t.empty()) continue;
      else throw InvalidArgument("config: unknown export kind '" + t + "'");
    }
  } else if (key == "grid_resolution") {
    grid_resolution = parse_number<int>(key, value);
  } else if (key == "deep") {
    deep = parse_bool(key, value);
  } else if (key == "quiet") {
    quiet = parse_bool(key, value);
  } else if (key == "h2_norm") {
    const std::string t = trim(value);
    if (t == "hessian") h2_norm = H2Norm::Hessian;
    else if (t == "laplacian") h2_norm = H2Norm::Laplacian;
    else throw InvalidArgument("config: h2_norm must be 'hessian' or 'laplacian'");
  } else if (key == "reference_level") {
    reference_level = parse_number<int>(key, value);
  } else {
    throw InvalidArgument("config: unknown key '" + key_in + "'");
  }
}

void RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config " + path + ":" + std::to_string(number) + ": expected key = value");
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

void RunConfig::validate(const std::string& command) const {
  if (!(lambda > 0.0)) throw InvalidArgument("config: lambda must be positive");
  if (!(rho >= 0.0)) throw InvalidArgument("config: rho must be nonnegative");
  if (case_name == "paper-rho0") {
    if (rho != 0.0) throw InvalidArgument("config: case paper-rho0 requires rho = 0");
  } else if (case_name != "manufactured-rho") {
    throw InvalidArgument("config: unknown case '" + case_name + "' (paper-rho0, manufactured-rho)");
  }
  if (levels.empty()) throw InvalidArgument("config: levels must be nonempty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw InvalidArgument("config: levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw InvalidArgument("config: levels must be strictly increasing");
  }
  if (level < 1) throw InvalidArgument("config: level must be positive");
  if (!(solver_tolerance > 0.0)) throw InvalidArgument("config: solver_tolerance must be positive");
  if (grid_resolution < 1) throw InvalidArgument("config: grid_resolution must be positive");
  if (fluid_level_offset < 0 || fluid_level_offset > 4) throw InvalidArgument("config: fluid_level_offset must lie in [0, 4]");
  if (command == "converge" && levels.size() < 2) throw InvalidArgument("config: converge needs at least two levels");
  const int coupled_max = command == "solve" ? level : command == "converge" ? levels.back() : 0;
  if ((coupled_max << fluid_level_offset) > 8 && !deep)
    throw InvalidArgument("config: fluid levels above 8 need --deep (memory grows past several GB)");
  if (command == "infsup" && reference_level <= levels.back())
    throw InvalidArgument("config: reference_level must exceed every study level");
}

StudyOptions RunConfig::study_options() const {
  StudyOptions o;
  if (!quiet) o.progress = [](const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); };
  o.levels = levels;
  o.lambda = lambda;
  o.rho = rho;
  o.h2_norm = h2_norm;
  o.fluid_level_offset = fluid_level_offset;
  o.plate_error_degree = plate_error_degree;
  o.fluid_error_degree = fluid_error_degree;
  o.coupled.plate_load_degree = plate_load_degree;
  o.coupled.fluid_load_degree = fluid_load_degree;
  return o;
}

int run(const RunConfig& config, const std::string& command, std::ostream& log, std::ostream& err) {
  try {
    config.validate(command);
    std::filesystem::create_directories(config.output_dir);
    RunConfig cfg = config;
    if (command == "converge") {
      if (!config.quiet) log << "convergence study, case " << cfg.case_name << ", lambda " << cfg.lambda << '\n';
      return command_converge(cfg, log);
    }
    if (command == "solve") return command_solve(cfg, log);
    if (command == "infsup") return command_infsup(cfg, log);
    if (command == "mesh-dump") return command_mesh_dump(cfg, log);
    throw InvalidArgument("unknown command '" + command + "' (converge, solve, infsup, mesh-dump)");
  } catch (const InvalidArgument& e) {
    err << "error: [invalid-argument] " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoError& e) {
    err << "error: [io] " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: [io] " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    const bool tol = std::string(e.what()).find("solver_tolerance") != std::string::npos;
    err << "error: [solver] " << e.what() << '\n';
    return tol ? kExitTolerance : kExitSolver;
  } catch (const std::bad_alloc&) {
    err << "error: [memory] allocation failed; reduce the levels\n";
    return kExitSolver;
  }
}

}  // namespace fsi
