// Command-line front end: region queries, inner-integral evaluation and
// comparison, full-integral evaluation and scans, and the seeded MC oracles.
// Every command supports --format csv|json and emits numbers with 17
// significant digits so output round-trips losslessly.
//
// Exit codes: 0 success, 2 domain/usage error, 3 completed but unconverged.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lunepv/full_integral.hpp"
#include "lunepv/geometry.hpp"
#include "lunepv/inner_integral.hpp"
#include "lunepv/mc_oracle.hpp"
#include "lunepv/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Value = std::variant<double, std::uint64_t, bool, std::string>;

struct Field {
  std::string name;
  Value value;
};
using Record = std::vector<Field>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_cell(const Value& v) {
  if (std::holds_alternative<double>(v)) return fmt17(std::get<double>(v));
  if (std::holds_alternative<std::uint64_t>(v)) return std::to_string(std::get<std::uint64_t>(v));
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return std::get<std::string>(v);
}

nlohmann::json to_json(const Record& rec) {
  nlohmann::json j = nlohmann::json::object();
  for (const Field& f : rec) {
    if (std::holds_alternative<double>(f.value))
      j[f.name] = std::get<double>(f.value);
    else if (std::holds_alternative<std::uint64_t>(f.value))
      j[f.name] = std::get<std::uint64_t>(f.value);
    else if (std::holds_alternative<bool>(f.value))
      j[f.name] = std::get<bool>(f.value);
    else
      j[f.name] = std::get<std::string>(f.value);
  }
  return j;
}

void write_csv(std::ostream& os, const std::vector<Record>& rows) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows[0].size(); ++i)
    os << rows[0][i].name << (i + 1 < rows[0].size() ? "," : "\n");
  for (const Record& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      os << csv_cell(r[i].value) << (i + 1 < r.size() ? "," : "\n");
  }
}

// Single records emit one JSON object; multi-row tables an array.
void emit(const std::string& format, const std::string& out_path,
          const std::vector<Record>& rows, bool array) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);  // LF line endings everywhere
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  if (format == "csv") {
    write_csv(*os, rows);
  } else {
    if (array) {
      nlohmann::json arr = nlohmann::json::array();
      for (const Record& r : rows) arr.push_back(to_json(r));
      *os << arr.dump(2) << "\n";
    } else {
      *os << to_json(rows[0]).dump(2) << "\n";
    }
  }
}

const char* region_name(lunepv::geometry::RegionClass rc) {
  using lunepv::geometry::RegionClass;
  switch (rc) {
    case RegionClass::RightMoon:
      return "RightMoon";
    case RegionClass::LeftMoon:
      return "LeftMoon";
    case RegionClass::Lens:
      return "Lens";
    case RegionClass::Exterior:
      return "Exterior";
    default:
      return "Boundary";
  }
}

int effective_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

lunepv::quadrature::QuadConfig quad_config(double tol) {
  lunepv::quadrature::QuadConfig cfg;
  cfg.abs_tol = tol;
  cfg.rel_tol = tol;
  return cfg;
}

Record header_fields(const std::string& command) {
  return {{"command", command}, {"version", std::string(lunepv::kVersion)}};
}

void append_quad_result(Record& rec, const lunepv::quadrature::QuadResult& r) {
  rec.push_back({"value", r.value});
  rec.push_back({"abs_err", r.abs_err});
  rec.push_back({"evals", r.evals});
  rec.push_back({"converged", r.converged});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"principal-value integrals over two moon-shaped regions"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  int jobs = 0;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write output to this file instead of stdout");
  app.add_option("--jobs", jobs, "worker threads (0 = library default)")
      ->envname("LUNEPV_JOBS");

  double x = 0.0, y = 0.0, a = 0.0, center = 0.0;
  double tol = 1e-9;
  double boundary_tol = lunepv::geometry::kBoundaryTol;
  double a_min = 0.0, a_max = 0.0;
  int steps = 1;
  std::uint64_t samples = 1000000, seed = 0;
  bool no_symmetry = false;

  CLI::App* cmd_delta = app.add_subcommand("delta", "classify a point and print its sign");
  cmd_delta->add_option("--x", x, "")->required();
  cmd_delta->add_option("--y", y, "")->required();
  cmd_delta->add_option("--a", a, "")->required();
  cmd_delta->add_option("--tol", boundary_tol, "boundary band half-width")
      ->envname("LUNEPV_TOL");

  CLI::App* cmd_inner = app.add_subcommand("inner", "inner disk integral, numeric");
  cmd_inner->add_option("--x", x, "")->required();
  cmd_inner->add_option("--y", y, "")->required();
  cmd_inner->add_option("--center", center, "disk center abscissa")->required();
  cmd_inner->add_option("--tol", tol, "quadrature tolerance")->envname("LUNEPV_TOL");

  CLI::App* cmd_jordan = app.add_subcommand("jordan", "disputed closed form");
  cmd_jordan->add_option("--x", x, "")->required();
  cmd_jordan->add_option("--y", y, "")->required();
  cmd_jordan->add_option("--a", a, "")->required();
  cmd_jordan->add_option("--tol", tol, "accepted for interface uniformity; the closed form is exact")
      ->envname("LUNEPV_TOL");

  CLI::App* cmd_compare = app.add_subcommand("compare", "numeric vs closed form at both signs");
  cmd_compare->add_option("--x", x, "")->required();
  cmd_compare->add_option("--y", y, "")->required();
  cmd_compare->add_option("--a", a, "")->required();
  cmd_compare->add_option("--tol", tol, "quadrature tolerance")->envname("LUNEPV_TOL");

  double ftol = 1e-4;
  CLI::App* cmd_evalf = app.add_subcommand("eval-f", "full sign-weighted double integral");
  cmd_evalf->add_option("--a", a, "")->required();
  cmd_evalf->add_option("--tol", ftol, "outer tolerance")->envname("LUNEPV_TOL");
  cmd_evalf->add_flag("--no-symmetry", no_symmetry, "integrate both moons independently");

  CLI::App* cmd_scan = app.add_subcommand("scan", "scan F(a) over a grid of a values");
  cmd_scan->add_option("--a-min", a_min, "")->required();
  cmd_scan->add_option("--a-max", a_max, "")->required();
  cmd_scan->add_option("--steps", steps, "grid point count")->check(CLI::PositiveNumber);
  cmd_scan->add_option("--tol", ftol, "outer tolerance")->envname("LUNEPV_TOL");

  CLI::App* cmd_oracle = app.add_subcommand("oracle", "seeded Monte Carlo estimators");
  cmd_oracle->require_subcommand(1);
  cmd_oracle->add_option("--tol", tol, "accepted for interface uniformity; sampling has no tolerance")
      ->envname("LUNEPV_TOL");
  CLI::App* oracle_inner = cmd_oracle->add_subcommand("inner", "inner disk integral");
  oracle_inner->add_option("--x", x, "")->required();
  oracle_inner->add_option("--y", y, "")->required();
  oracle_inner->add_option("--center", center, "")->required();
  oracle_inner->add_option("--samples", samples, "")->required();
  oracle_inner->add_option("--seed", seed, "");
  CLI::App* oracle_f = cmd_oracle->add_subcommand("f", "full integral");
  oracle_f->add_option("--a", a, "")->required();
  oracle_f->add_option("--samples", samples, "")->required();
  oracle_f->add_option("--seed", seed, "");

  // Global options (--format, --out, --jobs) may appear after the
  // subcommand name; let unmatched options bubble up to the app.
  for (CLI::App* sub : app.get_subcommands(nullptr)) {
    sub->fallthrough();
    for (CLI::App* nested : sub->get_subcommands(nullptr)) nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const int used_jobs = effective_jobs(jobs);

  try {
    if (*cmd_delta) {
      const auto rc = lunepv::geometry::classify_point({x, y}, a, boundary_tol);
      const int d = lunepv::geometry::delta({x, y}, a);
      Record rec = header_fields("delta");
      rec.push_back({"x", x});
      rec.push_back({"y", y});
      rec.push_back({"a", a});
      rec.push_back({"tol", boundary_tol});
      rec.push_back({"region", std::string(region_name(rc))});
      rec.push_back({"delta", static_cast<double>(d)});
      emit(format, out_path, {rec}, false);
      return 0;
    }

    if (*cmd_inner) {
      const auto r = lunepv::inner::inner_numeric(x, y, center, quad_config(tol));
      Record rec = header_fields("inner");
      rec.push_back({"x", x});
      rec.push_back({"y", y});
      rec.push_back({"center", center});
      rec.push_back({"tol", tol});
      append_quad_result(rec, r);
      emit(format, out_path, {rec}, false);
      return r.converged ? 0 : 3;
    }

    if (*cmd_jordan) {
      const double v = lunepv::inner::i_jordan(x, y, a);
      Record rec = header_fields("jordan");
      rec.push_back({"x", x});
      rec.push_back({"y", y});
      rec.push_back({"a", a});
      rec.push_back({"value", v});
      emit(format, out_path, {rec}, false);
      return 0;
    }

    if (*cmd_compare) {
      const auto c = lunepv::inner::compare_inner(x, y, a, quad_config(tol));
      Record rec = header_fields("compare");
      rec.push_back({"x", x});
      rec.push_back({"y", y});
      rec.push_back({"a", a});
      rec.push_back({"tol", tol});
      rec.push_back({"i_num_plus", c.i_num_plus});
      rec.push_back({"i_num_minus", c.i_num_minus});
      rec.push_back({"i_jordan", c.i_jordan});
      rec.push_back({"disc_plus", c.disc_plus});
      rec.push_back({"disc_minus", c.disc_minus});
      rec.push_back({"err_bound", c.err_bound});
      emit(format, out_path, {rec}, false);
      return 0;  // a large discrepancy is a result, not an error
    }

    if (*cmd_evalf) {
      lunepv::full::FConfig fc;
      fc.quad = quad_config(ftol);
      fc.exploit_symmetry = !no_symmetry;
      const auto r = lunepv::full::f_eval(a, fc);
      Record rec = header_fields("eval-f");
      rec.push_back({"a", a});
      rec.push_back({"tol", ftol});
      rec.push_back({"jobs", static_cast<std::uint64_t>(used_jobs)});
      rec.push_back({"F", r.value});
      rec.push_back({"abs_err", r.abs_err});
      rec.push_back({"evals", r.evals});
      rec.push_back({"converged", r.converged});
      rec.push_back({"touchpoint_window", r.touchpoint_window});
      emit(format, out_path, {rec}, false);
      return r.converged ? 0 : 3;
    }

    if (*cmd_scan) {
      std::vector<double> grid;
      if (steps == 1) {
        grid.push_back(a_min);
      } else {
        const double h = (a_max - a_min) / (steps - 1);
        for (int i = 0; i < steps; ++i) grid.push_back(a_min + h * i);
      }
      lunepv::full::FConfig fc;
      fc.quad = quad_config(ftol);
      const auto rows = lunepv::full::scan(grid, fc);
      std::vector<Record> recs;
      bool all_converged = true;
      for (const auto& row : rows) {
        Record rec;
        rec.push_back({"a", row.a});
        rec.push_back({"F", row.f.value});
        rec.push_back({"abs_err", row.f.abs_err});
        rec.push_back({"evals", row.f.evals});
        rec.push_back({"converged", row.f.converged});
        rec.push_back({"refinement_delta", row.refinement_delta});
        recs.push_back(rec);
        all_converged = all_converged && row.f.converged;
      }
      emit(format, out_path, recs, true);
      return all_converged ? 0 : 3;
    }

    if (*cmd_oracle) {
      lunepv::mc::McEstimate est;
      Record rec;
      if (*oracle_inner) {
        est = lunepv::mc::mc_estimate_inner(x, y, center, samples, seed);
        rec = header_fields("oracle inner");
        rec.push_back({"x", x});
        rec.push_back({"y", y});
        rec.push_back({"center", center});
      } else {
        est = lunepv::mc::mc_estimate_f(a, samples, seed);
        rec = header_fields("oracle f");
        rec.push_back({"a", a});
      }
      rec.push_back({"requested_samples", samples});
      rec.push_back({"mean", est.mean});
      rec.push_back({"std_err", est.std_err});
      rec.push_back({"samples", est.samples});
      rec.push_back({"seed", est.seed});
      emit(format, out_path, {rec}, false);
      return 0;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
