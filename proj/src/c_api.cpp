#include "pbp/pbp.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <sstream>
#include <string>

#include "pbp/constructions.hpp"
#include "pbp/errors.hpp"
#include "pbp/io.hpp"

struct pbp_path {
  pbp::SamplePath path;
};

struct pbp_drift {
  pbp::DriftSpec spec;
};

struct pbp_solution {
  pbp::SolutionPath sol;
};

namespace {

thread_local std::string last_error;

pbp_status status_of(pbp::ErrorKind k) {
  switch (k) {
    case pbp::ErrorKind::usage: return PBP_USAGE_ERROR;
    case pbp::ErrorKind::singular_point: return PBP_SINGULAR_POINT;
    case pbp::ErrorKind::step_underflow: return PBP_STEP_UNDERFLOW;
    case pbp::ErrorKind::side_violation: return PBP_SIDE_VIOLATION;
    case pbp::ErrorKind::non_finite: return PBP_NON_FINITE;
    case pbp::ErrorKind::degenerate_increment: return PBP_DEGENERATE_INCREMENT;
    case pbp::ErrorKind::invalid_branch: return PBP_INVALID_BRANCH;
    case pbp::ErrorKind::junction_mismatch: return PBP_JUNCTION_MISMATCH;
    case pbp::ErrorKind::io: return PBP_IO_ERROR;
  }
  return PBP_INTERNAL_ERROR;
}

template <class Fn>
pbp_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return PBP_OK;
  } catch (const pbp::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "InternalError: out of memory";
  } catch (const std::exception& e) {
    last_error = std::string("InternalError: ") + e.what();
  } catch (...) {
    last_error = "InternalError: unknown exception";
  }
  return PBP_INTERNAL_ERROR;
}

void need(const void* p, const char* what) {
  if (p == nullptr) pbp::fail(pbp::ErrorKind::usage, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pbp::SolveOptions to_options(const pbp_solve_options* o) {
  pbp::SolveOptions r;
  if (o != nullptr) {
    r.h_base = o->h_base;
    r.max_refine_depth = o->max_refine_depth;
    r.sing_guard = o->sing_guard;
    r.pin_window = o->pin_window;
    r.boot_floor = o->boot_floor;
    r.step_growth_cap = o->step_growth_cap;
    r.pin_tolerance = o->pin_tolerance;
    r.quad_cells_per_step = o->quad_cells_per_step;
  }
  r.validate();
  return r;
}

pbp_solve_options from_options(const pbp::SolveOptions& o) {
  return pbp_solve_options{o.h_base,     o.max_refine_depth, o.sing_guard,    o.pin_window,
                           o.boot_floor, o.step_growth_cap,  o.pin_tolerance, o.quad_cells_per_step};
}

pbp::Side to_side(pbp_side s) {
  switch (s) {
    case PBP_SIDE_NONE: return pbp::Side::none;
    case PBP_SIDE_ABOVE: return pbp::Side::above;
    case PBP_SIDE_BELOW: return pbp::Side::below;
  }
  pbp::fail(pbp::ErrorKind::usage, "invalid side");
}

template <class T>
void emit(T** out, T* value) {
  *out = value;
}

}  // namespace

extern "C" {

const char* pbp_version(void) { return "0.1.0"; }

const char* pbp_status_name(pbp_status status) {
  switch (status) {
    case PBP_OK: return "Ok";
    case PBP_USAGE_ERROR: return "UsageError";
    case PBP_SINGULAR_POINT: return "SingularPoint";
    case PBP_STEP_UNDERFLOW: return "StepUnderflow";
    case PBP_SIDE_VIOLATION: return "SideViolation";
    case PBP_NON_FINITE: return "NonFinite";
    case PBP_DEGENERATE_INCREMENT: return "DegenerateIncrement";
    case PBP_INVALID_BRANCH: return "InvalidBranch";
    case PBP_JUNCTION_MISMATCH: return "JunctionMismatch";
    case PBP_IO_ERROR: return "IoError";
    case PBP_INTERNAL_ERROR: return "InternalError";
  }
  return "Unknown";
}

const char* pbp_last_error(void) { return last_error.c_str(); }

void pbp_string_free(char* s) { std::free(s); }

pbp_solve_options pbp_solve_options_default(void) { return from_options(pbp::SolveOptions{}); }

pbp_solve_options pbp_solve_options_with_step(double h_base) {
  return from_options(pbp::SolveOptions::with_step(h_base));
}

pbp_status pbp_path_brownian(double horizon, int64_t cells, uint64_t seed, uint64_t stream, pbp_path** out) {
  return guarded([&] {
    need(out, "out");
    auto p = pbp::sample_brownian(pbp::make_uniform_grid(horizon, cells), pbp::RngSpec{seed, stream});
    emit(out, new pbp_path{std::move(p)});
  });
}

pbp_status pbp_path_zero(double horizon, int64_t cells, pbp_path** out) {
  return guarded([&] {
    need(out, "out");
    emit(out, new pbp_path{pbp::zero_driver(horizon, cells)});
  });
}

pbp_status pbp_path_from_arrays(const double* times, const double* values, size_t n, int is_driver, pbp_path** out) {
  return guarded([&] {
    need(out, "out");
    need(times, "times");
    need(values, "values");
    pbp::SamplePath p(pbp::TimeGrid(std::vector<double>(times, times + n)), std::vector<double>(values, values + n),
                      is_driver ? pbp::PathKind::driver : pbp::PathKind::solution);
    emit(out, new pbp_path{std::move(p)});
  });
}

pbp_status pbp_path_refine(const pbp_path* path, double a, double b, int levels, uint64_t seed, uint64_t stream,
                           pbp_path** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    emit(out, new pbp_path{pbp::refine_bridge(path->path, a, b, levels, pbp::RngSpec{seed, stream})});
  });
}

pbp_status pbp_path_read_csv(const char* file, int is_driver, pbp_path** out) {
  return guarded([&] {
    need(file, "file");
    need(out, "out");
    std::istringstream in(pbp::read_text_file(file));
    emit(out, new pbp_path{pbp::read_path_csv(in, is_driver ? pbp::PathKind::driver : pbp::PathKind::solution)});
  });
}

pbp_status pbp_path_write_csv(const pbp_path* path, const char* file) {
  return guarded([&] {
    need(path, "path");
    need(file, "file");
    std::ostringstream os;
    pbp::write_path_csv(path->path, os);
    pbp::write_text_file(file, os.str());
  });
}

pbp_status pbp_path_to_csv_string(const pbp_path* path, char** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ostringstream os;
    pbp::write_path_csv(path->path, os);
    *out = dup_string(os.str());
  });
}

pbp_status pbp_path_to_json(const pbp_path* path, char** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = dup_string(pbp::path_to_json(path->path).dump());
  });
}

pbp_status pbp_path_from_json(const char* json, pbp_path** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    emit(out, new pbp_path{pbp::path_from_json(pbp::parse_json(json, "path JSON"))});
  });
}

size_t pbp_path_size(const pbp_path* path) { return path == nullptr ? 0 : path->path.size(); }

pbp_status pbp_path_copy(const pbp_path* path, double* times, double* values, size_t capacity) {
  return guarded([&] {
    need(path, "path");
    const std::size_t n = std::min(capacity, path->path.size());
    if (times != nullptr) std::memcpy(times, path->path.times().data(), n * sizeof(double));
    if (values != nullptr) std::memcpy(values, path->path.values().data(), n * sizeof(double));
  });
}

pbp_status pbp_path_eval(const pbp_path* path, double t, double* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = path->path(t);
  });
}

void pbp_path_free(pbp_path* path) { delete path; }

pbp_status pbp_drift_from_json(const char* json, pbp_drift** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    emit(out, new pbp_drift{pbp::drift_from_json(pbp::parse_json(json, "drift JSON"))});
  });
}

pbp_status pbp_drift_to_json(const pbp_drift* drift, char** out) {
  return guarded([&] {
    need(drift, "drift");
    need(out, "out");
    *out = dup_string(pbp::drift_to_json(drift->spec).dump());
  });
}

pbp_status pbp_drift_eval(const pbp_drift* drift, double t, double x, double* out) {
  return guarded([&] {
    need(drift, "drift");
    need(out, "out");
    *out = pbp::eval_drift(drift->spec, t, x);
  });
}

void pbp_drift_free(pbp_drift* drift) { delete drift; }

pbp_status pbp_solve(const pbp_drift* drift, const pbp_path* driver, double x0, double t0, double t1, pbp_side side,
                     const double* stop_level, const pbp_solve_options* opts, pbp_solution** out) {
  return guarded([&] {
    need(drift, "drift");
    need(driver, "driver");
    need(out, "out");
    pbp::Side s = to_side(side);
    if (s == pbp::Side::none) s = drift->spec.intrinsic_side();
    std::optional<double> stop;
    if (stop_level != nullptr) stop = *stop_level;
    auto sol = pbp::solve_pathwise(drift->spec, driver->path, x0, pbp::Window{t0, t1}, to_options(opts), s, stop);
    emit(out, new pbp_solution{std::move(sol)});
  });
}

pbp_status pbp_construct_bridge(int nonneg, double y, const pbp_path* driver, const pbp_solve_options* opts,
                                pbp_solution** out) {
  return guarded([&] {
    need(driver, "driver");
    need(out, "out");
    auto sol = pbp::bridge_solution(nonneg ? pbp::Sign::nonneg : pbp::Sign::nonpos, y, driver->path, to_options(opts));
    emit(out, new pbp_solution{std::move(sol)});
  });
}

pbp_status pbp_construct_bes3(double x_start, double center, pbp_side side, const pbp_path* driver, double t0,
                              double t1, const pbp_solve_options* opts, pbp_solution** out) {
  return guarded([&] {
    need(driver, "driver");
    need(out, "out");
    const pbp::Side s = to_side(side);
    pbp::require(s != pbp::Side::none, "Bessel extension needs side above or below");
    auto sol = pbp::bes3_extension(x_start, center, s, driver->path, pbp::Window{t0, t1}, to_options(opts));
    emit(out, new pbp_solution{std::move(sol)});
  });
}

pbp_status pbp_construct_ce1(const pbp_path* driver, pbp_ce1_branch branch, const pbp_solve_options* opts,
                             pbp_solution** out) {
  return guarded([&] {
    need(driver, "driver");
    need(out, "out");
    pbp::Ce1Branch b;
    switch (branch) {
      case PBP_CE1_AUTO: b = pbp::Ce1Branch::automatic; break;
      case PBP_CE1_POSITIVE: b = pbp::Ce1Branch::positive; break;
      case PBP_CE1_NEGATIVE: b = pbp::Ce1Branch::negative; break;
      default: pbp::fail(pbp::ErrorKind::usage, "invalid CE1 branch");
    }
    emit(out, new pbp_solution{pbp::construct_ce1(driver->path, b, to_options(opts))});
  });
}

pbp_status pbp_construct_ce2(const pbp_path* driver, pbp_ce2_variant variant, const pbp_solve_options* opts,
                             pbp_solution** out) {
  return guarded([&] {
    need(driver, "driver");
    need(out, "out");
    pbp::require(variant == PBP_CE2_WEAK || variant == PBP_CE2_ALTERNATIVE, "invalid CE2 variant");
    const auto v = variant == PBP_CE2_WEAK ? pbp::Ce2Variant::weak : pbp::Ce2Variant::alternative;
    emit(out, new pbp_solution{pbp::construct_ce2(driver->path, v, to_options(opts))});
  });
}

pbp_status pbp_residual_sup(const pbp_drift* drift, const pbp_path* candidate, const pbp_path* driver, double t0,
                            double t1, const pbp_solve_options* opts, double* out) {
  return guarded([&] {
    need(drift, "drift");
    need(candidate, "candidate");
    need(driver, "driver");
    need(out, "out");
    const auto o = to_options(opts);
    *out = pbp::residual_report(drift->spec, candidate->path, driver->path, pbp::Window{t0, t1}, o.quad_cells_per_step, o)
               .sup;
  });
}

pbp_status pbp_solution_check(pbp_solution* solution, const pbp_drift* drift, const pbp_path* driver,
                              const pbp_solve_options* opts, double* out) {
  return guarded([&] {
    need(solution, "solution");
    need(drift, "drift");
    need(driver, "driver");
    const auto o = to_options(opts);
    const pbp::Window w{solution->sol.start(), solution->sol.horizon()};
    const double r = pbp::residual_sup(drift->spec, solution->sol, driver->path, w, o.quad_cells_per_step, o);
    solution->sol.residual = r;
    if (out != nullptr) *out = r;
  });
}

pbp_status pbp_solution_path(const pbp_solution* solution, pbp_path** out) {
  return guarded([&] {
    need(solution, "solution");
    need(out, "out");
    emit(out, new pbp_path{solution->sol.path});
  });
}

pbp_status pbp_solution_sidecar_json(const pbp_solution* solution, char** out) {
  return guarded([&] {
    need(solution, "solution");
    need(out, "out");
    *out = dup_string(pbp::sidecar_to_json(solution->sol).dump());
  });
}

void pbp_solution_free(pbp_solution* solution) { delete solution; }

pbp_status pbp_verify_suite(const char* config_json, int include_runtime, char** jsonl_out, int* all_pass) {
  return guarded([&] {
    need(config_json, "config_json");
    need(jsonl_out, "jsonl_out");
    const auto cfg = pbp::suite_config_from_json(pbp::parse_json(config_json, "suite config"));
    const auto reports = pbp::run_suite(cfg);
    std::string text;
    for (const auto& r : reports) text += pbp::report_to_json(r, include_runtime != 0).dump() + "\n";
    *jsonl_out = dup_string(text);
    if (all_pass != nullptr) *all_pass = pbp::suite_verdict(reports) ? 1 : 0;
  });
}

pbp_status pbp_suite_config_resolve(const char* config_json, char** out) {
  return guarded([&] {
    need(config_json, "config_json");
    need(out, "out");
    const auto cfg = pbp::suite_config_from_json(pbp::parse_json(config_json, "suite config"));
    *out = dup_string(pbp::suite_config_to_json(cfg).dump());
  });
}

}  // extern "C"
