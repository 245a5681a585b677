#include "tvsdp/tvsdp.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "tvsdp/initializer.hpp"
#include "tvsdp/problem.hpp"
#include "tvsdp/tracker.hpp"

namespace {

thread_local std::string g_last_error;

tvsdp_status fail(tvsdp_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

template <typename Fn>
tvsdp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(TVSDP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TVSDP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TVSDP_ERR_NUMERICAL, e.what());
  } catch (...) {
    return fail(TVSDP_ERR_INTERNAL, "unexpected exception");
  }
}

tvsdp_status copy_out(const double* src, size_t count, double* buf, size_t len) {
  if (buf == nullptr) return fail(TVSDP_ERR_INVALID_ARGUMENT, "null output buffer");
  if (len < count) return fail(TVSDP_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  std::memcpy(buf, src, count * sizeof(double));
  return TVSDP_OK;
}

}  // namespace

struct tvsdp_problem {
  tvsdp::TVProblem impl;
};

struct tvsdp_solution {
  tvsdp::InitResult impl;
};

struct tvsdp_trajectory {
  tvsdp::Trajectory impl;
};

extern "C" {

const char* tvsdp_status_name(tvsdp_status status) {
  switch (status) {
    case TVSDP_OK: return "ok";
    case TVSDP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TVSDP_ERR_IO: return "i/o error";
    case TVSDP_ERR_NUMERICAL: return "numerical error";
    case TVSDP_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case TVSDP_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* tvsdp_last_error(void) { return g_last_error.c_str(); }

const char* tvsdp_version(void) { return "0.1.0"; }

tvsdp_status tvsdp_problem_create_maxcut(int n, double density, uint64_t seed,
                                         tvsdp_problem** out) {
  if (out == nullptr) return fail(TVSDP_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] {
    *out = new tvsdp_problem{tvsdp::make_maxcut(n, density, seed)};
    return TVSDP_OK;
  });
}

tvsdp_status tvsdp_problem_create_synthetic(int n, int r, int m, uint64_t seed,
                                            tvsdp_problem** out) {
  if (out == nullptr) return fail(TVSDP_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] {
    *out = new tvsdp_problem{tvsdp::make_synthetic(n, r, m, seed)};
    return TVSDP_OK;
  });
}

tvsdp_status tvsdp_problem_read_json(const char* path, tvsdp_problem** out) {
  if (out == nullptr || path == nullptr)
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "null path or output handle");
  return guarded([&]() -> tvsdp_status {
    try {
      *out = new tvsdp_problem{tvsdp::read_problem(path)};
    } catch (const std::runtime_error& e) {
      return fail(TVSDP_ERR_IO, e.what());
    }
    return TVSDP_OK;
  });
}

tvsdp_status tvsdp_problem_write_json(const tvsdp_problem* problem, const char* path) {
  if (problem == nullptr || path == nullptr)
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "null problem or path");
  return guarded([&]() -> tvsdp_status {
    try {
      tvsdp::write_problem(problem->impl, path);
    } catch (const std::runtime_error& e) {
      return fail(TVSDP_ERR_IO, e.what());
    }
    return TVSDP_OK;
  });
}

void tvsdp_problem_destroy(tvsdp_problem* problem) { delete problem; }

int tvsdp_problem_dim(const tvsdp_problem* p) { return p ? p->impl.dim() : 0; }
int tvsdp_problem_num_constraints(const tvsdp_problem* p) { return p ? p->impl.num_constraints() : 0; }
double tvsdp_problem_horizon(const tvsdp_problem* p) { return p ? p->impl.horizon() : 0.0; }
int tvsdp_problem_has_known_solution(const tvsdp_problem* p) {
  return p && p->impl.has_known_solution() ? 1 : 0;
}

tvsdp_status tvsdp_initial_solve(const tvsdp_problem* problem, double t, double tol,
                                 tvsdp_solution** out) {
  if (problem == nullptr || out == nullptr)
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "null problem or output handle");
  return guarded([&] {
    tvsdp::InitOptions options;
    if (tol > 0.0) options.tol = tol;
    *out = new tvsdp_solution{tvsdp::solve_fixed_time(problem->impl, t, options)};
    return TVSDP_OK;
  });
}

void tvsdp_solution_destroy(tvsdp_solution* solution) { delete solution; }

int tvsdp_solution_rank(const tvsdp_solution* s) { return s ? s->impl.rank : 0; }
double tvsdp_solution_residual(const tvsdp_solution* s) { return s ? s->impl.residual0 : 0.0; }
int tvsdp_solution_iterations(const tvsdp_solution* s) { return s ? s->impl.iterations : 0; }

tvsdp_status tvsdp_solution_factor(const tvsdp_solution* s, double* buf, size_t len) {
  if (s == nullptr) return fail(TVSDP_ERR_INVALID_ARGUMENT, "null solution");
  return copy_out(s->impl.Y0.data(), static_cast<size_t>(s->impl.Y0.size()), buf, len);
}

tvsdp_status tvsdp_solution_multiplier(const tvsdp_solution* s, double* buf, size_t len) {
  if (s == nullptr) return fail(TVSDP_ERR_INVALID_ARGUMENT, "null solution");
  return copy_out(s->impl.lambda0.data(), static_cast<size_t>(s->impl.lambda0.size()), buf, len);
}

void tvsdp_track_options_defaults(tvsdp_track_options* options) {
  if (options == nullptr) return;
  const tvsdp::TrackerConfig defaults;
  options->dt0 = defaults.dt0;
  options->stepsize_tuning = defaults.stepsize_tuning ? 1 : 0;
  options->gamma1 = defaults.gamma1;
  options->gamma2 = defaults.gamma2;
  options->residual_tol = defaults.residual_tol;
  options->max_retries = defaults.max_retries;
  options->init_tol = tvsdp::InitOptions{}.tol;
}

tvsdp_status tvsdp_track(const tvsdp_problem* problem, const tvsdp_track_options* options,
                         tvsdp_trajectory** out) {
  if (problem == nullptr || options == nullptr || out == nullptr)
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "null problem, options, or output handle");
  return guarded([&] {
    tvsdp::TrackerConfig config;
    config.dt0 = options->dt0;
    config.stepsize_tuning = options->stepsize_tuning != 0;
    config.gamma1 = options->gamma1;
    config.gamma2 = options->gamma2;
    config.residual_tol = options->residual_tol;
    config.max_retries = options->max_retries;
    config.validate();

    tvsdp::InitOptions init_options;
    if (options->init_tol > 0.0) init_options.tol = options->init_tol;
    const tvsdp::InitResult init = tvsdp::solve_fixed_time(problem->impl, 0.0, init_options);
    *out = new tvsdp_trajectory{
        tvsdp::track(problem->impl, init.Y0, init.lambda0, config)};
    return TVSDP_OK;
  });
}

void tvsdp_trajectory_destroy(tvsdp_trajectory* trajectory) { delete trajectory; }

size_t tvsdp_trajectory_length(const tvsdp_trajectory* t) {
  return t ? t->impl.records.size() : 0;
}

tvsdp_status tvsdp_trajectory_record(const tvsdp_trajectory* t, size_t k,
                                     tvsdp_step_record* out) {
  if (t == nullptr || out == nullptr)
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "null trajectory or output");
  if (k >= t->impl.records.size())
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "record index out of range");
  const auto& rec = t->impl.records[k];
  out->t = rec.t;
  out->residual = rec.residual;
  out->dt_used = rec.dt_used;
  out->sigma_r = rec.sigma_r;
  out->wall_seconds = rec.wall_seconds;
  out->retries = rec.retries;
  return TVSDP_OK;
}

int tvsdp_trajectory_completed(const tvsdp_trajectory* t) {
  return t && t->impl.completed ? 1 : 0;
}

int tvsdp_trajectory_rank(const tvsdp_trajectory* t) { return t ? t->impl.rank : 0; }

const char* tvsdp_trajectory_abort_reason(const tvsdp_trajectory* t) {
  return t ? t->impl.abort_reason.c_str() : "";
}

tvsdp_status tvsdp_trajectory_factor(const tvsdp_trajectory* t, size_t k, double* buf,
                                     size_t len) {
  if (t == nullptr) return fail(TVSDP_ERR_INVALID_ARGUMENT, "null trajectory");
  if (k >= t->impl.records.size())
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "record index out of range");
  const auto& y = t->impl.records[k].Y;
  return copy_out(y.data(), static_cast<size_t>(y.size()), buf, len);
}

tvsdp_status tvsdp_check_step_conditions(const tvsdp_step_condition_inputs* inputs,
                                         tvsdp_step_condition_report* out) {
  if (inputs == nullptr || out == nullptr)
    return fail(TVSDP_ERR_INVALID_ARGUMENT, "null inputs or output");
  return guarded([&] {
    tvsdp::StepConditionInputs in;
    in.delta = inputs->delta;
    in.dt = inputs->dt;
    in.lambda_star = inputs->lambda_star;
    in.Lambda_star = inputs->Lambda_star;
    in.L = inputs->L;
    in.K = inputs->K;
    in.m = inputs->m;
    in.M = inputs->M;
    in.r = inputs->r;
    const tvsdp::StepConditionReport rep = tvsdp::check_step_conditions(in);
    out->cond1 = rep.cond1 ? 1 : 0;
    out->cond2 = rep.cond2 ? 1 : 0;
    out->cond3 = rep.cond3 ? 1 : 0;
    out->lhs1 = rep.lhs1;
    out->rhs1 = rep.rhs1;
    out->lhs2 = rep.lhs2;
    out->rhs2 = rep.rhs2;
    out->lhs3 = rep.lhs3;
    out->rhs3 = rep.rhs3;
    out->init_multiplier_bound = rep.init_multiplier_bound;
    out->init_primal_bound = rep.init_primal_bound;
    return TVSDP_OK;
  });
}

}  // extern "C"
