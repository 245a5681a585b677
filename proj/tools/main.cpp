// Command-line harness for the time-varying SDP tracker. Talks to the
// library exclusively through the C API in tvsdp/tvsdp.h.

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "tvsdp/tvsdp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalAbort = 3;

struct ProblemDeleter {
  void operator()(tvsdp_problem* p) const { tvsdp_problem_destroy(p); }
};
struct SolutionDeleter {
  void operator()(tvsdp_solution* s) const { tvsdp_solution_destroy(s); }
};
struct TrajectoryDeleter {
  void operator()(tvsdp_trajectory* t) const { tvsdp_trajectory_destroy(t); }
};
using ProblemPtr = std::unique_ptr<tvsdp_problem, ProblemDeleter>;
using SolutionPtr = std::unique_ptr<tvsdp_solution, SolutionDeleter>;
using TrajectoryPtr = std::unique_ptr<tvsdp_trajectory, TrajectoryDeleter>;

int fail(tvsdp_status status) {
  std::fprintf(stderr, "error: %s: %s\n", tvsdp_status_name(status), tvsdp_last_error());
  return status == TVSDP_ERR_INVALID_ARGUMENT || status == TVSDP_ERR_IO ? kExitInvalidInput
                                                                        : kExitNumericalAbort;
}

// Shortest round-trip formatting so reruns produce byte-identical files.
std::string fmt(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double check = 0.0;
    std::sscanf(buf, "%lf", &check);
    if (check == v) return buf;
  }
  return buf;
}

std::string fmt_ms(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", seconds * 1e3);
  return buf;
}

ProblemPtr make_problem(const std::string& kind, int n, double density, int r, int m,
                        std::uint64_t seed, tvsdp_status& status) {
  tvsdp_problem* raw = nullptr;
  if (kind == "maxcut") {
    status = tvsdp_problem_create_maxcut(n, density, seed, &raw);
  } else if (kind == "synthetic") {
    status = tvsdp_problem_create_synthetic(n, r, m, seed, &raw);
  } else {
    status = TVSDP_ERR_INVALID_ARGUMENT;
  }
  return ProblemPtr(raw);
}

struct TrackFlags {
  double dt = 1e-2;
  bool tuning = false;
  double gamma1 = 0.5;
  double gamma2 = 1.2;
  double eps = 1e-4;
  int max_retries = 60;
  double init_tol = 0.0;  // 0 = library default
};

void add_track_flags(CLI::App* cmd, TrackFlags& f) {
  cmd->add_option("--dt", f.dt, "initial stepsize");
  cmd->add_flag("--tuning", f.tuning, "enable residual-driven stepsize tuning");
  cmd->add_option("--gamma1", f.gamma1, "stepsize shrink factor in (0,1)");
  cmd->add_option("--gamma2", f.gamma2, "stepsize growth factor > 1");
  cmd->add_option("--eps", f.eps, "residual tolerance for accepting a step");
  cmd->add_option("--max-retries", f.max_retries, "shrink attempts per step");
  cmd->add_option("--init-tol", f.init_tol, "tolerance of the initial solve");
}

tvsdp_track_options to_options(const TrackFlags& f) {
  tvsdp_track_options opts;
  tvsdp_track_options_defaults(&opts);
  opts.dt0 = f.dt;
  opts.stepsize_tuning = f.tuning ? 1 : 0;
  opts.gamma1 = f.gamma1;
  opts.gamma2 = f.gamma2;
  opts.residual_tol = f.eps;
  opts.max_retries = f.max_retries;
  if (f.init_tol > 0.0) opts.init_tol = f.init_tol;
  return opts;
}

struct CellResult {
  std::uint64_t seed = 0;
  double param = 0.0;
  std::string mode;
  long steps = 0;
  long retries = 0;
  double mean_residual = 0.0;
  double max_residual = 0.0;
  int final_rank = 0;
  double wall_seconds = 0.0;
  std::string status = "ok";
};

CellResult run_cell(const std::string& kind, int n, double density, std::uint64_t seed,
                    const TrackFlags& base, const std::string& mode, double param) {
  CellResult cell;
  cell.seed = seed;
  cell.param = param;
  cell.mode = mode;

  tvsdp_status status = TVSDP_OK;
  ProblemPtr problem = make_problem(kind, n, density, 0, 0, seed, status);
  if (!problem) {
    cell.status = "generate_failed";
    return cell;
  }

  TrackFlags flags = base;
  if (mode == "stepsize") {
    flags.dt = param;
    flags.tuning = false;
  } else {
    flags.eps = param;
    flags.tuning = true;
  }
  const tvsdp_track_options opts = to_options(flags);

  const auto start = std::chrono::steady_clock::now();
  tvsdp_trajectory* raw = nullptr;
  status = tvsdp_track(problem.get(), &opts, &raw);
  TrajectoryPtr traj(raw);
  cell.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (status != TVSDP_OK) {
    cell.status = "init_failed";
    return cell;
  }

  const size_t len = tvsdp_trajectory_length(traj.get());
  tvsdp_step_record rec{};
  for (size_t k = 1; k < len; ++k) {
    tvsdp_trajectory_record(traj.get(), k, &rec);
    cell.mean_residual += rec.residual;
    cell.max_residual = std::max(cell.max_residual, rec.residual);
    cell.retries += rec.retries;
    ++cell.steps;
  }
  if (cell.steps > 0) cell.mean_residual /= static_cast<double>(cell.steps);
  cell.final_rank = tvsdp_trajectory_rank(traj.get());
  if (tvsdp_trajectory_completed(traj.get()) == 0) cell.status = "abort";
  return cell;
}

std::vector<double> quartiles(std::vector<double> values) {
  // returns {min, q1, median, q3, max} with linear interpolation
  std::sort(values.begin(), values.end());
  const auto at = [&](double q) {
    if (values.empty()) return 0.0;
    const double pos = q * (static_cast<double>(values.size()) - 1.0);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, values.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - w) + values[hi] * w;
  };
  return {at(0.0), at(0.25), at(0.5), at(0.75), at(1.0)};
}

int cmd_generate(const std::string& kind, int n, double density, int r, int m,
                 std::uint64_t seed, const std::string& out) {
  tvsdp_status status = TVSDP_OK;
  ProblemPtr problem = make_problem(kind, n, density, r, m, seed, status);
  if (!problem) return fail(status);
  status = tvsdp_problem_write_json(problem.get(), out.c_str());
  if (status != TVSDP_OK) return fail(status);
  std::printf("wrote %s instance n=%d m=%d to %s\n", kind.c_str(),
              tvsdp_problem_dim(problem.get()), tvsdp_problem_num_constraints(problem.get()),
              out.c_str());
  return kExitOk;
}

int cmd_init(const std::string& instance, double t, double tol, const std::string& out) {
  tvsdp_problem* praw = nullptr;
  tvsdp_status status = tvsdp_problem_read_json(instance.c_str(), &praw);
  ProblemPtr problem(praw);
  if (status != TVSDP_OK) return fail(status);

  tvsdp_solution* sraw = nullptr;
  status = tvsdp_initial_solve(problem.get(), t, tol, &sraw);
  SolutionPtr solution(sraw);
  if (status != TVSDP_OK) return fail(status);

  const int n = tvsdp_problem_dim(problem.get());
  const int m = tvsdp_problem_num_constraints(problem.get());
  const int rank = tvsdp_solution_rank(solution.get());
  std::printf("rank %d, residual %s, %d interior-point iterations\n", rank,
              fmt(tvsdp_solution_residual(solution.get())).c_str(),
              tvsdp_solution_iterations(solution.get()));

  if (!out.empty()) {
    std::vector<double> y(static_cast<size_t>(n) * static_cast<size_t>(rank));
    std::vector<double> lambda(static_cast<size_t>(m));
    if (tvsdp_solution_factor(solution.get(), y.data(), y.size()) != TVSDP_OK ||
        tvsdp_solution_multiplier(solution.get(), lambda.data(), lambda.size()) != TVSDP_OK)
      return fail(TVSDP_ERR_INTERNAL);
    std::ofstream os(out, std::ios::binary);
    if (!os) {
      std::fprintf(stderr, "error: cannot open %s\n", out.c_str());
      return kExitInvalidInput;
    }
    os << "{\n  \"rank\": " << rank
       << ",\n  \"iterations\": " << tvsdp_solution_iterations(solution.get())
       << ",\n  \"residual\": " << fmt(tvsdp_solution_residual(solution.get()));
    os << ",\n  \"lambda\": [";
    for (size_t i = 0; i < lambda.size(); ++i) os << (i ? "," : "") << fmt(lambda[i]);
    os << "],\n  \"Y_column_major\": [";
    for (size_t i = 0; i < y.size(); ++i) os << (i ? "," : "") << fmt(y[i]);
    os << "]\n}\n";
  }
  return kExitOk;
}

int cmd_track(const std::string& instance, const TrackFlags& flags, const std::string& out) {
  tvsdp_problem* praw = nullptr;
  tvsdp_status status = tvsdp_problem_read_json(instance.c_str(), &praw);
  ProblemPtr problem(praw);
  if (status != TVSDP_OK) return fail(status);

  const tvsdp_track_options opts = to_options(flags);
  tvsdp_trajectory* traw = nullptr;
  status = tvsdp_track(problem.get(), &opts, &traw);
  TrajectoryPtr traj(traw);
  if (status != TVSDP_OK) return fail(status);

  std::ofstream os(out, std::ios::binary);
  if (!os) {
    std::fprintf(stderr, "error: cannot open %s\n", out.c_str());
    return kExitInvalidInput;
  }
  os << "# tvsdp-csv v1 track\n";
  os << "t,residual,dt_used,retries,sigma_r,wall_ms\n";
  const size_t len = tvsdp_trajectory_length(traj.get());
  tvsdp_step_record rec{};
  for (size_t k = 0; k < len; ++k) {
    tvsdp_trajectory_record(traj.get(), k, &rec);
    os << fmt(rec.t) << ',' << fmt(rec.residual) << ',' << fmt(rec.dt_used) << ',' << rec.retries
       << ',' << fmt(rec.sigma_r) << ',' << fmt_ms(rec.wall_seconds) << '\n';
  }
  const bool completed = tvsdp_trajectory_completed(traj.get()) == 1;
  os << (completed ? "# status ok\n"
                   : std::string("# status aborted ") +
                         tvsdp_trajectory_abort_reason(traj.get()) + "\n");
  os.close();
  std::printf("%s: %zu records, rank %d, %s\n", out.c_str(), len,
              tvsdp_trajectory_rank(traj.get()), completed ? "completed" : "aborted");
  return completed ? kExitOk : kExitNumericalAbort;
}

int cmd_sweep(const std::string& kind, int n, double density,
              const std::vector<std::uint64_t>& seeds, const std::vector<double>& stepsizes,
              const std::vector<double>& eps_list, const TrackFlags& base, int jobs,
              const std::string& out) {
  if (!stepsizes.empty() && !eps_list.empty()) {
    std::fprintf(stderr, "error: pass either --stepsizes or --eps-list, not both\n");
    return kExitInvalidInput;
  }
  const bool eps_mode = !eps_list.empty();
  const std::vector<double>& params = eps_mode ? eps_list : stepsizes;
  const std::string mode = eps_mode ? "eps" : "stepsize";

  struct Cell {
    std::uint64_t seed;
    double param;
  };
  std::vector<Cell> cells;
  for (const auto seed : seeds)
    for (const double p : params) cells.push_back({seed, p});

  std::vector<CellResult> results(cells.size());
  std::atomic<size_t> next{0};
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<size_t>(cells.size(), 1))));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        results[i] = run_cell(kind, n, density, cells[i].seed, base, mode, cells[i].param);
      }
    });
  for (auto& th : pool) th.join();

  std::ofstream os(out, std::ios::binary);
  if (!os) {
    std::fprintf(stderr, "error: cannot open %s\n", out.c_str());
    return kExitInvalidInput;
  }
  os << "# tvsdp-csv v1 sweep\n";
  os << "seed,param,mode,steps,retries,mean_residual,max_residual,final_rank,wall_ms,status\n";
  for (const auto& c : results)
    os << c.seed << ',' << fmt(c.param) << ',' << c.mode << ',' << c.steps << ',' << c.retries
       << ',' << fmt(c.mean_residual) << ',' << fmt(c.max_residual) << ',' << c.final_rank << ','
       << fmt_ms(c.wall_seconds) << ',' << c.status << '\n';
  os.close();

  // quartile summaries per parameter value, mirroring whisker plots
  const std::string summary_path =
      out.size() > 4 && out.substr(out.size() - 4) == ".csv"
          ? out.substr(0, out.size() - 4) + ".summary.csv"
          : out + ".summary.csv";
  std::ofstream ss(summary_path, std::ios::binary);
  if (!ss) {
    std::fprintf(stderr, "error: cannot open %s\n", summary_path.c_str());
    return kExitInvalidInput;
  }
  ss << "# tvsdp-csv v1 sweep-summary\n";
  ss << "param,mode,count,res_min,res_q1,res_median,res_q3,res_max,"
        "wall_ms_min,wall_ms_q1,wall_ms_median,wall_ms_q3,wall_ms_max\n";
  for (const double p : params) {
    std::vector<double> res, wall;
    for (const auto& c : results)
      if (c.param == p && c.status == "ok") {
        res.push_back(c.mean_residual);
        wall.push_back(c.wall_seconds * 1e3);
      }
    const auto rq = quartiles(res);
    const auto wq = quartiles(wall);
    ss << fmt(p) << ',' << mode << ',' << res.size();
    for (const double v : rq) ss << ',' << fmt(v);
    for (const double v : wq) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f", v);
      ss << ',' << buf;
    }
    ss << '\n';
  }
  ss.close();

  int failures = 0;
  for (const auto& c : results)
    if (c.status != "ok") ++failures;
  std::printf("%zu cells (%d flagged), results in %s and %s\n", cells.size(), failures,
              out.c_str(), summary_path.c_str());
  return kExitOk;
}

int cmd_conditions(const tvsdp_step_condition_inputs& in) {
  tvsdp_step_condition_report rep{};
  const tvsdp_status status = tvsdp_check_step_conditions(&in, &rep);
  if (status != TVSDP_OK) return fail(status);
  std::printf("condition 1 (solutions stay in the recovery region): %s  [lhs %s < rhs %s]\n",
              rep.cond1 ? "holds" : "fails", fmt(rep.lhs1).c_str(), fmt(rep.rhs1).c_str());
  std::printf("condition 2 (error budget inside the Newton basin):  %s  [lhs %s < rhs %s]\n",
              rep.cond2 ? "holds" : "fails", fmt(rep.lhs2).c_str(), fmt(rep.rhs2).c_str());
  std::printf("condition 3 (one step preserves the budget):         %s  [lhs %s <= rhs %s]\n",
              rep.cond3 ? "holds" : "fails", fmt(rep.lhs3).c_str(), fmt(rep.rhs3).c_str());
  std::printf("sufficient initialization: |lambda_hat - lambda_0| <= %s, |X_hat - X_0|_F <= %s\n",
              fmt(rep.init_multiplier_bound).c_str(), fmt(rep.init_primal_bound).c_str());
  std::printf("%s\n", rep.cond1 && rep.cond2 && rep.cond3 ? "all conditions hold"
                                                          : "not all conditions hold");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying SDP trajectory tracker (low-rank path following)"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a problem instance to JSON");
  std::string gen_kind = "maxcut", gen_out;
  int gen_n = 30, gen_r = 2, gen_m = 0;
  double gen_density = 0.5;
  std::uint64_t gen_seed = 1;
  gen->add_option("--kind", gen_kind, "maxcut | synthetic")
      ->check(CLI::IsMember({"maxcut", "synthetic"}));
  gen->add_option("--n", gen_n, "matrix dimension");
  gen->add_option("--density", gen_density, "off-diagonal density (maxcut)");
  gen->add_option("--r", gen_r, "solution rank (synthetic)");
  gen->add_option("--m", gen_m, "constraint count (synthetic; default n)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path")->required();

  auto* ini = app.add_subcommand("init", "solve the instance at a fixed time");
  std::string ini_instance, ini_out;
  double ini_t = 0.0, ini_tol = 0.0;
  ini->add_option("--instance", ini_instance, "instance JSON path")->required();
  ini->add_option("--t", ini_t, "time point");
  ini->add_option("--tol", ini_tol, "solver tolerance");
  ini->add_option("--out", ini_out, "write the solution JSON here");

  auto* trk = app.add_subcommand("track", "initialize and track over the horizon");
  std::string trk_instance, trk_out;
  TrackFlags trk_flags;
  trk->add_option("--instance", trk_instance, "instance JSON path")->required();
  add_track_flags(trk, trk_flags);
  trk->add_option("--out", trk_out, "trajectory CSV path")->required();

  auto* swp = app.add_subcommand("sweep", "grid of runs over seeds and stepsizes/tolerances");
  std::string swp_kind = "maxcut", swp_out;
  int swp_n = 30, swp_jobs = 1;
  double swp_density = 0.5;
  std::vector<std::uint64_t> swp_seeds{1, 2, 3, 4, 5};
  std::vector<double> swp_stepsizes, swp_eps;
  TrackFlags swp_flags;
  swp->add_option("--kind", swp_kind, "instance kind")->check(CLI::IsMember({"maxcut"}));
  swp->add_option("--n", swp_n, "matrix dimension");
  swp->add_option("--density", swp_density, "off-diagonal density");
  swp->add_option("--seeds", swp_seeds, "instance seeds")->delimiter(',');
  swp->add_option("--stepsizes", swp_stepsizes, "fixed stepsizes (tuning off)")->delimiter(',');
  swp->add_option("--eps-list", swp_eps, "residual tolerances (tuning on)")->delimiter(',');
  swp->add_option("--jobs", swp_jobs, "parallel workers");
  add_track_flags(swp, swp_flags);
  swp->add_option("--out", swp_out, "sweep CSV path")->required();

  auto* cnd = app.add_subcommand("conditions", "evaluate the stepsize/initialization conditions");
  tvsdp_step_condition_inputs cin{};
  cnd->add_option("--delta", cin.delta, "tracking-error budget")->required();
  cnd->add_option("--dt", cin.dt, "stepsize")->required();
  cnd->add_option("--lambda-star", cin.lambda_star, "smallest positive eigenvalue bound")
      ->required();
  cnd->add_option("--Lambda-star", cin.Lambda_star, "largest eigenvalue bound")->required();
  cnd->add_option("--L", cin.L, "primal curve speed bound")->required();
  cnd->add_option("--K", cin.K, "multiplier curve speed bound")->required();
  cnd->add_option("--m", cin.m, "inverse-Jacobian bound")->required();
  cnd->add_option("--M", cin.M, "Jacobian Lipschitz constant")->required();
  cnd->add_option("--r", cin.r, "factor rank")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  if (gen->parsed())
    return cmd_generate(gen_kind, gen_n, gen_density, gen_r, gen_m > 0 ? gen_m : gen_n, gen_seed,
                        gen_out);
  if (ini->parsed()) return cmd_init(ini_instance, ini_t, ini_tol, ini_out);
  if (trk->parsed()) return cmd_track(trk_instance, trk_flags, trk_out);
  if (swp->parsed())
    return cmd_sweep(swp_kind, swp_n, swp_density, swp_seeds, swp_stepsizes, swp_eps, swp_flags,
                     swp_jobs, swp_out);
  if (cnd->parsed()) return cmd_conditions(cin);
  return kExitInvalidInput;
}
