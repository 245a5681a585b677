// Acceptance suite: one pass/fail line per criterion, pinned tolerances.
// Run directly (TVSDP_CLI must point at the CLI binary for criterion 10) or
// through ctest, which sets the environment.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tvsdp/geometry.hpp"
#include "tvsdp/initializer.hpp"
#include "tvsdp/kkt.hpp"
#include "tvsdp/problem.hpp"
#include "tvsdp/tracker.hpp"

using namespace tvsdp;

namespace {

int g_failures = 0;

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

void run_criterion(int id, const std::string& name, double time_limit_s,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(elapsed < time_limit_s, "runtime limit exceeded");
  if (check.ok) {
    std::printf("[PASS] criterion %2d (%6.2f s): %s\n", id, elapsed, name.c_str());
  } else {
    std::printf("[FAIL] criterion %2d (%6.2f s): %s -- %s\n", id, elapsed, name.c_str(),
                check.detail.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// blanks one comma-separated column (timing) in every non-comment line
std::string strip_column(const std::string& text, std::size_t column) {
  std::stringstream ss(text);
  std::string line, out;
  while (std::getline(ss, line)) {
    if (!line.empty() && line[0] != '#') {
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      if (column < fields.size()) fields[column] = "-";
      line.clear();
      for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + fields[i];
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace

int main() {
  // 1. lower bound of the factorization-map derivative over horizontal
  //    directions, with the rank-one sharpness witness
  run_criterion(1, "geometry lower bound and sharpness witness", 5.0, [](Check& check) {
    testsup::Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform() * 19);  // <= 20
      const int r = 1 + static_cast<int>(rng.uniform() * std::min(4, n - 1));
      const Matrix y = testsup::random_factor(rng, n, r);
      const Matrix h = testsup::random_horizontal(rng, y);
      const double sigma_r = injectivity_radius(y);
      check.require(dphi(y, h).norm() >= std::sqrt(2.0) * sigma_r * h.norm() - 1e-10,
                    "lower bound violated");

      Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Matrix witness = svd.matrixU().col(n - 1) * svd.matrixV().col(r - 1).transpose();
      const double gap =
          std::abs(dphi(y, witness).norm() - std::sqrt(2.0) * sigma_r * witness.norm());
      check.require(gap <= 1e-10, "sharpness witness missed equality");
    }
  });

  // 2. factor recovery round trip and its error bound
  run_criterion(2, "factor recovery round trip and error bound", 10.0, [](Check& check) {
    testsup::Rng rng(102);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 4 + static_cast<int>(rng.uniform() * 9);
      const int r = 1 + static_cast<int>(rng.uniform() * std::min(3, n - 1));
      const Matrix y = testsup::random_factor(rng, n, r);
      Matrix h0 = testsup::random_horizontal(rng, y);
      h0 *= (0.1 + 0.4 * rng.uniform()) * injectivity_radius(y) / h0.norm();
      const auto rec = recover_factor(y, phi(y + h0));
      check.require((rec.h - h0).cwiseAbs().maxCoeff() <= 1e-8, "round trip missed");
      const double sigma_r = injectivity_radius(y);
      check.require(rec.h.squaredNorm() <= rec.distance * rec.distance / (sigma_r * sigma_r) +
                                               std::sqrt(static_cast<double>(r)) * rec.distance +
                                               1e-10,
                    "recovery error bound violated");
    }
  });

  // 3. inverse injectivity radius formula and its cleaner sufficient bound
  run_criterion(3, "inverse radius closed form and cleaner bound", 5.0, [](Check& check) {
    Matrix x = Matrix::Zero(3, 3);
    x(0, 0) = 1.0;
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    check.require(std::abs(inverse_injectivity_radius(x, 1) - golden) <= 1e-15,
                  "closed form mismatch at r=1");
    for (int r = 1; r <= 10; ++r) {
      Matrix xr = Matrix::Identity(r + 1, r + 1);
      xr(r, r) = 0.0;  // rank r with lambda_r = 1
      check.require(1.0 / std::sqrt(r + 4.0) <= inverse_injectivity_radius(xr, r) + 1e-15,
                    "cleaner bound exceeded the radius");
    }
  });

  // 4. step-system Jacobian: finite differences, symmetry, spectrum invariance
  run_criterion(4, "step-system Jacobian correctness at n=12", 10.0, [](Check& check) {
    const TVProblem p = make_synthetic(12, 3, 10, 2);
    testsup::Rng rng(104);
    const double t = 0.3, s = 0.34;
    const Factor y_t = p.known_factor(t);
    const Vector lambda_t = p.known_multiplier(t);
    const KKTSystem sys = assemble_kkt(p, y_t, lambda_t, s);
    const int nr = 36, m = 10, pdim = 3;

    check.require((sys.k - sys.k.transpose()).cwiseAbs().maxCoeff() <=
                      1e-12 * sys.k.cwiseAbs().maxCoeff(),
                  "system matrix not symmetric");

    Vector signs(sys.dim());
    signs.head(nr).setOnes();
    signs.tail(m + pdim).setConstant(-1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector dir = testsup::random_matrix(rng, sys.dim(), 1).normalized();
      const double eps = 1e-6;
      const auto eval = [&](double scale) {
        const Eigen::Map<const Matrix> dy(dir.data(), 12, 3);
        const KKTPoint point{y_t + scale * dy, lambda_t + scale * dir.segment(nr, m),
                             SkewMatrix::from_orthonormal_coords(3, scale * dir.tail(pdim))};
        return kkt_map(p, y_t, s, point);
      };
      const Vector fd = (eval(eps) - eval(-eps)) / (2.0 * eps);
      const Vector predicted = sys.k * dir;
      check.require((predicted - signs.asDiagonal() * fd).cwiseAbs().maxCoeff() <=
                        1e-6 * std::max(1.0, predicted.cwiseAbs().maxCoeff()),
                    "finite-difference consistency failed");
    }

    const Matrix q = testsup::random_orthogonal(rng, 3);
    Eigen::SelfAdjointEigenSolver<Matrix> ev1(sys.k);
    Eigen::SelfAdjointEigenSolver<Matrix> ev2(assemble_kkt(p, y_t * q, lambda_t, s).k);
    const double scale = std::max(1.0, ev1.eigenvalues().cwiseAbs().maxCoeff());
    check.require(
        (ev1.eigenvalues() - ev2.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
        "spectrum changed under factor rotation");
  });

  // 5. second-order sufficiency and the Newton fixed point at dt = 0
  run_criterion(5, "second-order sufficiency on 10 instances", 30.0, [](Check& check) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const TVProblem p = make_synthetic(8, 2, 5, seed);
      const double t = 0.5;
      const Factor y = p.known_factor(t);
      const Vector lambda = p.known_multiplier(t);
      const auto sosc = check_second_order(p, t, y, lambda);
      check.require(sosc.positive && sosc.min_eigenvalue > 0.0,
                    "reduced Hessian not positive definite");
      const StepResult step = solve_kkt_step(p, t, y, lambda);
      check.require(step.ok, "step system reported singular at a regular solution");
      if (step.ok) check.require(step.delta_y.norm() <= 1e-9, "exact point moved at dt=0");
    }
  });

  // 6. ground-truth tracking accuracy over the whole horizon
  run_criterion(6, "tracking accuracy against the known curve", 30.0, [](Check& check) {
    const TVProblem p = make_synthetic(8, 2, 5, 1);
    TrackerConfig cfg;
    cfg.dt0 = 1e-3;
    cfg.stepsize_tuning = false;
    const Trajectory traj = track(p, p.known_factor(0.0), p.known_multiplier(0.0), cfg);
    check.require(traj.completed, "tracking aborted");

    double delta = 0.0, lambda_max = 0.0, max_orbit = 0.0;
    for (const auto& rec : traj.records) {
      const double dy = orbit_distance(rec.Y, p.known_factor(rec.t));
      const double dl = (rec.lambda - p.known_multiplier(rec.t)).norm();
      delta = std::max(delta, std::sqrt(dy * dy + dl * dl));
      max_orbit = std::max(max_orbit, dy);
      Eigen::SelfAdjointEigenSolver<Matrix> es(phi(p.known_factor(rec.t)));
      lambda_max = std::max(lambda_max, es.eigenvalues().maxCoeff());
    }
    check.require(max_orbit <= 1e-4, "orbit distance exceeded 1e-4");

    const double bound = (2.0 * std::sqrt(lambda_max) + delta) * delta;
    for (const auto& rec : traj.records)
      check.require((phi(rec.Y) - phi(p.known_factor(rec.t))).norm() <= bound + 1e-12,
                    "primal error bound violated");
  });

  // 7. mean residual is non-increasing in the stepsize on max-cut instances
  run_criterion(7, "residual vs stepsize trend (n=30 max-cut, 5 seeds)", 120.0,
                [](Check& check) {
                  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                    const TVProblem p = make_maxcut(30, 0.5, seed);
                    const InitResult init = solve_fixed_time(p, 0.0);
                    double previous_mean = std::numeric_limits<double>::infinity();
                    for (const double dt : {1e-1, 1e-2, 1e-3, 1e-4}) {
                      TrackerConfig cfg;
                      cfg.dt0 = dt;
                      cfg.stepsize_tuning = false;
                      const Trajectory traj = track(p, init.Y0, init.lambda0, cfg);
                      check.require(traj.completed, "fixed-step run aborted");
                      if (!traj.completed) return;
                      double mean = 0.0;
                      for (std::size_t k = 1; k < traj.records.size(); ++k)
                        mean += traj.records[k].residual;
                      mean /= static_cast<double>(traj.records.size() - 1);
                      check.require(mean <= previous_mean,
                                    "mean residual increased for a smaller stepsize");
                      previous_mean = mean;
                    }
                  }
                });

  // 8. stepsize tuning honors the acceptance threshold
  run_criterion(8, "stepsize tuning contract (eps 1e-2 vs 1e-4)", 60.0, [](Check& check) {
    const TVProblem p = make_maxcut(30, 0.5, 1);
    const InitResult init = solve_fixed_time(p, 0.0);
    std::size_t steps_loose = 0, steps_tight = 0;
    for (const double eps : {1e-2, 1e-4}) {
      TrackerConfig cfg;
      cfg.dt0 = 0.1;
      cfg.stepsize_tuning = true;
      cfg.residual_tol = eps;
      const Trajectory traj = track(p, init.Y0, init.lambda0, cfg);
      check.require(traj.completed, "tuned run aborted");
      for (std::size_t k = 1; k < traj.records.size(); ++k)
        check.require(traj.records[k].residual <= eps, "accepted step above eps");
      (eps == 1e-2 ? steps_loose : steps_tight) = traj.records.size() - 1;
    }
    check.require(steps_loose <= steps_tight,
                  "looser tolerance took more steps than the tighter one");
  });

  // 9. detected rank of the initial max-cut solution at benchmark scale
  run_criterion(9, "initial rank in {4..7} on n=100 max-cut (3 seeds)", 120.0,
                [](Check& check) {
                  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                    const TVProblem p = make_maxcut(100, 0.5, seed);
                    const InitResult init = solve_fixed_time(p, 0.0);
                    check.require(init.rank >= 4 && init.rank <= 7,
                                  "rank " + std::to_string(init.rank) + " outside {4..7}");
                    check.require(init.rank * (init.rank + 1) / 2 <= p.num_constraints(),
                                  "rank bound r(r+1)/2 <= m violated");
                  }
                });

  // 10. bit-identical reruns, in the library and through the CLI
  run_criterion(10, "determinism of trajectories and CSV outputs", 120.0, [](Check& check) {
    const TVProblem p = make_synthetic(8, 2, 5, 3);
    TrackerConfig cfg;
    cfg.dt0 = 0.01;
    cfg.stepsize_tuning = true;
    cfg.residual_tol = 1e-5;
    const Trajectory a = track(p, p.known_factor(0.0), p.known_multiplier(0.0), cfg);
    const Trajectory b = track(p, p.known_factor(0.0), p.known_multiplier(0.0), cfg);
    check.require(a.records.size() == b.records.size(), "trajectory lengths differ");
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      check.require(a.records[k].t == b.records[k].t, "time grid differs");
      check.require((a.records[k].Y - b.records[k].Y).cwiseAbs().maxCoeff() == 0.0,
                    "factors differ bitwise");
      check.require(
          (a.records[k].lambda - b.records[k].lambda).cwiseAbs().maxCoeff() == 0.0,
          "multipliers differ bitwise");
    }

    const char* cli = std::getenv("TVSDP_CLI");
    check.require(cli != nullptr, "TVSDP_CLI not set; cannot exercise the CLI");
    if (cli == nullptr) return;
    const std::string base = "tvsdp_acc10";
    const auto sh = [&](const std::string& args) {
      return std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
    };
    check.require(sh("generate --kind maxcut --n 20 --density 0.5 --seed 7 --out " + base +
                     "_i.json") == 0,
                  "generate failed");
    check.require(slurp(base + "_i.json") != "", "instance file missing");
    check.require(sh("generate --kind maxcut --n 20 --density 0.5 --seed 7 --out " + base +
                     "_j.json") == 0,
                  "generate rerun failed");
    check.require(slurp(base + "_i.json") == slurp(base + "_j.json"),
                  "instance files not byte-identical");

    check.require(sh("track --instance " + base + "_i.json --dt 0.01 --out " + base +
                     "_a.csv") == 0,
                  "track failed");
    check.require(sh("track --instance " + base + "_i.json --dt 0.01 --out " + base +
                     "_b.csv") == 0,
                  "track rerun failed");
    check.require(strip_column(slurp(base + "_a.csv"), 5) ==
                      strip_column(slurp(base + "_b.csv"), 5),
                  "trajectory CSVs differ beyond timing");

    check.require(sh("sweep --n 15 --seeds 1,2 --stepsizes 1e-1,1e-2 --jobs 2 --out " + base +
                     "_s1.csv") == 0,
                  "sweep failed");
    check.require(sh("sweep --n 15 --seeds 1,2 --stepsizes 1e-1,1e-2 --jobs 1 --out " + base +
                     "_s2.csv") == 0,
                  "sweep rerun failed");
    check.require(strip_column(slurp(base + "_s1.csv"), 8) ==
                      strip_column(slurp(base + "_s2.csv"), 8),
                  "sweep CSVs differ beyond timing");
    for (const char* suffix :
         {"_i.json", "_j.json", "_a.csv", "_b.csv", "_s1.csv", "_s2.csv", "_s1.summary.csv",
          "_s2.summary.csv"})
      std::remove((base + suffix).c_str());
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  }
  return g_failures;
}
