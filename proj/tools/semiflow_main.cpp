// semiflow command line front end: problem ingestion, solver dispatch,
// plain-vs-accelerated benchmarking, and seeded property-check suites.
//
// Exit codes: 0 converged / all checks pass, 1 input or precondition error,
// 2 iteration cap reached, 3 breakdown, 4 check-suite failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semiflow/check_suites.hpp"
#include "semiflow/core.hpp"
#include "semiflow/dare.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/nme.hpp"
#include "semiflow/pencil.hpp"
#include "semiflow/problem_io.hpp"
#include "semiflow/scalar.hpp"
#include "semiflow/stein.hpp"

namespace {

using namespace semiflow;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitMaxIterations = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitCheckFailure = 4;

int status_exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::MaxIterations: return kExitMaxIterations;
    case SolveStatus::Breakdown: return kExitBreakdown;
  }
  return kExitInputError;
}

struct SolveArtifacts {
  json solution;
  ConvergenceReport report;
};

// ---------------------------------------------------------------------------
// Scalar drivers: the three closed-form families share a tiny residual-stopped
// loop; accelerated indices advance by r^(k-1) like the matrix engine.
// ---------------------------------------------------------------------------

template <typename Step, typename Residual>
ConvergenceReport run_scalar_loop(Step&& step, Residual&& residual,
                                  const SolverConfig& cfg, std::int64_t stride,
                                  double& out_residual) {
  ConvergenceReport report;
  detail::StepTimer timer;
  std::int64_t index = 1;
  auto accept = [&](double value) {
    report.residuals.push_back(value);
    report.iterate_indices.push_back(index);
    report.elapsed_us.push_back(timer.restart());
  };
  try {
    double value = residual();
    accept(value);
    for (int outer = 1; value > cfg.tol && outer <= cfg.max_outer; ++outer) {
      if (stride > 1 && index > detail::kIndexCap / stride) break;
      step();
      ++report.total_applies;
      index = stride > 1 ? index * stride : index + 1;
      value = residual();
      accept(value);
    }
    report.status = value <= cfg.tol ? SolveStatus::Converged
                                     : SolveStatus::MaxIterations;
  } catch (const BreakdownError& err) {
    report.status = SolveStatus::Breakdown;
    report.breakdown_detail = err.what();
  }
  detail::finalize_report(report);
  out_residual = report.final_residual();
  return report;
}

json complex_to_json(Complex value) {
  return json::array({value.real(), value.imag()});
}

SolveArtifacts solve_scalar_linear(const io::ProblemFile& problem,
                                   const SolverConfig& cfg) {
  scalar::LinearProblem prob{problem.scalar("a"), problem.scalar("b"),
                             problem.scalar("x1")};
  if (!prob.contractive()) {
    std::cerr << "warning: |a| >= 1, the iteration does not contract\n";
  }
  Complex x = prob.x1;
  const bool accelerated = cfg.mode == IterationMode::Accelerated;
  Complex a_k{0.0, 0.0};
  Complex b_k{0.0, 0.0};
  if (accelerated) {
    // Seed coefficients a_1 = a^(r-1), b_1 = b (1 - a^(r-1)) / (1 - a) so one
    // accelerated step crosses r - 1 plain steps.
    a_k = Complex{1.0};
    for (int p = 1; p < cfg.order; ++p) a_k *= prob.a;
    b_k = prob.b * (Complex{1.0} - a_k) / (Complex{1.0} - prob.a);
  }
  auto step = [&] {
    if (accelerated) {
      x = a_k * x + b_k;
      std::tie(a_k, b_k) = scalar::linear_accel_step(a_k, b_k, cfg.order);
    } else {
      x = scalar::linear_plain_step(prob, x);
    }
  };
  auto residual = [&] { return std::abs(x - (prob.a * x + prob.b)); };
  double final_residual = 0.0;
  SolveArtifacts out;
  out.report = run_scalar_loop(step, residual, cfg,
                               accelerated ? cfg.order : 1, final_residual);
  out.solution = {{"kind", "scalar-linear"},
                  {"solution", complex_to_json(x)},
                  {"fixed_point", complex_to_json(prob.fixed_point())}};
  return out;
}

SolveArtifacts solve_scalar_rational(const io::ProblemFile& problem,
                                     const SolverConfig& cfg) {
  scalar::RationalProblem prob{problem.scalar("a"), problem.scalar("b")};
  prob.validate();
  Complex x = prob.b;
  const bool accelerated = cfg.mode == IterationMode::Accelerated;
  auto step = [&] {
    x = accelerated ? scalar::rational_h(x, prob.a, cfg.order)
                    : scalar::rational_plain_step(x, prob.a, prob.b);
  };
  auto residual = [&] {
    return std::abs(x - scalar::rational_plain_step(x, prob.a, prob.b));
  };
  double final_residual = 0.0;
  SolveArtifacts out;
  out.report = run_scalar_loop(step, residual, cfg,
                               accelerated ? cfg.order : 1, final_residual);
  out.solution = {{"kind", "scalar-rational"},
                  {"solution", complex_to_json(x)}};
  return out;
}

SolveArtifacts solve_scalar_pair(const io::ProblemFile& problem,
                                 const SolverConfig& cfg) {
  scalar::PairProblem prob{problem.scalar("x1"), problem.scalar("y1")};
  prob.validate();
  Complex x = prob.x1;
  Complex y = prob.y1;
  const bool accelerated = cfg.mode == IterationMode::Accelerated;
  auto step = [&] {
    std::tie(x, y) = accelerated ? scalar::pair_H(x, y, cfg.order)
                                 : scalar::pair_plain_step(x, y, prob);
  };
  auto residual = [&] {
    const auto next = scalar::pair_plain_step(x, y, prob);
    return std::hypot(std::abs(x - next.first), std::abs(y - next.second));
  };
  double final_residual = 0.0;
  SolveArtifacts out;
  out.report = run_scalar_loop(step, residual, cfg,
                               accelerated ? cfg.order : 1, final_residual);
  out.solution = {{"kind", "scalar-pair"},
                  {"solution",
                   json::array({complex_to_json(x), complex_to_json(y)})}};
  return out;
}

SolveArtifacts solve_problem(const io::ProblemFile& problem,
                             const SolverConfig& cfg, bool force) {
  SolveArtifacts out;
  switch (problem.kind) {
    case io::ProblemKind::Stein: {
      stein::State state{problem.matrix("A"), problem.matrix("B"),
                         problem.matrix("C")};
      const double rho = stein::contraction_factor(state);
      if (rho >= 1.0) {
        if (!force) {
          throw PreconditionError(
              "stein: rho(A) * rho(B) = " + std::to_string(rho) +
              " >= 1 violates the contraction precondition (pass --force to "
              "run anyway)");
        }
        std::cerr << "warning: rho(A) * rho(B) = " << rho
                  << " >= 1; proceeding under --force\n";
      }
      stein::Operator op(state);
      auto outcome = iterate(op, state, cfg);
      out.solution = {{"kind", "stein"},
                      {"solution", io::matrix_to_json(outcome.state.C)},
                      {"rho_product", rho}};
      out.report = std::move(outcome.report);
      break;
    }
    case io::ProblemKind::Pencil: {
      pencil::State state{problem.matrix("A"), problem.matrix("B")};
      auto result =
          pencil::stable_subspace_solve(state, problem.subspace_dim, cfg);
      if (result.b_norm_flagged) {
        std::cerr << "warning: ||B_k|| grew beyond 1e8 * ||B_1||; the "
                     "uniform-boundedness hypothesis looks violated\n";
      }
      out.solution = {{"kind", "pencil"},
                      {"U", io::matrix_to_json(result.U)},
                      {"Lambda", io::matrix_to_json(result.Lambda)},
                      {"subspace_residual", result.residual},
                      {"max_b_norm", result.max_b_norm}};
      out.report = std::move(result.report);
      break;
    }
    case io::ProblemKind::Nme: {
      auto [x, report] = nme::solve(problem.matrix("Q"), problem.matrix("A"),
                                    problem.matrix("B"), cfg);
      out.solution = {{"kind", "nme"}, {"solution", io::matrix_to_json(x)}};
      out.report = std::move(report);
      break;
    }
    case io::ProblemKind::Dare: {
      const Matrix& g = problem.matrix("G");
      const Matrix& h = problem.matrix("H");
      auto warn_if_indefinite = [](const char* name, const Matrix& m) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m));
        if (eig.info() == Eigen::Success &&
            eig.eigenvalues().minCoeff() < -1e-12) {
          std::cerr << "warning: " << name
                    << " is indefinite; convergence is not covered by the "
                       "positive-semidefinite theory\n";
        }
      };
      warn_if_indefinite("G", g);
      warn_if_indefinite("H", h);
      auto [x, report] =
          dare::solve(problem.matrix("A"), g, h, cfg);
      out.solution = {{"kind", "dare"}, {"solution", io::matrix_to_json(x)}};
      out.report = std::move(report);
      break;
    }
    case io::ProblemKind::ScalarLinear:
      return solve_scalar_linear(problem, cfg);
    case io::ProblemKind::ScalarRational:
      return solve_scalar_rational(problem, cfg);
    case io::ProblemKind::ScalarPair:
      return solve_scalar_pair(problem, cfg);
  }
  return out;
}

int cmd_solve(const std::string& path, SolverConfig cfg,
              const std::string& out_prefix, bool force) {
  io::ProblemFile problem;
  try {
    problem = io::load_problem(path);
  } catch (const ProblemFormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }
  try {
    SolveArtifacts artifacts = solve_problem(problem, cfg, force);
    artifacts.solution["status"] = to_string(artifacts.report.status);
    artifacts.solution["report"] = io::report_to_json(artifacts.report);
    {
      std::ofstream stream(out_prefix + ".solution.json");
      stream << artifacts.solution.dump(2) << "\n";
    }
    io::write_history_csv(out_prefix + ".history.csv", artifacts.report);
    std::cout << "status " << to_string(artifacts.report.status)
              << ", steps " << artifacts.report.steps() << ", final residual "
              << io::format_double(artifacts.report.final_residual()) << "\n";
    return status_exit_code(artifacts.report.status);
  } catch (const PreconditionError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  } catch (const ProblemFormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  } catch (const BreakdownError& err) {
    std::cerr << "breakdown: " << err.what() << "\n";
    return kExitBreakdown;
  } catch (const RankAmbiguityError& err) {
    std::cerr << "breakdown: " << err.what() << "\n";
    return kExitBreakdown;
  } catch (const SingularIterateError& err) {
    std::cerr << "breakdown: " << err.what() << "\n";
    return kExitBreakdown;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }
}

int bench_parallelism() {
  if (const char* env = std::getenv("SEMIFLOW_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_bench(const std::string& path, const std::vector<int>& orders,
              SolverConfig base_cfg, const std::string& out_prefix) {
  io::ProblemFile problem;
  try {
    problem = io::load_problem(path);
  } catch (const ProblemFormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }

  struct Cell {
    IterationMode mode;
    int order;
  };
  std::vector<Cell> cells{{IterationMode::Plain, 1}};
  for (int r : orders) {
    if (r < 2) {
      std::cerr << "error: --orders entries must be >= 2, got " << r << "\n";
      return kExitInputError;
    }
    cells.push_back({IterationMode::Accelerated, r});
  }

  std::vector<io::BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      SolverConfig cfg = base_cfg;
      cfg.mode = cell.mode;
      cfg.order = cell.mode == IterationMode::Plain ? 2 : cell.order;
      io::BenchRow row;
      row.mode = to_string(cell.mode);
      row.order = cell.order;
      try {
        SolveArtifacts artifacts = solve_problem(problem, cfg, false);
        row.outer_steps = static_cast<std::int64_t>(artifacts.report.steps());
        row.total_applies = artifacts.report.total_applies;
        row.final_residual = artifacts.report.final_residual();
        row.estimated_order = artifacts.report.estimated_order;
        row.status = to_string(artifacts.report.status);
      } catch (const Error& err) {
        row.status = std::string("Error: ") + err.what();
      }
      rows[i] = std::move(row);
    }
  };
  const int threads =
      std::min<int>(bench_parallelism(), static_cast<int>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  const std::string csv_path = out_prefix + ".bench.csv";
  io::write_bench_csv(csv_path, rows);
  for (const auto& row : rows) {
    std::cout << row.mode << " r=" << row.order << ": steps "
              << row.outer_steps << ", applies " << row.total_applies
              << ", residual " << io::format_double(row.final_residual) << ", "
              << row.status << "\n";
  }
  std::cout << "wrote " << csv_path << "\n";
  return kExitOk;
}

int cmd_check(const std::string& suite, std::uint64_t seed, int trials) {
  std::vector<SuiteOutcome> outcomes;
  if (suite == "associativity") {
    outcomes = associativity_suite(seed, trials);
  } else if (suite == "flow") {
    outcomes = flow_suite(seed);
  } else if (suite == "lemmas") {
    outcomes = lemma_suite(seed, trials);
  } else if (suite == "scalar-oracles") {
    outcomes = scalar_oracle_suite(seed, trials);
  } else if (suite == "all") {
    outcomes = all_suites(seed, trials);
  } else {
    std::cerr << "error: unknown suite '" << suite << "'\n";
    return kExitInputError;
  }
  bool all_pass = true;
  for (const auto& outcome : outcomes) {
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << outcome.name
              << ": max error " << io::format_double(outcome.max_error)
              << " (tol " << io::format_double(outcome.tolerance) << ", "
              << outcome.trials << " trials)\n";
  }
  return all_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "semiflow: semigroup-accelerated fixed-point solvers for structured "
      "matrix equations"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string out_prefix = "run";
  std::string mode = "accelerated";
  int order = 2;
  double tol = 1e-12;
  int max_iter = 1000;
  bool force = false;

  CLI::App* solve = app.add_subcommand("solve", "solve one problem file");
  solve->add_option("problem", problem_path, "problem JSON file")->required();
  solve->add_option("--mode", mode, "plain|accelerated")
      ->check(CLI::IsMember({"plain", "accelerated"}));
  solve->add_option("--order", order, "acceleration order r >= 2");
  solve->add_option("--tol", tol, "stopping tolerance");
  solve->add_option("--max-iter", max_iter, "outer iteration cap");
  solve->add_option("--out", out_prefix, "output path prefix");
  solve->add_flag("--force", force,
                  "run even when a solver precondition is violated");

  std::vector<int> orders{2, 3, 4};
  CLI::App* bench = app.add_subcommand(
      "bench", "compare plain vs accelerated across orders");
  bench->add_option("problem", problem_path, "problem JSON file")->required();
  bench
      ->add_option("--orders", orders,
                   "acceleration orders to benchmark (comma separated)")
      ->delimiter(',');
  bench->add_option("--tol", tol, "stopping tolerance");
  bench->add_option("--max-iter", max_iter, "outer iteration cap");
  bench->add_option("--out", out_prefix, "output path prefix");

  std::string suite = "all";
  std::uint64_t seed = 7;
  int trials = 100;
  CLI::App* check = app.add_subcommand("check", "run property-check suites");
  check->add_option("--suite", suite,
                    "associativity|flow|lemmas|scalar-oracles|all");
  check->add_option("--seed", seed, "RNG seed");
  check->add_option("--trials", trials, "trials per suite");

  CLI11_PARSE(app, argc, argv);

  SolverConfig cfg;
  cfg.order = order;
  cfg.tol = tol;
  cfg.max_outer = max_iter;
  cfg.mode =
      mode == "plain" ? IterationMode::Plain : IterationMode::Accelerated;
  cfg.seed = seed;

  try {
    if (solve->parsed()) return cmd_solve(problem_path, cfg, out_prefix, force);
    if (bench->parsed()) return cmd_bench(problem_path, orders, cfg, out_prefix);
    if (check->parsed()) return cmd_check(suite, seed, trials);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
