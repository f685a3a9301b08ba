// adpt — approximate-optimal polynomial feedback synthesis.
//
// Subcommands: solve-mb (symbolic dynamics), solve-mf (recorded
// trajectories), simulate, eval, bench.  Exit codes: 0 success, 1 input or
// file errors, 2 algorithmic failure (no persistent excitation, divergence,
// or non-convergence).

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "adpt/adp.hpp"
#include "adpt/benchmark.hpp"
#include "adpt/controller.hpp"
#include "adpt/errors.hpp"
#include "adpt/expr.hpp"
#include "adpt/model_based.hpp"
#include "adpt/model_free.hpp"
#include "adpt/problem_file.hpp"
#include "adpt/system.hpp"

namespace {

void print_report(const adpt::AdpReport& report) {
  if (!report.data_tag.empty()) std::printf("data:        %s\n", report.data_tag.c_str());
  std::printf("unknowns:    %lld\n", static_cast<long long>(report.columns));
  std::printf("iterations:  %d (%s)\n", report.iterations,
              report.converged ? "converged" : "NOT converged");
  std::printf("final delta: %.6g\n", report.final_delta);
  if (!report.ranks.empty()) {
    std::printf("rank:       ");
    for (const Eigen::Index r : report.ranks)
      std::printf(" %lld", static_cast<long long>(r));
    std::printf(" (of %lld)\n", static_cast<long long>(report.columns));
  }
  for (const std::string& w : report.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
}

// Returns the exit code: writes the controller only after convergence.
int finish_solve(const adpt::PolynomialController& ctrl, const adpt::AdpReport& report,
                 const std::string& out) {
  print_report(report);
  if (!report.converged) {
    std::fprintf(stderr,
                 "error: no convergence within %d iterations (final delta %.6g); "
                 "no controller written\n",
                 report.iterations, report.final_delta);
    return 2;
  }
  adpt::save_controller(ctrl, out);
  std::printf("controller written to %s\n", out.c_str());
  return 0;
}

Eigen::VectorXd parse_state_vector(const std::string& text, int n, const char* flag) {
  Eigen::MatrixXd v = adpt::parse_numeric_matrix(text);
  if (v.rows() == 1) v.transposeInPlace();
  if (v.cols() != 1 || v.rows() != n)
    throw adpt::InputError(std::string(flag) + " needs " + std::to_string(n) +
                           " comma-separated entries");
  return v.col(0);
}

std::string format_input(const Eigen::VectorXd& u) {
  char buf[64];
  if (u.size() == 1) {
    std::snprintf(buf, sizeof buf, "%.10g", u[0]);
    return buf;
  }
  std::string out = "[";
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", u[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + "]";
}

struct SolveMbArgs {
  std::string problem;
  std::string out = "controller.ctrl";
  int degree = 0;
  std::uint64_t seed = 0;
  int stride = 0;
  int crit = 0;
  double epsilon = 0;
  int max_iter = 0;
  double dt = 0;
  double segment = 0;
};

struct SolveMfArgs {
  std::string data;
  int n = 0;
  int m = 0;
  std::string q;
  std::string R;
  int degree = 1;
  int stride = 1;
  std::string out = "controller.ctrl";
  int crit = 1;
  double epsilon = 1e-3;
  int max_iter = 100;
};

struct SimulateArgs {
  std::string problem;
  std::string controller;
  std::string x0;
  double tf = 0;
  double dt = 1e-3;
  std::string out = "trajectory.csv";
  bool cost_only = false;
};

struct EvalArgs {
  std::string controller;
  std::string x;
};

struct BenchArgs {
  std::string system;
  std::string mode = "mb";
  int degree = 2;
  std::uint64_t seed = 1;
  std::string out;
};

int run_solve_mb(const SolveMbArgs& args, const CLI::App& cmd) {
  adpt::ProblemFile pf = adpt::load_problem_file(args.problem);
  if (cmd.count("--degree")) pf.d = args.degree;
  adpt::ModelBasedOptions& opt = pf.options;
  if (cmd.count("--seed")) opt.seed = args.seed;
  if (cmd.count("--stride")) opt.stride = args.stride;
  if (cmd.count("--crit")) opt.crit = args.crit;
  if (cmd.count("--epsilon")) opt.epsilon = args.epsilon;
  if (cmd.count("--max-iter")) opt.max_iter = args.max_iter;
  if (cmd.count("--dt")) opt.dt = args.dt;
  if (cmd.count("--segment")) opt.segment = args.segment;
  adpt::ModelBasedResult res = adpt::solve_model_based(pf.system, pf.d, opt);
  return finish_solve(res.controller, res.report, args.out);
}

int run_solve_mf(const SolveMfArgs& args) {
  adpt::TrajectoryLog log = adpt::load_trajectories(args.data, args.n, args.m);
  adpt::ExprPtr q = adpt::parse_expression(args.q);
  Eigen::MatrixXd R = adpt::parse_numeric_matrix(args.R);
  adpt::ModelFreeOptions opt;
  opt.stride = args.stride;
  opt.crit = args.crit;
  opt.epsilon = args.epsilon;
  opt.max_iter = args.max_iter;
  adpt::ModelFreeResult res = adpt::solve_model_free(log, q, R, args.degree, opt);
  return finish_solve(res.controller, res.report, args.out);
}

int run_simulate(const SimulateArgs& args) {
  adpt::ProblemFile pf = adpt::load_problem_file(args.problem);
  adpt::PolynomialController ctrl = adpt::load_controller(args.controller);
  if (ctrl.state_dim() != pf.system.n || ctrl.input_dim() != pf.system.m)
    throw adpt::InputError("controller is for n = " + std::to_string(ctrl.state_dim()) +
                           ", m = " + std::to_string(ctrl.input_dim()) +
                           " but the problem has n = " + std::to_string(pf.system.n) +
                           ", m = " + std::to_string(pf.system.m));
  const Eigen::VectorXd x0 = parse_state_vector(args.x0, pf.system.n, "--x0");
  if (!(args.tf > 0)) throw adpt::InputError("--tf must be positive");
  if (!(args.dt > 0)) throw adpt::InputError("--dt must be positive");
  adpt::Simulation sim =
      adpt::simulate_closed_loop(pf.system, ctrl, x0, args.tf, args.dt);
  if (args.cost_only) {
    std::printf("%.17g\n", sim.total_cost);
    return 0;
  }
  adpt::save_trajectory_csv(sim, args.out);
  std::printf("J(x0)      = %.10g over [0, %g]\n", sim.total_cost, args.tf);
  std::printf("tail rate  = %.6g  (cost integrand at tf)\n", sim.tail_integrand);
  std::printf("final |x|  = %.6g\n", sim.x.back().norm());
  std::printf("trajectory written to %s (%zu samples)\n", args.out.c_str(), sim.t.size());
  return 0;
}

int run_eval(const EvalArgs& args) {
  adpt::PolynomialController ctrl = adpt::load_controller(args.controller);
  const Eigen::VectorXd x = parse_state_vector(args.x, ctrl.state_dim(), "--x");
  std::printf("u = %s\n", format_input(ctrl.eval_control(x)).c_str());
  std::printf("V = %.10g\n", ctrl.eval_value(x));
  return 0;
}

int run_bench(const BenchArgs& args) {
  std::string out = args.out;
  if (out.empty())
    out = args.system + "_" + args.mode + "_d" + std::to_string(args.degree) + ".ctrl";
  adpt::BenchmarkOutcome res =
      adpt::run_benchmark(args.system, args.mode, args.degree, args.seed);
  std::printf("%s", adpt::format_benchmark_table({res.row}).c_str());
  for (const std::string& w : res.report.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!res.row.converged) {
    std::fprintf(stderr,
                 "error: no convergence within %d iterations (final delta %.6g); "
                 "no controller written\n",
                 res.report.iterations, res.report.final_delta);
    return 2;
  }
  adpt::save_controller(res.controller, out);
  std::printf("controller written to %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate-optimal polynomial feedback synthesis"};
  app.require_subcommand(1);

  SolveMbArgs mb;
  CLI::App* cmd_mb = app.add_subcommand(
      "solve-mb", "synthesize a controller from symbolic dynamics (problem file)");
  cmd_mb->add_option("--problem", mb.problem, "problem file")->required();
  cmd_mb->add_option("--degree", mb.degree, "feedback polynomial degree (overrides the file)")
      ->check(CLI::Range(1, 32));
  cmd_mb->add_option("--out", mb.out, "controller output path")
      ->capture_default_str();
  cmd_mb->add_option("--seed", mb.seed, "RNG seed for exploration (default 1)");
  cmd_mb->add_option("--stride", mb.stride, "segments merged per equation (default 1)")
      ->check(CLI::PositiveNumber);
  cmd_mb->add_option("--crit", mb.crit, "stop criterion 0..3 (default 1)")
      ->check(CLI::Range(0, 3));
  cmd_mb->add_option("--epsilon", mb.epsilon, "stop tolerance (default 0.001)")
      ->check(CLI::PositiveNumber);
  cmd_mb->add_option("--max-iter", mb.max_iter, "iteration cap (default 100)")
      ->check(CLI::PositiveNumber);
  cmd_mb->add_option("--dt", mb.dt, "integrator step (default 0.001)")
      ->check(CLI::PositiveNumber);
  cmd_mb->add_option("--segment", mb.segment, "seconds per data segment (default 0.05)")
      ->check(CLI::PositiveNumber);

  SolveMfArgs mf;
  CLI::App* cmd_mf = app.add_subcommand(
      "solve-mf", "synthesize a controller from recorded trajectories (CSV)");
  cmd_mf->add_option("--data", mf.data, "trajectory CSV")->required();
  cmd_mf->add_option("--n", mf.n, "state dimension")->required()->check(CLI::PositiveNumber);
  cmd_mf->add_option("--m", mf.m, "input dimension")->required()->check(CLI::PositiveNumber);
  cmd_mf->add_option("--q", mf.q, "state cost expression, e.g. '5*x1^2 + 3*x2^2'")
      ->required();
  cmd_mf->add_option("--R", mf.R, "control weight matrix, e.g. '2' or '1,0; 0,1'")
      ->required();
  cmd_mf->add_option("--degree", mf.degree, "feedback polynomial degree")
      ->capture_default_str()
      ->check(CLI::Range(1, 32));
  cmd_mf->add_option("--stride", mf.stride, "sample intervals merged per equation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_mf->add_option("--out", mf.out, "controller output path")->capture_default_str();
  cmd_mf->add_option("--crit", mf.crit, "stop criterion 0..3")
      ->capture_default_str()
      ->check(CLI::Range(0, 3));
  cmd_mf->add_option("--epsilon", mf.epsilon, "stop tolerance")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_mf->add_option("--max-iter", mf.max_iter, "iteration cap")->capture_default_str()
      ->check(CLI::PositiveNumber);

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "closed-loop rollout of a saved controller on a problem");
  cmd_sim->add_option("--problem", sim.problem, "problem file")->required();
  cmd_sim->add_option("--controller", sim.controller, "controller file")->required();
  cmd_sim->add_option("--x0", sim.x0, "initial state, e.g. '-3, 2'")->required();
  cmd_sim->add_option("--tf", sim.tf, "final time")->required();
  cmd_sim->add_option("--dt", sim.dt, "integrator step")->capture_default_str();
  cmd_sim->add_option("--out", sim.out, "trajectory CSV path")->capture_default_str();
  cmd_sim->add_flag("--cost", sim.cost_only, "print only the accumulated cost");

  EvalArgs ev;
  CLI::App* cmd_eval =
      app.add_subcommand("eval", "evaluate a saved controller at one state");
  cmd_eval->add_option("--controller", ev.controller, "controller file")->required();
  cmd_eval->add_option("--x", ev.x, "state, e.g. '0.5, -1'")->required();

  BenchArgs bench;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "run a built-in benchmark (satellite or scalar)");
  cmd_bench->add_option("system", bench.system, "benchmark system")
      ->required()
      ->check(CLI::IsMember({"satellite", "scalar"}));
  cmd_bench->add_option("--mode", bench.mode, "mb (symbolic) or mf (recorded data)")
      ->capture_default_str()
      ->check(CLI::IsMember({"mb", "mf"}));
  cmd_bench->add_option("--degree", bench.degree, "feedback polynomial degree")
      ->capture_default_str()
      ->check(CLI::Range(1, 32));
  cmd_bench->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  cmd_bench->add_option("--out", bench.out,
                        "controller output path (default <system>_<mode>_d<degree>.ctrl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message or the help text
    return code == 0 ? 0 : 1;      // flag mistakes are input errors
  }

  try {
    if (cmd_mb->parsed()) return run_solve_mb(mb, *cmd_mb);
    if (cmd_mf->parsed()) return run_solve_mf(mf);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_eval->parsed()) return run_eval(ev);
    if (cmd_bench->parsed()) return run_bench(bench);
  } catch (const adpt::ExcitationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const adpt::DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
