#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "adpt/adp.hpp"
#include "adpt/controller.hpp"
#include "adpt/expr.hpp"

namespace adpt {

// One recorded sample: state plus the initial-policy input u0 and the
// exploration signal eta that were applied while recording (the actual
// input was u0 + eta).
struct TrajectorySample {
  double t = 0.0;
  Eigen::VectorXd x;    // n
  Eigen::VectorXd u0;   // m
  Eigen::VectorXd eta;  // m
};

struct TrajectoryLog {
  int n = 0;
  int m = 0;
  std::vector<std::vector<TrajectorySample>> trajectories;

  std::size_t total_samples() const;
};

// CSV with header t,x1..xn,u0_1..u0_m,eta_1..eta_m[,traj]; '#' lines are
// comments.  Rows group into trajectories by the traj column when present,
// otherwise a new trajectory starts wherever t does not strictly increase.
// Errors carry the file name and line number.
TrajectoryLog load_trajectories(const std::string& path, int n, int m);

// Inverse of load_trajectories (always writes the traj column);
// load(save(log)) reproduces the log exactly.
void save_trajectories(const TrajectoryLog& log, const std::string& path);

struct ModelFreeOptions {
  int stride = 1;
  int crit = 1;
  double epsilon = 1e-3;
  int max_iter = 100;
};

// One segment per run of `stride` consecutive sample intervals, integrals by
// composite trapezoid over all stride+1 samples of the run; a trajectory
// tail that does not fill a stride is dropped.  Throws InputError when no
// trajectory is long enough.  When the sampling looks too coarse for the
// recorded exploration signals a warning is appended to *warnings.
std::vector<SegmentData> build_segments(
    const TrajectoryLog& log, const std::function<double(const Eigen::VectorXd&)>& q,
    const Eigen::MatrixXd& R, int d, int stride,
    std::vector<std::string>* warnings = nullptr);

struct ModelFreeResult {
  PolynomialController controller;
  AdpReport report;
};

// build_segments -> adp_iterate on recorded data alone.
ModelFreeResult solve_model_free(const TrajectoryLog& log, const ExprPtr& q,
                                 const Eigen::MatrixXd& R, int d,
                                 const ModelFreeOptions& opts);

}  // namespace adpt
