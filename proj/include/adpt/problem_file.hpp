#pragma once

#include <string>

#include "adpt/model_based.hpp"
#include "adpt/system.hpp"

namespace adpt {

// Sectioned key = value problem description ('#' lines are comments):
//
//   [system]   n, m, f (n rows, ';' separated), g (n x m; rows ';', cols ',')
//   [cost]     q (expression), R (m x m numeric matrix)
//   [adp]      d, crit, epsilon, maxIter, stride, seed            (optional)
//   [explore]  xInit, xInitNum, xInitMin, xInitMax, tSpan, dt, segment,
//              u0, eta, explAmpl, numFreq                         (optional)
//
// xInit and tSpan are numeric matrices (one row per trajectory, ';' between
// rows); eta takes m rows (shared) or m rows per trajectory.  Every
// validation error names the file, section and key.
struct ProblemFile {
  ControlProblem system;
  int d = 1;
  ModelBasedOptions options;
};

ProblemFile load_problem_file(const std::string& path);

}  // namespace adpt
