#pragma once

// Derivative-free minimization: Nelder-Mead simplex with deterministic
// multi-start.  The objectives here (entropy over measurement angles or
// ensemble rotations) are smooth but non-convex, so restarts from seeded
// random points provide the global coverage and the spread across restarts
// doubles as a convergence diagnostic.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "ssalab/parallel.hpp"

namespace ssalab {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NmOptions {
  int max_iterations = 4000;
  double f_tolerance = 1e-13;  // stop when the simplex value spread drops below
  double x_tolerance = 1e-8;   // ... and the vertex spread below
  double initial_step = 0.35;
};

struct NmResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

NmResult nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& start,
                              const NmOptions& options = {});

struct MultistartResult {
  NmResult best;
  double spread = 0.0;  // max - min of the per-restart optima
  std::vector<double> restart_values;
};

// Runs `restarts` independent minimizations from uniform starts in
// [lower, upper]^dim (restart k is seeded from derive_seed(seed, k)) and
// keeps the best by (value, restart index) — deterministic regardless of
// execution order.
MultistartResult multistart_minimize(const Objective& f, int dim, int restarts,
                                     std::uint64_t seed, double lower, double upper,
                                     const NmOptions& options = {},
                                     ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace ssalab
