#include "ssalab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssalab/rng.hpp"

namespace ssalab {

NmResult nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& start,
                              const NmOptions& options) {
  const int n = static_cast<int>(start.size());
  if (n < 1) throw std::invalid_argument("optimizer needs at least one parameter");

  // Standard coefficients: reflection, expansion, contraction, shrink.
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;

  std::vector<Eigen::VectorXd> x(n + 1, start);
  std::vector<double> fx(n + 1);
  for (int i = 1; i <= n; ++i) x[i](i - 1) += options.initial_step;
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<int> order(n + 1);
  NmResult result;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    double x_spread = 0.0;
    for (int i = 1; i <= n; ++i)
      x_spread = std::max(x_spread, (x[order[i]] - x[best]).lpNorm<Eigen::Infinity>());
    if (fx[worst] - fx[best] <= options.f_tolerance && x_spread <= options.x_tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += x[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + alpha * (centroid - x[worst]);
    const double fr = f(xr);
    if (fr < fx[best]) {
      Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second_worst]) {
      x[worst] = xr;
      fx[worst] = fr;
      continue;
    }
    // Contract toward the better of (worst, reflected).
    const bool outside = fr < fx[worst];
    Eigen::VectorXd xc =
        outside ? centroid + beta * (xr - centroid) : centroid + beta * (x[worst] - centroid);
    const double fc = f(xc);
    if (fc < std::min(fr, fx[worst])) {
      x[worst] = xc;
      fx[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      x[i] = x[best] + delta * (x[i] - x[best]);
      fx[i] = f(x[i]);
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fx[i] < fx[best]) best = i;
  result.x = x[best];
  result.value = fx[best];
  result.iterations = iter;
  return result;
}

MultistartResult multistart_minimize(const Objective& f, int dim, int restarts,
                                     std::uint64_t seed, double lower, double upper,
                                     const NmOptions& options, ExecPolicy policy) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  std::vector<NmResult> results(restarts);
  parallel_for(static_cast<std::size_t>(restarts), policy, [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    Eigen::VectorXd start(dim);
    for (int i = 0; i < dim; ++i) start(i) = rng.uniform(lower, upper);
    results[k] = nelder_mead_minimize(f, start, options);
  });

  MultistartResult out;
  out.restart_values.reserve(restarts);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  int best = 0;
  for (int k = 0; k < restarts; ++k) {
    out.restart_values.push_back(results[k].value);
    lo = std::min(lo, results[k].value);
    hi = std::max(hi, results[k].value);
    if (results[k].value < results[best].value) best = k;
  }
  out.best = results[best];
  out.spread = hi - lo;
  return out;
}

}  // namespace ssalab
