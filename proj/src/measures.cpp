#include "ssalab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ssalab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Verifies that the groups are disjoint and cover the layout.
void require_partition(const SubsystemLayout& layout,
                       const std::vector<const std::vector<std::string>*>& groups) {
  std::vector<int> all;
  for (const auto* g : groups) {
    std::vector<int> idx = layout.group_indices(*g);
    all.insert(all.end(), idx.begin(), idx.end());
  }
  std::sort(all.begin(), all.end());
  if (static_cast<int>(all.size()) != layout.part_count())
    throw std::invalid_argument("groups must partition the layout");
  for (int i = 0; i < static_cast<int>(all.size()); ++i)
    if (all[i] != i) throw std::invalid_argument("groups overlap or miss parts");
}

std::vector<std::string> group_union(const SubsystemLayout& layout,
                                     const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::vector<std::string> u = a;
  u.insert(u.end(), b.begin(), b.end());
  // normalize to layout order
  std::vector<std::string> ordered;
  for (int i : layout.group_indices(u)) ordered.push_back(layout.label(i));
  return ordered;
}

// Entropy in bits of rt/p for a PSD block rt with trace p.
double entropy_scaled(const Matrix& rt, double p) {
  if (rt.rows() == 2) {
    const double a = rt(0, 0).real() / p;
    const double d = rt(1, 1).real() / p;
    const double off = std::abs(rt(0, 1)) / p;
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    double hi = 0.5 * (a + d) + disc;
    hi = std::clamp(hi, 0.0, 1.0);
    return binary_entropy(hi);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rt, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lam = es.eigenvalues()(k) / p;
    if (lam > kSupportCutoff) s -= lam * std::log2(lam);
  }
  return s;
}

// Post-measurement conditional blocks of rho for a measured group:
// blocks[a*dm+b](r,r2) = rho[(a,r),(b,r2)], so the unnormalized conditional
// state for basis vector u is sum_{a,b} conj(u_a) u_b blocks[a*dm+b].
struct ConditionalKernel {
  int dm = 0;
  int dr = 0;
  std::vector<Matrix> blocks;

  ConditionalKernel(const DensityMatrix& rho, const std::vector<std::string>& measured) {
    GroupIndexer ix(rho.layout, rho.layout.group_indices(measured));
    dm = ix.group_dim();
    dr = ix.rest_dim();
    blocks.reserve(dm * dm);
    for (int a = 0; a < dm; ++a)
      for (int b = 0; b < dm; ++b) {
        Matrix t(dr, dr);
        for (int r = 0; r < dr; ++r)
          for (int r2 = 0; r2 < dr; ++r2)
            t(r, r2) = rho.mat(ix.full_index(a, r), ix.full_index(b, r2));
        blocks.push_back(std::move(t));
      }
  }

  // sum_k p_k S(conditional_k) for the basis defined by the angles.
  double conditional_entropy(const Eigen::VectorXd& angles) const {
    const Matrix u = unitary_from_angles(dm, angles);
    Matrix rt(dr, dr);
    double total = 0.0;
    for (int k = 0; k < dm; ++k) {
      rt.setZero();
      for (int a = 0; a < dm; ++a)
        for (int b = 0; b < dm; ++b) {
          const Complex w = std::conj(u(a, k)) * u(b, k);
          rt.noalias() += w * blocks[a * dm + b];
        }
      const double p = rt.trace().real();
      if (p > 1e-14) total += p * entropy_scaled(rt, p);
    }
    return total;
  }
};

NmOptions nm_options(const OptimizerConfig& config) {
  NmOptions opt;
  opt.max_iterations = config.max_iterations;
  opt.f_tolerance = config.tolerance;
  return opt;
}

}  // namespace

double binary_entropy(double p) {
  double s = 0.0;
  if (p > kSupportCutoff) s -= p * std::log2(p);
  const double q = 1.0 - p;
  if (q > kSupportCutoff) s -= q * std::log2(q);
  return s;
}

double von_neumann_entropy(const Matrix& m) {
  EigenSystem sys = hermitian_eigen(m);
  double s = 0.0;
  for (Eigen::Index k = 0; k < sys.values.size(); ++k) {
    const double lam = sys.values(k);
    if (lam < -1e-8) throw std::invalid_argument("entropy of a non-positive matrix");
    if (lam > kSupportCutoff) s -= lam * std::log2(lam);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.mat); }

double subsystem_entropy(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  return von_neumann_entropy(partial_trace(rho.mat, rho.layout, keep));
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw std::invalid_argument("relative entropy needs equal dimensions");
  EigenSystem ss = hermitian_eigen(sigma);
  double leak = 0.0;
  double cross = 0.0;  // Tr rho log2 sigma over the support
  for (Eigen::Index k = 0; k < ss.values.size(); ++k) {
    const Vector v = ss.vectors.col(k);
    const double overlap = (v.adjoint() * rho * v)(0, 0).real();
    if (ss.values(k) > kSupportCutoff)
      cross += std::log2(ss.values(k)) * overlap;
    else
      leak += std::max(0.0, overlap);
  }
  if (leak > 1e-10) return std::numeric_limits<double>::infinity();
  const double value = -von_neumann_entropy(rho) - cross;
  return std::max(0.0, value);
}

double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                          const std::vector<std::string>& part_b) {
  require_partition(rho.layout, {&part_a, &part_b});
  return subsystem_entropy(rho, part_a) + subsystem_entropy(rho, part_b) -
         von_neumann_entropy(rho);
}

double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& c) {
  require_partition(rho.layout, {&a, &b, &c});
  const std::vector<std::string> ab = group_union(rho.layout, a, b);
  const std::vector<std::string> bc = group_union(rho.layout, b, c);
  return subsystem_entropy(rho, ab) + subsystem_entropy(rho, bc) - subsystem_entropy(rho, b) -
         von_neumann_entropy(rho);
}

double coherent_information(const DensityMatrix& rho, const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
  require_partition(rho.layout, {&a, &b});
  return subsystem_entropy(rho, b) - von_neumann_entropy(rho);
}

int measurement_parameter_count(int dim) { return dim * (dim - 1); }

Matrix unitary_from_angles(int dim, const Eigen::VectorXd& angles) {
  if (angles.size() != measurement_parameter_count(dim))
    throw std::invalid_argument("wrong number of measurement angles");
  Matrix u = Matrix::Identity(dim, dim);
  int k = 0;
  for (int i = 0; i < dim - 1; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double theta = angles(k), phi = angles(k + 1);
      k += 2;
      const double c = std::cos(theta), s = std::sin(theta);
      const Complex e = std::polar(1.0, phi);
      Matrix g = Matrix::Identity(dim, dim);
      g(i, i) = c;
      g(i, j) = -std::conj(e) * s;
      g(j, i) = e * s;
      g(j, j) = c;
      u = u * g;
    }
  return u;
}

ProjectiveMeasurement measurement_from_angles(const SubsystemLayout& layout,
                                              const std::vector<std::string>& target,
                                              const Eigen::VectorXd& angles) {
  const int dm = layout.group_dim(target);
  const Matrix u = unitary_from_angles(dm, angles);
  ProjectiveMeasurement m;
  for (int i : layout.group_indices(target)) m.target.push_back(layout.label(i));
  m.parameters = angles;
  for (int k = 0; k < dm; ++k) m.projectors.push_back(u.col(k) * u.col(k).adjoint());
  return m;
}

MeasureResult classical_correlation(const DensityMatrix& rho,
                                    const std::vector<std::string>& measured,
                                    const OptimizerConfig& config) {
  const int dm = rho.layout.group_dim(measured);
  if (dm < 2 || dm > 4)
    throw std::invalid_argument("measured group dimension must be 2, 3 or 4");
  const std::vector<std::string> rest = rho.layout.complement(measured);
  if (rest.empty()) throw std::invalid_argument("measuring the whole system is not meaningful");

  const double s_rest = subsystem_entropy(rho, rest);
  ConditionalKernel kernel(rho, measured);
  const Objective objective = [&kernel](const Eigen::VectorXd& angles) {
    return kernel.conditional_entropy(angles);
  };
  MultistartResult ms =
      multistart_minimize(objective, measurement_parameter_count(dm), config.restarts,
                          config.seed, 0.0, kTwoPi, nm_options(config), config.policy);

  MeasureResult result;
  result.value = s_rest - ms.best.value;
  if (result.value < 0.0 && result.value > -1e-9) result.value = 0.0;
  result.measurement = measurement_from_angles(rho.layout, measured, ms.best.x);
  result.converged = ms.best.converged;
  result.spread_over_restarts = ms.spread;
  return result;
}

MeasureResult quantum_discord(const DensityMatrix& rho, const std::vector<std::string>& measured,
                              const OptimizerConfig& config) {
  MeasureResult j = classical_correlation(rho, measured, config);
  const std::vector<std::string> rest = rho.layout.complement(measured);
  const double mi = subsystem_entropy(rho, rest) + subsystem_entropy(rho, measured) -
                    von_neumann_entropy(rho);
  MeasureResult result = j;
  result.value = mi - j.value;
  if (result.value < 0.0 && result.value > -1e-9) result.value = 0.0;
  return result;
}

double discord_via_koashi_winter(const DensityMatrix& pure_global, const std::string& a,
                                 const std::vector<std::string>& measured,
                                 const std::vector<std::string>& complement) {
  if (!is_pure(pure_global))
    throw std::invalid_argument("purification oracle needs a pure global state");
  const std::vector<std::string> a_group{a};
  require_partition(pure_global.layout, {&a_group, &measured, &complement});
  if (pure_global.layout.group_dim(a_group) != 2 ||
      pure_global.layout.group_dim(complement) != 2)
    throw std::invalid_argument(
        "purification oracle needs the unmeasured pair to be two qubits");

  // E(a, complement) from the closed form on the reduced pair, with the
  // group split placed first by an explicit permutation.
  const std::vector<std::string> pair = group_union(pure_global.layout, a_group, complement);
  DensityMatrix red = reduced_state(pure_global, pair);
  std::vector<std::string> order = group_union(red.layout, a_group, {});
  for (const std::string& label : group_union(red.layout, complement, {}))
    order.push_back(label);
  const Matrix pair_mat = permute_parts(red.mat, red.layout, order);

  const double c = concurrence_two_qubit(pair_mat);
  const double e = binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));

  const std::vector<std::string> am = group_union(pure_global.layout, a_group, measured);
  const double cond = subsystem_entropy(pure_global, am) -
                      subsystem_entropy(pure_global, measured);
  return e - cond;
}

double concurrence_two_qubit(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("concurrence needs a 4-dimensional state");
  Matrix yy = Matrix::Zero(4, 4);  // (sigma_y (x) sigma_y), real in this basis
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix tilde = yy * rho.conjugate() * yy;
  const Matrix sq = sqrt_on_support(rho);
  EigenSystem sys = hermitian_eigen(sq * tilde * sq);
  double lams[4];
  for (int k = 0; k < 4; ++k) lams[k] = std::sqrt(std::max(0.0, sys.values(k)));
  return std::max(0.0, lams[0] - lams[1] - lams[2] - lams[3]);
}

double eof_two_qubit(const DensityMatrix& rho) {
  if (rho.layout.total_dim() != 4 || rho.layout.part_count() != 2 ||
      rho.layout.dim(0) != 2 || rho.layout.dim(1) != 2)
    throw std::invalid_argument("closed-form EoF needs a two-qubit state");
  const double c = concurrence_two_qubit(rho.mat);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

namespace {

// Workspace for the ensemble minimization: tracks the m unnormalized
// decomposition vectors and the cost p_i S(A_i) of each.
struct EnsembleWorkspace {
  const GroupIndexer* ix = nullptr;
  int da = 0;
  std::vector<Vector> vecs;
  std::vector<double> costs;

  double vector_cost(const Vector& v) const {
    const double p = v.squaredNorm();
    if (p < 1e-14) return 0.0;
    Matrix ra(da, da);
    const int dr = ix->rest_dim();
    for (int i = 0; i < da; ++i)
      for (int i2 = 0; i2 < da; ++i2) {
        Complex s = 0.0;
        for (int r = 0; r < dr; ++r)
          s += v(ix->full_index(i, r)) * std::conj(v(ix->full_index(i2, r)));
        ra(i, i2) = s;
      }
    return p * entropy_scaled(ra, p);
  }

  double total() const {
    double t = 0.0;
    for (double c : costs) t += c;
    return t;
  }
};

}  // namespace

MeasureResult eof_ensemble_min(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                               const std::vector<std::string>& part_b,
                               const OptimizerConfig& config) {
  require_partition(rho.layout, {&part_a, &part_b});
  if (rho.layout.total_dim() > 16)
    throw std::invalid_argument("ensemble minimization limited to dimension 16");

  EigenSystem sys = hermitian_eigen(rho.mat);
  const int d = rho.layout.total_dim();
  int rank = 0;
  for (Eigen::Index k = 0; k < sys.values.size(); ++k)
    if (sys.values(k) > kSupportCutoff) ++rank;
  rank = std::max(rank, 1);

  GroupIndexer ix(rho.layout, rho.layout.group_indices(part_a));
  const int m = std::min(rank * rank, 16);

  // Base vectors sqrt(lambda_k)|v_k>; every size-m decomposition is obtained
  // from them by an m x rank isometry (rows = ensemble members).
  std::vector<Vector> base(rank);
  for (int k = 0; k < rank; ++k) base[k] = std::sqrt(sys.values(k)) * sys.vectors.col(k);

  EnsembleWorkspace proto;
  proto.ix = &ix;
  proto.da = ix.group_dim();

  if (rank == 1) {
    MeasureResult res;
    Vector v = base[0];
    res.value = proto.vector_cost(v);
    res.ensemble = PureEnsemble{{1.0}, {v.normalized()}};
    res.converged = true;
    return res;
  }

  NmOptions pair_opt;
  pair_opt.max_iterations = 240;
  pair_opt.f_tolerance = 1e-13;
  pair_opt.x_tolerance = 1e-7;
  pair_opt.initial_step = 0.4;

  struct RestartOutcome {
    double value = 0.0;
    std::vector<Vector> vecs;
    bool converged = false;
  };
  std::vector<RestartOutcome> outcomes(config.restarts);

  parallel_for(static_cast<std::size_t>(config.restarts), config.policy, [&](std::size_t r) {
    EnsembleWorkspace w = proto;
    w.vecs.assign(m, Vector::Zero(d));
    // Restart 0 starts from the eigendecomposition itself; later restarts
    // from Haar-random ancilla rotations.
    if (r == 0) {
      for (int k = 0; k < rank; ++k) w.vecs[k] = base[k];
    } else {
      Rng rng(derive_seed(config.seed, r));
      Matrix u = random_unitary(m, rng);
      for (int i = 0; i < m; ++i) {
        Vector v = Vector::Zero(d);
        for (int k = 0; k < rank; ++k) v += std::conj(u(i, k)) * base[k];
        w.vecs[i] = v;
      }
    }
    w.costs.resize(m);
    for (int i = 0; i < m; ++i) w.costs[i] = w.vector_cost(w.vecs[i]);

    // Jacobi-style pairwise sweeps: each (i, j) subproblem is a 2-angle
    // rotation mixing only those two members, so only their costs change.
    bool settled = false;
    for (int sweep = 0; sweep < 10 && !settled; ++sweep) {
      double improvement = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          const double before = w.costs[i] + w.costs[j];
          if (w.vecs[i].squaredNorm() < 1e-14 && w.vecs[j].squaredNorm() < 1e-14) continue;
          const Objective pair_obj = [&](const Eigen::VectorXd& x) {
            const double c = std::cos(x(0)), s = std::sin(x(0));
            const Complex e = std::polar(1.0, x(1));
            const Vector vi = c * w.vecs[i] - e * s * w.vecs[j];
            const Vector vj = std::conj(e) * s * w.vecs[i] + c * w.vecs[j];
            return w.vector_cost(vi) + w.vector_cost(vj);
          };
          NmResult nm = nelder_mead_minimize(pair_obj, Eigen::VectorXd::Zero(2), pair_opt);
          if (nm.value < before - 1e-13) {
            const double c = std::cos(nm.x(0)), s = std::sin(nm.x(0));
            const Complex e = std::polar(1.0, nm.x(1));
            const Vector vi = c * w.vecs[i] - e * s * w.vecs[j];
            const Vector vj = std::conj(e) * s * w.vecs[i] + c * w.vecs[j];
            w.vecs[i] = vi;
            w.vecs[j] = vj;
            w.costs[i] = w.vector_cost(vi);
            w.costs[j] = w.vector_cost(vj);
            improvement += before - nm.value;
          }
        }
      settled = improvement < 1e-11;
    }
    outcomes[r] = {w.total(), w.vecs, settled};
  });

  int best = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int r = 0; r < config.restarts; ++r) {
    lo = std::min(lo, outcomes[r].value);
    hi = std::max(hi, outcomes[r].value);
    if (outcomes[r].value < outcomes[best].value) best = r;
  }

  MeasureResult res;
  res.value = std::max(0.0, outcomes[best].value);
  res.converged = outcomes[best].converged;
  res.spread_over_restarts = hi - lo;
  PureEnsemble ens;
  for (const Vector& v : outcomes[best].vecs) {
    const double p = v.squaredNorm();
    if (p < 1e-14) continue;
    ens.probs.push_back(p);
    ens.states.push_back(v / std::sqrt(p));
  }
  res.ensemble = std::move(ens);
  return res;
}

double eof_auto(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                const std::vector<std::string>& part_b, const OptimizerConfig& config) {
  const std::vector<std::string> pair = group_union(rho.layout, part_a, part_b);
  DensityMatrix red = reduced_state(rho, pair);
  const int da = red.layout.group_dim(part_a);
  const int db = red.layout.group_dim(part_b);
  if (da == 2 && db == 2) {
    std::vector<std::string> order = group_union(red.layout, part_a, {});
    for (const std::string& label : group_union(red.layout, part_b, {}))
      order.push_back(label);
    const Matrix m = permute_parts(red.mat, red.layout, order);
    const double c = concurrence_two_qubit(m);
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
  }
  return eof_ensemble_min(red, part_a, part_b, config).value;
}

namespace {

// Direct-optimization discord of the (rest | measured) split of the reduced
// pair state.
double discord_direct(const DensityMatrix& rho, const std::vector<std::string>& a,
                      const std::vector<std::string>& measured, const OptimizerConfig& config) {
  const std::vector<std::string> pair = group_union(rho.layout, a, measured);
  DensityMatrix red = reduced_state(rho, pair);
  return quantum_discord(red, measured, config).value;
}

bool kw_applicable(const DensityMatrix& rho, const std::vector<std::string>& a,
                   const std::vector<std::string>& bystander) {
  return a.size() == 1 && is_pure(rho) && rho.layout.group_dim(a) == 2 &&
         rho.layout.group_dim(bystander) == 2;
}

}  // namespace

BalanceBreakdown balance_delta(const DensityMatrix& rho, const std::string& a,
                               const std::string& b, const std::string& c,
                               const OptimizerConfig& config, CorrelationRoute route) {
  const std::vector<std::string> ga{a}, gb{b}, gc{c};
  require_partition(rho.layout, {&ga, &gb, &gc});
  if (!is_pure(rho))
    throw std::invalid_argument("the conservation balance needs a pure tripartite state");

  const double e_ab = eof_auto(rho, ga, gb, config);
  const double e_ac = eof_auto(rho, ga, gc, config);

  auto discord_term = [&](const std::vector<std::string>& measured,
                          const std::vector<std::string>& bystander) {
    const bool oracle = route == CorrelationRoute::OracleChain ||
                        (route == CorrelationRoute::Auto && kw_applicable(rho, ga, bystander));
    if (oracle) return discord_via_koashi_winter(rho, a, measured, bystander);
    return discord_direct(rho, ga, measured, config);
  };
  const double d_ab = discord_term(gb, gc);
  const double d_ac = discord_term(gc, gb);

  BalanceBreakdown out;
  out.terms = {{"eofAB", e_ab}, {"eofAC", e_ac}, {"discordAB", d_ab}, {"discordAC", d_ac}};
  out.value = e_ab + e_ac - d_ab - d_ac;
  return out;
}

BalanceBreakdown balance_delta_tilde(const DensityMatrix& rho, const std::vector<std::string>& a,
                                     const std::vector<std::string>& b,
                                     const std::vector<std::string>& c,
                                     const OptimizerConfig& config, CorrelationRoute route) {
  require_partition(rho.layout, {&a, &b, &c});
  const std::vector<std::string> bc = group_union(rho.layout, b, c);
  const bool pure = is_pure(rho);

  const double e_ab = eof_auto(rho, a, b, config);

  double e_abc, d_abc;
  if (pure) {
    // Pure bipartite split: both the formation entanglement and the
    // measured correlation gap collapse to the marginal entropy.
    e_abc = d_abc = subsystem_entropy(rho, a);
  } else {
    e_abc = eof_auto(rho, a, bc, config);
    d_abc = quantum_discord(rho, bc, config).value;
  }

  double d_ab;
  const bool oracle = route == CorrelationRoute::OracleChain ||
                      (route == CorrelationRoute::Auto && kw_applicable(rho, a, c));
  if (oracle && a.size() == 1)
    d_ab = discord_via_koashi_winter(rho, a[0], b, c);
  else
    d_ab = discord_direct(rho, a, b, config);

  BalanceBreakdown out;
  out.terms = {{"eofAB", e_ab},
               {"eofABC", e_abc},
               {"discordABC", d_abc},
               {"discordAB", d_ab}};
  out.value = e_ab - e_abc + d_abc - d_ab;
  return out;
}

double lii_net_flow(const DensityMatrix& pure_global, const std::vector<std::string>& b_group,
                    const std::vector<std::string>& a_group,
                    const std::vector<std::string>& e_group, const OptimizerConfig& config,
                    CorrelationRoute route) {
  require_partition(pure_global.layout, {&b_group, &a_group, &e_group});
  if (!is_pure(pure_global))
    throw std::invalid_argument("net-flow evaluation needs a pure global state");

  const double e_ab = eof_auto(pure_global, a_group, b_group, config);
  double d_ab;
  const bool oracle = route == CorrelationRoute::OracleChain ||
                      (route == CorrelationRoute::Auto &&
                       kw_applicable(pure_global, a_group, e_group));
  if (oracle && a_group.size() == 1)
    d_ab = discord_via_koashi_winter(pure_global, a_group[0], b_group, e_group);
  else
    d_ab = discord_direct(pure_global, a_group, b_group, config);
  return e_ab - d_ab;
}

}  // namespace ssalab
