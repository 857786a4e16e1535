#pragma once

// Scalar correlation quantities, all in bits: entropies, mutual
// informations, classical correlation / discord (direct optimization over
// rank-1 projective measurements, plus the purification-based oracle),
// entanglement of formation (two-qubit closed form and ensemble
// minimization), coherent information, and the balance combinations built
// from them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssalab/nelder_mead.hpp"
#include "ssalab/states.hpp"

namespace ssalab {

struct OptimizerConfig {
  int restarts = 20;
  int max_iterations = 4000;
  double tolerance = 1e-13;
  std::uint64_t seed = 0;
  // Restarts run in parallel by default; nested calls degrade to serial.
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct ProjectiveMeasurement {
  std::vector<std::string> target;
  std::vector<Matrix> projectors;  // rank-1, on the target group space
  Eigen::VectorXd parameters;      // angles that generated them
};

// A pure-state decomposition sum_i p_i |phi_i><phi_i| of some state.
struct PureEnsemble {
  std::vector<double> probs;
  std::vector<Vector> states;
};

struct MeasureResult {
  double value = 0.0;
  std::optional<ProjectiveMeasurement> measurement;
  std::optional<PureEnsemble> ensemble;
  bool converged = true;
  double spread_over_restarts = 0.0;
};

double binary_entropy(double p);

// -inf-safe entropy of a PSD matrix (eigenvalues below the support cutoff
// contribute nothing); throws on eigenvalues below -1e-8.
double von_neumann_entropy(const Matrix& m);
double von_neumann_entropy(const DensityMatrix& rho);
// Entropy of the reduction onto `keep`.
double subsystem_entropy(const DensityMatrix& rho, const std::vector<std::string>& keep);

// Tr rho (log2 rho - log2 sigma) on the support of sigma; +infinity when
// supp(rho) leaks outside supp(sigma).
double relative_entropy(const Matrix& rho, const Matrix& sigma);

// S(A) + S(B) - S(AB); groups must partition the layout.
double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                          const std::vector<std::string>& part_b);
// S(AB) + S(BC) - S(B) - S(ABC).
double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& c);
// S(B) - S(AB): can be negative.
double coherent_information(const DensityMatrix& rho, const std::vector<std::string>& a,
                            const std::vector<std::string>& b);

// ---------------------------------------------------------------------------
// Measurement bases: a d-dim orthonormal basis is parameterized by d(d-1)
// angles via a product of complex Givens rotations; the residual diagonal
// phases drop out of the projectors, so the parameterization covers every
// rank-1 projective measurement.
int measurement_parameter_count(int dim);
Matrix unitary_from_angles(int dim, const Eigen::VectorXd& angles);
ProjectiveMeasurement measurement_from_angles(const SubsystemLayout& layout,
                                              const std::vector<std::string>& target,
                                              const Eigen::VectorXd& angles);

// J = S(rest) - min over measurements of sum_k p_k S(rest | outcome k),
// maximized over rank-1 projective measurements of the `measured` group
// (dimension 2..4).  Deterministic per config.seed.
MeasureResult classical_correlation(const DensityMatrix& rho,
                                    const std::vector<std::string>& measured,
                                    const OptimizerConfig& config);

// I(rest : measured) - J; tiny negatives from optimizer noise are clipped.
MeasureResult quantum_discord(const DensityMatrix& rho, const std::vector<std::string>& measured,
                              const OptimizerConfig& config);

// Optimization-free discord of a pure tripartite state:
//   delta(a | measured) = E(a, complement) - [S(a+measured) - S(measured)],
// valid because the global state purifies the pair; requires (a, complement)
// to be two qubits so E has the closed form.
double discord_via_koashi_winter(const DensityMatrix& pure_global, const std::string& a,
                                 const std::vector<std::string>& measured,
                                 const std::vector<std::string>& complement);

// Spin-flip concurrence and the closed-form two-qubit EoF built on it.
double concurrence_two_qubit(const Matrix& rho);
double eof_two_qubit(const DensityMatrix& rho);

// Ensemble minimization of sum_i p_i S(Tr_B |phi_i><phi_i|) over pure-state
// decompositions, parameterized by isometries on the purification ancilla
// (ensemble size rank^2, capped at 16); total dimension limited to 16.
// The value approaches the true EoF from above.
MeasureResult eof_ensemble_min(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                               const std::vector<std::string>& part_b,
                               const OptimizerConfig& config);

// Two-qubit closed form when it applies, ensemble minimization otherwise.
double eof_auto(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                const std::vector<std::string>& part_b, const OptimizerConfig& config);

// ---------------------------------------------------------------------------
// Balance combinations.  Route selection: Auto uses the purification oracle
// whenever the state is pure and the bystander party is a single qubit
// (removing optimizer error), and direct optimization otherwise.
enum class CorrelationRoute { Auto, Direct, OracleChain };

struct BalanceBreakdown {
  double value = 0.0;
  std::map<std::string, double> terms;
};

// E_AB + E_AC - delta(A|B) - delta(A|C); input must be pure (the relation
// is a conservation statement for tripartite purifications).
BalanceBreakdown balance_delta(const DensityMatrix& rho, const std::string& a,
                               const std::string& b, const std::string& c,
                               const OptimizerConfig& config,
                               CorrelationRoute route = CorrelationRoute::Auto);

// E_AB - E_A(BC) + delta(A|BC) - delta(A|B); defined for mixed states too.
BalanceBreakdown balance_delta_tilde(const DensityMatrix& rho, const std::vector<std::string>& a,
                                     const std::vector<std::string>& b,
                                     const std::vector<std::string>& c,
                                     const OptimizerConfig& config,
                                     CorrelationRoute route = CorrelationRoute::Auto);

// Net flow of locally inaccessible information for a pure global state,
// computed as E(A,B-side) - delta(A | B-side) per the defining identity.
double lii_net_flow(const DensityMatrix& pure_global, const std::vector<std::string>& b_group,
                    const std::vector<std::string>& a_group,
                    const std::vector<std::string>& e_group, const OptimizerConfig& config,
                    CorrelationRoute route = CorrelationRoute::Auto);

}  // namespace ssalab
