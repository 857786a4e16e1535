#pragma once

// Petz recovery of the traced-out party and the saturation checks: exact
// Markov detection via the conditional mutual information, recovery
// fidelity, and the equality conditions of the bounded inequality
// (classical-correlation equality plus formation-entanglement monogamy).

#include <string>
#include <vector>

#include "ssalab/measures.hpp"
#include "ssalab/states.hpp"

namespace ssalab {

// sigma_B -> rho_BC^{1/2} (rho_B^{-1/2} sigma_B rho_B^{-1/2} (x) I_C) rho_BC^{1/2}
// with support pseudo-inverses; inputs supported outside supp(rho_B) lose
// the off-support component (reported via trace_loss).
struct RecoveryMap {
  SubsystemLayout bc_layout;
  std::vector<std::string> source;  // the B group
  Matrix sqrt_bc;                   // on BC
  Matrix inv_sqrt_b_embedded;       // rho_B^{-1/2} (x) I_C on BC

  // Applies the map to an operator on the B group space.
  Matrix apply(const Matrix& sigma_b) const;
  double trace_loss(const Matrix& sigma_b) const;
};

RecoveryMap build_petz_map(const DensityMatrix& rho_bc, const std::vector<std::string>& b_group);

struct MarkovCheck {
  double cmi = 0.0;
  double recovery_distance = 0.0;
  bool is_markov = false;
};

// cmi = I(A:C|B); recovery_distance = dist(rho_ABC, (id_A (x) R_{B->BC}) rho_AB);
// is_markov when cmi <= 1e-9.
MarkovCheck check_markov(const DensityMatrix& rho_abc, const std::vector<std::string>& a,
                         const std::vector<std::string>& b, const std::vector<std::string>& c);

struct BssaSaturationReport {
  double j_equality = 0.0;    // |J(A|BC) - J(A|B)|
  double eof_monogamy = 0.0;  // |E(A,BC) - E(A,B)|
  bool max_bound_saturated = false;
  double cmi = 0.0;
  double delta_tilde = 0.0;
  std::map<std::string, double> terms;
};

BssaSaturationReport check_bssa_saturation(const DensityMatrix& rho_abc,
                                           const std::vector<std::string>& a,
                                           const std::vector<std::string>& b,
                                           const std::vector<std::string>& c,
                                           const OptimizerConfig& config, double slack = 2e-3);

}  // namespace ssalab
