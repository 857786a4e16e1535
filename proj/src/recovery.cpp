#include "ssalab/recovery.hpp"

#include <cmath>
#include <stdexcept>

namespace ssalab {

Matrix RecoveryMap::apply(const Matrix& sigma_b) const {
  const Matrix inner = embed_operator(sigma_b, bc_layout, source);
  const Matrix conditioned = inv_sqrt_b_embedded * inner * inv_sqrt_b_embedded;
  return sqrt_bc * conditioned * sqrt_bc;
}

double RecoveryMap::trace_loss(const Matrix& sigma_b) const {
  return sigma_b.trace().real() - apply(sigma_b).trace().real();
}

RecoveryMap build_petz_map(const DensityMatrix& rho_bc, const std::vector<std::string>& b_group) {
  validate_density_matrix(rho_bc);
  RecoveryMap map;
  map.bc_layout = rho_bc.layout;
  for (int i : rho_bc.layout.group_indices(b_group)) map.source.push_back(rho_bc.layout.label(i));
  map.sqrt_bc = sqrt_on_support(rho_bc.mat);
  const Matrix rho_b = partial_trace(rho_bc.mat, rho_bc.layout, map.source);
  const Matrix inv_sqrt_b = function_on_support(rho_b, [](double x) { return 1.0 / std::sqrt(x); });
  map.inv_sqrt_b_embedded = embed_operator(inv_sqrt_b, rho_bc.layout, map.source);
  return map;
}

MarkovCheck check_markov(const DensityMatrix& rho_abc, const std::vector<std::string>& a,
                         const std::vector<std::string>& b, const std::vector<std::string>& c) {
  MarkovCheck out;
  out.cmi = conditional_mutual_information(rho_abc, a, b, c);
  out.is_markov = out.cmi <= 1e-9;

  // Recover rho_ABC from rho_AB by acting on B alone: all three factors are
  // embeddings into the full layout, so no index gymnastics are needed even
  // for interleaved groups.
  std::vector<std::string> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  const Matrix rho_bc = partial_trace(rho_abc.mat, rho_abc.layout, bc);
  const SubsystemLayout bc_layout = rho_abc.layout.sub_layout(bc);
  RecoveryMap map = build_petz_map({rho_bc, bc_layout}, b);

  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const Matrix rho_ab = partial_trace(rho_abc.mat, rho_abc.layout, ab);

  const Matrix sqrt_bc_full = embed_operator(map.sqrt_bc, rho_abc.layout, bc);
  const Matrix rho_b = partial_trace(rho_abc.mat, rho_abc.layout, b);
  const Matrix inv_sqrt_b =
      function_on_support(rho_b, [](double x) { return 1.0 / std::sqrt(x); });
  const Matrix inv_sqrt_b_full = embed_operator(inv_sqrt_b, rho_abc.layout, b);
  const Matrix rho_ab_full = embed_operator(rho_ab, rho_abc.layout, ab);  // rho_AB (x) I_C
  const Matrix recovered =
      sqrt_bc_full * inv_sqrt_b_full * rho_ab_full * inv_sqrt_b_full * sqrt_bc_full;

  out.recovery_distance = trace_distance(rho_abc.mat, recovered);
  return out;
}

BssaSaturationReport check_bssa_saturation(const DensityMatrix& rho_abc,
                                           const std::vector<std::string>& a,
                                           const std::vector<std::string>& b,
                                           const std::vector<std::string>& c,
                                           const OptimizerConfig& config, double slack) {
  BssaSaturationReport out;

  std::vector<std::string> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());

  const double j_b = classical_correlation(reduced_state(rho_abc, ab), b, config).value;
  const double j_bc = classical_correlation(rho_abc, bc, config).value;
  out.j_equality = std::abs(j_bc - j_b);

  const double e_ab = eof_auto(rho_abc, a, b, config);
  const double e_abc = eof_auto(rho_abc, a, bc, config);
  out.eof_monogamy = std::abs(e_abc - e_ab);

  out.cmi = conditional_mutual_information(rho_abc, a, b, c);
  BalanceBreakdown dt = balance_delta_tilde(rho_abc, a, b, c, config);
  out.delta_tilde = dt.value;
  out.max_bound_saturated = std::abs(out.cmi - std::max(0.0, dt.value)) <= slack;

  out.terms = dt.terms;
  out.terms["jAB"] = j_b;
  out.terms["jABC"] = j_bc;
  out.terms["eofAB"] = e_ab;
  out.terms["eofABC"] = e_abc;
  out.terms["cmi"] = out.cmi;
  return out;
}

}  // namespace ssalab
