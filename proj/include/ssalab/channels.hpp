#pragma once

// Kraus channels on a qubit, their Stinespring dilations with explicit
// pure environments, the two-stage pipeline B -> B1 -> B2, and the
// data-processing report comparing the stagewise coherent informations
// against the correlation balance.

#include <map>
#include <string>
#include <vector>

#include "ssalab/measures.hpp"
#include "ssalab/states.hpp"

namespace ssalab {

struct KrausChannel {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<Matrix> kraus;
};

// Completeness sum K_i^dag K_i = I within tolerance; throws otherwise.
void validate_channel(const KrausChannel& ch);

KrausChannel amplitude_damping_channel(double gamma);
KrausChannel phase_damping_channel(double lambda);
KrausChannel depolarizing_channel(double p);
KrausChannel unitary_channel(const Matrix& u);

// Spec strings: amp:<gamma>, phase:<lambda>, depol:<p>, unitary:<file>.
// Zero Kraus operators (e.g. amp:0) are dropped, so the environment stays
// as small as the channel actually needs.
KrausChannel make_named_channel(const std::string& spec);

Matrix apply_channel(const KrausChannel& ch, const Matrix& rho);

// V = sum_i K_i (x) |i>_E : input -> output (x) environment, with the
// output index most significant; V^dag V = I and the environment dimension
// equals the Kraus count.
Matrix stinespring_isometry(const KrausChannel& ch);

struct StagePipeline {
  DensityMatrix initial_ab;
  KrausChannel stage1, stage2;
  DensityMatrix state1;  // (A, B1, E1)
  DensityMatrix state2;  // (A, B2, E1, E2)
};

// Applies id_A (x) V1, then id_A (x) V2 (x) id_E1, relabelling the B parts
// to B1/B2 and ordering the second stage as (A, B2, E1, E2).  Environments
// start pure, so a pure input stays globally pure at both stages.
StagePipeline run_two_stage(const DensityMatrix& initial_ab, const KrausChannel& stage1,
                            const KrausChannel& stage2);

struct DataProcessingReport {
  double ic_stage1 = 0.0;          // I_c(A>B1)
  double ic_stage2 = 0.0;          // I_c(A>B2)
  double cmi = 0.0;                // I(A:E2|E1)
  double identity_residual = 0.0;  // |(ic1 - ic2) - cmi|
  double delta_via_b = 0.0;        // (E_AB2 - d_AB2) - (E_AB1 - d_AB1)
  double delta_via_e = 0.0;        // E_AE1 - E_A(E1E2) + d_A(E1E2) - d_AE1
  double cross_residual = 0.0;     // |delta_via_b - delta_via_e|
  double lii_full = 0.0;           // E_AB2 - d_AB2
  double lii_stage1 = 0.0;         // E_AB1 - d_AB1
  double lii_bound_margin = 0.0;   // (ic1 - ic2) - (lii_full - lii_stage1)
  double qdp_margin = 0.0;         // ic1 - ic2
  double qdp2_margin = 0.0;        // (ic1 - ic2) - delta_via_b
  std::map<std::string, double> terms;
  std::string method;  // "oracle-chain" or "direct"
};

// The E-side terms come from the purification identities by default
// (global purity turns them into two-qubit closed forms plus entropies); a
// direct-optimization variant exists for cross-validation but requires the
// measured environment dimensions to stay within the supported range.
DataProcessingReport data_processing_report(const StagePipeline& pipeline,
                                            const OptimizerConfig& config,
                                            bool direct_optimization = false);

}  // namespace ssalab
