#pragma once

// Density matrices on labelled layouts: named families, seeded random
// ensembles, the block-structured Markov / saturating constructors, and the
// JSON state-file format.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssalab/rng.hpp"
#include "ssalab/tensor.hpp"

namespace ssalab {

struct DensityMatrix {
  Matrix mat;
  SubsystemLayout layout;
};

// Hermitian within tol, eigenvalues >= -tol, trace 1 within tol; throws
// std::invalid_argument with a description otherwise.
void validate_density_matrix(const DensityMatrix& rho, double tol = kStructureTol);
double purity(const DensityMatrix& rho);
bool is_pure(const DensityMatrix& rho, double tol = 1e-9);

DensityMatrix reduced_state(const DensityMatrix& rho, const std::vector<std::string>& keep);

// ---------------------------------------------------------------------------
// Named families.  Spec strings accepted by make_named_state:
//   bell | ghz | w | product | cq | werner:<p>
// bell/werner live on (A:2, B:2); ghz/w on (A:2, B:2, C:2); product is
// |0><0| x |0><0|; cq is the two-block classical-quantum default below.
DensityMatrix make_named_state(const std::string& spec);

DensityMatrix make_bell_state();
DensityMatrix make_ghz_state();
DensityMatrix make_w_state();
// p |Psi-><Psi-| + (1-p) I/4 on (A:2, B:2).
DensityMatrix make_werner_state(double p);

// sum_k p_k rho_A^k (x) |k><k|_B: zero discord when measured on B.
struct CqSpec {
  std::vector<double> probs;
  std::vector<Matrix> a_states;  // all dim_a x dim_a
};
DensityMatrix make_cq_state(const CqSpec& spec);

// ---------------------------------------------------------------------------
// Seeded random states (deterministic per seed).

// Haar-random unit vector as a rank-1 projector; layout is a single part
// "S" of the given dimension.
DensityMatrix random_pure_state(int dim, std::uint64_t seed);
DensityMatrix random_pure_state(const SubsystemLayout& layout, std::uint64_t seed);
// Induced measure of the given rank: partial trace of a random pure state
// on system (x) rank-dimensional ancilla.
DensityMatrix random_mixed_state(const SubsystemLayout& layout, int rank, std::uint64_t seed);
// Random cq state with dim_b classical blocks.
DensityMatrix random_cq_state(int dim_a, int dim_b, std::uint64_t seed);
// Haar-random unitary (QR of a complex Ginibre matrix, phases fixed).
Matrix random_unitary(int dim, Rng& rng);

// ---------------------------------------------------------------------------
// Markov states: rho_ABC = (+)_j q_j leftState_j (x) rightState_j with
// B = (+)_j bL_j (x) bR_j; blocks occupy consecutive B-index ranges in spec
// order.  leftState_j lives on A (x) bL_j, rightState_j on bR_j (x) C.

struct MarkovBlock {
  double weight = 0.0;
  Matrix left_state;   // (dim_a * left_dim) square
  Matrix right_state;  // (right_dim * dim_c) square
  int left_dim = 1;
  int right_dim = 1;
};

struct MarkovStateSpec {
  int dim_a = 2;
  int dim_c = 2;
  std::vector<MarkovBlock> blocks;
};

// Resulting layout: (A: dim_a, B: sum_j left_dim*right_dim, C: dim_c).
// I(A:C|B) of the output vanishes by construction.
DensityMatrix make_markov_state(const MarkovStateSpec& spec);
MarkovStateSpec random_markov_spec(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Saturating constructor for the bounded conditional-information inequality:
// block j carries weight q_j, one unit vector on bL_j and terms
// (p_i, rho_A^i, omega_i on bR_j (x) C); the state is
//   (+)_j q_j sum_i p_i rho_A^i (x) |psi_j><psi_j| (x) omega_i.

struct BssaTerm {
  double weight = 0.0;  // conditional weight within the block
  Matrix a_state;       // dim_a square
  Matrix right_state;   // (right_dim * dim_c) square
};

struct BssaBlock {
  double weight = 0.0;
  Vector left_vector;  // unit norm, dim = left_dim
  int right_dim = 1;
  std::vector<BssaTerm> terms;
};

struct BssaStateSpec {
  int dim_a = 2;
  int dim_c = 2;
  std::vector<BssaBlock> blocks;
};

DensityMatrix make_bssa_saturating_state(const BssaStateSpec& spec);
// Random spec whose right factors carry an orthogonal marker per term
// (omega_i = |i><i| (x) sigma_i), so saturation checks pass exactly; keeps
// dim(B) = dim(C) = 2 so every downstream measurement stays within the
// supported dimensions.
BssaStateSpec random_bssa_spec(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Purification: |Psi> = sum_k sqrt(lambda_k) |k>_S |k>_R with the ancilla
// dimension equal to the support rank; appended part label defaults to "R".
DensityMatrix purify(const DensityMatrix& rho, const std::string& ancilla_label = "R");

// ---------------------------------------------------------------------------
// State files: {"layout": [{"label","dim"},...],
//               "matrix": [[[re,im],...],...], "meta": {...}}.
// Parsing rejects non-Hermitian / non-normalized payloads beyond 1e-8, then
// canonicalizes (symmetrize, renormalize trace).
nlohmann::ordered_json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::ordered_json& doc);
void save_state_file(const DensityMatrix& rho, const std::string& path);
DensityMatrix load_state_file(const std::string& path);

// Raw complex matrix from the [[re,im],...] row encoding used by state
// files (also used for unitary-channel files).
Matrix matrix_from_json(const nlohmann::ordered_json& rows);

// Content hash (FNV-1a over layout and entries rounded to 12 significant
// digits); stable across runs, used as inputDigest in reports.
std::string state_digest(const DensityMatrix& rho);

}  // namespace ssalab
