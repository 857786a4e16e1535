#include "ssalab/states.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssalab {

namespace {

// State-file payloads are accepted up to this tolerance, then canonicalized.
constexpr double kFileTol = 1e-8;

Matrix ket_bra(const Vector& v) { return v * v.adjoint(); }

Vector basis_ket(int dim, int k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return v;
}

void check_probabilities(const std::vector<double>& p, const char* what) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -1e-12) throw std::invalid_argument(std::string(what) + ": negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": weights do not sum to 1");
}

}  // namespace

void validate_density_matrix(const DensityMatrix& rho, double tol) {
  if (rho.mat.rows() != rho.layout.total_dim() || rho.mat.cols() != rho.layout.total_dim())
    throw std::invalid_argument("density matrix size does not match layout");
  if (!is_hermitian(rho.mat, tol)) throw std::invalid_argument("density matrix not Hermitian");
  if (std::abs(rho.mat.trace().real() - 1.0) > tol || std::abs(rho.mat.trace().imag()) > tol)
    throw std::invalid_argument("density matrix trace is not 1");
  EigenSystem sys = hermitian_eigen(rho.mat);
  if (sys.values.minCoeff() < -tol)
    throw std::invalid_argument("density matrix has a negative eigenvalue");
}

double purity(const DensityMatrix& rho) { return (rho.mat * rho.mat).trace().real(); }

bool is_pure(const DensityMatrix& rho, double tol) { return purity(rho) >= 1.0 - tol; }

DensityMatrix reduced_state(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  return {partial_trace(rho.mat, rho.layout, keep), rho.layout.sub_layout(keep)};
}

DensityMatrix make_bell_state() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);  // |Phi+>
  return {ket_bra(v), SubsystemLayout({{"A", 2}, {"B", 2}})};
}

DensityMatrix make_ghz_state() {
  Vector v = Vector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return {ket_bra(v), SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}})};
}

DensityMatrix make_w_state() {
  Vector v = Vector::Zero(8);
  v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);  // |001>+|010>+|100>
  return {ket_bra(v), SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}})};
}

DensityMatrix make_werner_state(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("werner parameter must be in [0,1]");
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);  // singlet |Psi->
  Matrix m = p * ket_bra(v) + (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
  return {m, SubsystemLayout({{"A", 2}, {"B", 2}})};
}

DensityMatrix make_cq_state(const CqSpec& spec) {
  if (spec.probs.size() != spec.a_states.size() || spec.probs.empty())
    throw std::invalid_argument("cq spec: probs and a_states must align");
  check_probabilities(spec.probs, "cq spec");
  const int db = static_cast<int>(spec.probs.size());
  const int da = static_cast<int>(spec.a_states[0].rows());
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int k = 0; k < db; ++k) {
    if (spec.a_states[k].rows() != da || spec.a_states[k].cols() != da)
      throw std::invalid_argument("cq spec: inconsistent A dimensions");
    m += spec.probs[k] * tensor_product(spec.a_states[k], ket_bra(basis_ket(db, k)));
  }
  return {m, SubsystemLayout({{"A", da}, {"B", db}})};
}

DensityMatrix make_named_state(const std::string& spec) {
  if (spec == "bell") return make_bell_state();
  if (spec == "ghz") return make_ghz_state();
  if (spec == "w") return make_w_state();
  if (spec == "product") {
    Matrix zero = ket_bra(basis_ket(2, 0));
    return {tensor_product(zero, zero), SubsystemLayout({{"A", 2}, {"B", 2}})};
  }
  if (spec == "cq") {
    CqSpec cq;
    cq.probs = {0.5, 0.5};
    cq.a_states = {ket_bra(basis_ket(2, 0)), 0.5 * Matrix::Identity(2, 2)};
    return make_cq_state(cq);
  }
  if (spec.rfind("werner:", 0) == 0) {
    std::size_t used = 0;
    const std::string arg = spec.substr(7);
    double p = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument("bad werner parameter: " + arg);
    return make_werner_state(p);
  }
  throw std::invalid_argument("unknown state spec: " + spec);
}

DensityMatrix random_pure_state(const SubsystemLayout& layout, std::uint64_t seed) {
  Rng rng(seed);
  Vector v = rng.complex_gaussian(layout.total_dim());
  v.normalize();
  return {ket_bra(v), layout};
}

DensityMatrix random_pure_state(int dim, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("pure state dim must be >= 2");
  return random_pure_state(SubsystemLayout({{"S", dim}}), seed);
}

DensityMatrix random_mixed_state(const SubsystemLayout& layout, int rank, std::uint64_t seed) {
  const int d = layout.total_dim();
  if (rank < 1 || rank > d) throw std::invalid_argument("rank must be in [1, dim]");
  Rng rng(seed);
  // Columns of G are the unnormalised pure branches; rho = G G^dag is the
  // ancilla-traced purification of a Haar vector on dim*rank.
  Matrix g(d, rank);
  for (int k = 0; k < rank; ++k) g.col(k) = rng.complex_gaussian(d);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return {m, layout};
}

DensityMatrix random_cq_state(int dim_a, int dim_b, std::uint64_t seed) {
  Rng rng(seed);
  CqSpec spec;
  double sum = 0.0;
  for (int k = 0; k < dim_b; ++k) {
    double w = rng.uniform(0.05, 1.0);  // keep blocks visibly occupied
    spec.probs.push_back(w);
    sum += w;
    const int rank = rng.uniform_int(1, dim_a);
    const std::uint64_t sub_seed = rng.bits();
    spec.a_states.push_back(
        random_mixed_state(SubsystemLayout({{"A", dim_a}}), rank, sub_seed).mat);
  }
  for (double& w : spec.probs) w /= sum;
  return make_cq_state(spec);
}

Matrix random_unitary(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = rng.complex_gaussian(dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase gauge so Q is Haar distributed, not biased by QR's choice.
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

DensityMatrix make_markov_state(const MarkovStateSpec& spec) {
  if (spec.blocks.empty()) throw std::invalid_argument("markov spec: no blocks");
  std::vector<double> weights;
  int dim_b = 0;
  for (const MarkovBlock& b : spec.blocks) {
    weights.push_back(b.weight);
    if (b.left_dim < 1 || b.right_dim < 1)
      throw std::invalid_argument("markov spec: block dims must be >= 1");
    if (b.left_state.rows() != spec.dim_a * b.left_dim ||
        b.left_state.cols() != spec.dim_a * b.left_dim)
      throw std::invalid_argument("markov spec: left state dimension mismatch");
    if (b.right_state.rows() != b.right_dim * spec.dim_c ||
        b.right_state.cols() != b.right_dim * spec.dim_c)
      throw std::invalid_argument("markov spec: right state dimension mismatch");
    dim_b += b.left_dim * b.right_dim;
  }
  check_probabilities(weights, "markov spec");

  const int da = spec.dim_a, dc = spec.dim_c;
  const int dim = da * dim_b * dc;
  Matrix m = Matrix::Zero(dim, dim);
  int offset = 0;  // start of this block's B-index range
  for (const MarkovBlock& blk : spec.blocks) {
    const int dl = blk.left_dim, dr = blk.right_dim;
    // rho[(a, off + l*dr + r, c), (a', off + l'*dr + r', c')]
    //   = q * left[(a,l),(a',l')] * right[(r,c),(r',c')]
    for (int a = 0; a < da; ++a)
      for (int l = 0; l < dl; ++l)
        for (int r = 0; r < dr; ++r)
          for (int c = 0; c < dc; ++c)
            for (int a2 = 0; a2 < da; ++a2)
              for (int l2 = 0; l2 < dl; ++l2)
                for (int r2 = 0; r2 < dr; ++r2)
                  for (int c2 = 0; c2 < dc; ++c2) {
                    const int row = (a * dim_b + offset + l * dr + r) * dc + c;
                    const int col = (a2 * dim_b + offset + l2 * dr + r2) * dc + c2;
                    m(row, col) += blk.weight * blk.left_state(a * dl + l, a2 * dl + l2) *
                                   blk.right_state(r * dc + c, r2 * dc + c2);
                  }
    offset += dl * dr;
  }
  DensityMatrix rho{m, SubsystemLayout({{"A", da}, {"B", dim_b}, {"C", dc}})};
  validate_density_matrix(rho);
  return rho;
}

MarkovStateSpec random_markov_spec(std::uint64_t seed) {
  Rng rng(seed);
  MarkovStateSpec spec;
  spec.dim_a = 2;
  spec.dim_c = 2;
  const int n_blocks = rng.uniform_int(1, 2);
  std::vector<double> weights;
  double sum = 0.0;
  for (int j = 0; j < n_blocks; ++j) {
    MarkovBlock blk;
    blk.left_dim = rng.uniform_int(1, 2);
    blk.right_dim = rng.uniform_int(1, 2);
    const int dl_full = spec.dim_a * blk.left_dim;
    const int dr_full = blk.right_dim * spec.dim_c;
    const int left_rank = rng.uniform_int(1, dl_full);
    const std::uint64_t left_seed = rng.bits();
    blk.left_state =
        random_mixed_state(SubsystemLayout({{"X", dl_full}}), left_rank, left_seed).mat;
    const int right_rank = rng.uniform_int(1, dr_full);
    const std::uint64_t right_seed = rng.bits();
    blk.right_state =
        random_mixed_state(SubsystemLayout({{"X", dr_full}}), right_rank, right_seed).mat;
    blk.weight = rng.uniform(0.1, 1.0);
    sum += blk.weight;
    spec.blocks.push_back(blk);
  }
  for (MarkovBlock& blk : spec.blocks) blk.weight /= sum;
  return spec;
}

DensityMatrix make_bssa_saturating_state(const BssaStateSpec& spec) {
  if (spec.blocks.empty()) throw std::invalid_argument("saturating spec: no blocks");
  std::vector<double> weights;
  int dim_b = 0;
  for (const BssaBlock& b : spec.blocks) {
    weights.push_back(b.weight);
    if (b.terms.empty()) throw std::invalid_argument("saturating spec: block without terms");
    if (std::abs(b.left_vector.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("saturating spec: left vector not unit norm");
    std::vector<double> term_weights;
    for (const BssaTerm& t : b.terms) {
      term_weights.push_back(t.weight);
      if (t.a_state.rows() != spec.dim_a || t.a_state.cols() != spec.dim_a)
        throw std::invalid_argument("saturating spec: A-state dimension mismatch");
      if (t.right_state.rows() != b.right_dim * spec.dim_c ||
          t.right_state.cols() != b.right_dim * spec.dim_c)
        throw std::invalid_argument("saturating spec: right-state dimension mismatch");
    }
    check_probabilities(term_weights, "saturating spec terms");
    dim_b += static_cast<int>(b.left_vector.size()) * b.right_dim;
  }
  check_probabilities(weights, "saturating spec blocks");

  // Assemble via the Markov constructor: block j with left state
  // sum_i p_i rho_A^i ... cannot be factored when terms differ, so build the
  // direct sum by hand with the same B-range convention.
  const int da = spec.dim_a, dc = spec.dim_c;
  const int dim = da * dim_b * dc;
  Matrix m = Matrix::Zero(dim, dim);
  int offset = 0;
  for (const BssaBlock& blk : spec.blocks) {
    const int dl = static_cast<int>(blk.left_vector.size());
    const int dr = blk.right_dim;
    Matrix left_proj = blk.left_vector * blk.left_vector.adjoint();
    for (const BssaTerm& term : blk.terms) {
      const double w = blk.weight * term.weight;
      for (int a = 0; a < da; ++a)
        for (int l = 0; l < dl; ++l)
          for (int r = 0; r < dr; ++r)
            for (int c = 0; c < dc; ++c)
              for (int a2 = 0; a2 < da; ++a2)
                for (int l2 = 0; l2 < dl; ++l2)
                  for (int r2 = 0; r2 < dr; ++r2)
                    for (int c2 = 0; c2 < dc; ++c2) {
                      const int row = (a * dim_b + offset + l * dr + r) * dc + c;
                      const int col = (a2 * dim_b + offset + l2 * dr + r2) * dc + c2;
                      m(row, col) += w * term.a_state(a, a2) * left_proj(l, l2) *
                                     term.right_state(r * dc + c, r2 * dc + c2);
                    }
    }
    offset += dl * dr;
  }
  DensityMatrix rho{m, SubsystemLayout({{"A", da}, {"B", dim_b}, {"C", dc}})};
  validate_density_matrix(rho);
  return rho;
}

BssaStateSpec random_bssa_spec(std::uint64_t seed) {
  Rng rng(seed);
  BssaStateSpec spec;
  spec.dim_a = 2;
  spec.dim_c = 2;
  // Single block with trivial left factor and two marker terms keeps
  // dim(B) = 2, so both J terms below stay within measured-dimension limits.
  BssaBlock blk;
  blk.weight = 1.0;
  blk.left_vector = Vector::Ones(1);
  blk.right_dim = 2;
  const int n_terms = 2;
  double sum = 0.0;
  for (int i = 0; i < n_terms; ++i) {
    BssaTerm term;
    term.weight = rng.uniform(0.2, 1.0);
    sum += term.weight;
    const int a_rank = rng.uniform_int(1, spec.dim_a);
    const std::uint64_t a_seed = rng.bits();
    term.a_state =
        random_mixed_state(SubsystemLayout({{"A", spec.dim_a}}), a_rank, a_seed).mat;
    // omega_i = |i><i| on bR (x) random sigma on C: the marker makes the
    // term index readable from B alone.
    Matrix marker = Matrix::Zero(blk.right_dim, blk.right_dim);
    marker(i, i) = 1.0;
    const int c_rank = rng.uniform_int(1, spec.dim_c);
    const std::uint64_t c_seed = rng.bits();
    Matrix sigma =
        random_mixed_state(SubsystemLayout({{"C", spec.dim_c}}), c_rank, c_seed).mat;
    term.right_state = tensor_product(marker, sigma);
    blk.terms.push_back(term);
  }
  for (BssaTerm& t : blk.terms) t.weight /= sum;
  spec.blocks.push_back(blk);
  return spec;
}

DensityMatrix purify(const DensityMatrix& rho, const std::string& ancilla_label) {
  validate_density_matrix(rho);
  EigenSystem sys = hermitian_eigen(rho.mat);
  const int d = static_cast<int>(rho.mat.rows());
  int rank = 0;
  for (Eigen::Index k = 0; k < sys.values.size(); ++k)
    if (sys.values(k) > kSupportCutoff) ++rank;
  if (rank == 0) throw std::invalid_argument("cannot purify the zero matrix");
  Vector psi = Vector::Zero(d * rank);
  for (int k = 0; k < rank; ++k) {
    const double amp = std::sqrt(sys.values(k));
    for (int i = 0; i < d; ++i) psi(i * rank + k) = amp * sys.vectors(i, k);
  }
  SubsystemLayout ext = rho.layout.concat(SubsystemLayout({{ancilla_label, rank}}));
  return {psi * psi.adjoint(), ext};
}

nlohmann::ordered_json state_to_json(const DensityMatrix& rho) {
  nlohmann::ordered_json doc;
  doc["layout"] = nlohmann::ordered_json::array();
  for (const Part& p : rho.layout.parts())
    doc["layout"].push_back({{"label", p.label}, {"dim", p.dim}});
  doc["matrix"] = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < rho.mat.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < rho.mat.cols(); ++j)
      row.push_back({rho.mat(i, j).real(), rho.mat(i, j).imag()});
    doc["matrix"].push_back(row);
  }
  doc["meta"] = nlohmann::ordered_json::object();
  return doc;
}

Matrix matrix_from_json(const nlohmann::ordered_json& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument("empty matrix");
  Matrix m(n, static_cast<int>(rows.at(0).size()));
  for (int i = 0; i < n; ++i) {
    const auto& row = rows.at(i);
    if (static_cast<Eigen::Index>(row.size()) != m.cols())
      throw std::invalid_argument("ragged matrix rows");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto& e = row.at(j);
      if (e.size() != 2) throw std::invalid_argument("matrix entries must be [re, im] pairs");
      m(i, j) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

DensityMatrix state_from_json(const nlohmann::ordered_json& doc) {
  if (!doc.contains("layout") || !doc.contains("matrix"))
    throw std::invalid_argument("state document needs layout and matrix fields");
  std::vector<Part> parts;
  for (const auto& p : doc.at("layout"))
    parts.push_back({p.at("label").get<std::string>(), p.at("dim").get<int>()});
  SubsystemLayout layout(parts);
  const int d = layout.total_dim();
  Matrix m = matrix_from_json(doc.at("matrix"));
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("matrix size does not match layout");
  DensityMatrix rho{m, layout};
  validate_density_matrix(rho, kFileTol);
  // Canonicalize: exact hermiticity and unit trace.
  rho.mat = (rho.mat + rho.mat.adjoint()) / 2.0;
  rho.mat /= rho.mat.trace().real();
  return rho;
}

void save_state_file(const DensityMatrix& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << state_to_json(rho).dump(2) << "\n";
}

DensityMatrix load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file: " + path);
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("state file is not valid JSON: " + std::string(e.what()));
  }
  return state_from_json(doc);
}

std::string state_digest(const DensityMatrix& rho) {
  // FNV-1a over a canonical text rendering (12 significant digits, so the
  // digest is insensitive to sub-tolerance noise).
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const Part& p : rho.layout.parts()) mix(p.label + ":" + std::to_string(p.dim) + ";");
  char buf[64];
  for (Eigen::Index i = 0; i < rho.mat.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.mat.cols(); ++j) {
      double re = rho.mat(i, j).real(), im = rho.mat(i, j).imag();
      if (re == 0.0) re = 0.0;  // collapse -0
      if (im == 0.0) im = 0.0;
      std::snprintf(buf, sizeof buf, "%.12g,%.12g;", re, im);
      mix(buf);
    }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ssalab
