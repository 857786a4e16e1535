#include "ssalab/channels.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ssalab {

namespace {

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(what) + " parameter must be in [0,1]");
}

// Channels built from parametric Kraus lists shed their vanishing members.
KrausChannel finalize(KrausChannel ch) {
  std::vector<Matrix> kept;
  for (const Matrix& k : ch.kraus)
    if (k.cwiseAbs().maxCoeff() > 1e-14) kept.push_back(k);
  ch.kraus = std::move(kept);
  validate_channel(ch);
  return ch;
}

}  // namespace

void validate_channel(const KrausChannel& ch) {
  if (ch.kraus.empty()) throw std::invalid_argument("channel has no Kraus operators");
  Matrix sum = Matrix::Zero(ch.input_dim, ch.input_dim);
  for (const Matrix& k : ch.kraus) {
    if (k.rows() != ch.output_dim || k.cols() != ch.input_dim)
      throw std::invalid_argument("Kraus operator dimensions inconsistent");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(ch.input_dim, ch.input_dim)).cwiseAbs().maxCoeff() > kStructureTol)
    throw std::invalid_argument("Kraus completeness violated");
}

KrausChannel amplitude_damping_channel(double gamma) {
  require_unit_interval(gamma, "amplitude damping");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return finalize({2, 2, {k0, k1}});
}

KrausChannel phase_damping_channel(double lambda) {
  require_unit_interval(lambda, "phase damping");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - lambda);
  k1(1, 1) = std::sqrt(lambda);
  return finalize({2, 2, {k0, k1}});
}

KrausChannel depolarizing_channel(double p) {
  require_unit_interval(p, "depolarizing");
  Matrix i2 = Matrix::Identity(2, 2);
  Matrix x = Matrix::Zero(2, 2), y = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  y(0, 1) = Complex(0.0, -1.0);
  y(1, 0) = Complex(0.0, 1.0);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const double w = std::sqrt(p / 4.0);
  return finalize({2, 2, {std::sqrt(1.0 - 0.75 * p) * i2, w * x, w * y, w * z}});
}

KrausChannel unitary_channel(const Matrix& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unitary channel needs a square matrix");
  const int d = static_cast<int>(u.rows());
  if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kStructureTol)
    throw std::invalid_argument("matrix is not unitary");
  return {d, d, {u}};
}

KrausChannel make_named_channel(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("channel spec must look like name:parameter");
  const std::string name = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (name == "unitary") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open unitary file: " + arg);
    nlohmann::ordered_json doc;
    try {
      doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("unitary file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.contains("matrix")) throw std::invalid_argument("unitary file needs a matrix field");
    return unitary_channel(matrix_from_json(doc.at("matrix")));
  }
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(arg, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad channel parameter: " + arg);
  }
  if (used != arg.size()) throw std::invalid_argument("bad channel parameter: " + arg);
  if (name == "amp") return amplitude_damping_channel(p);
  if (name == "phase") return phase_damping_channel(p);
  if (name == "depol") return depolarizing_channel(p);
  throw std::invalid_argument("unknown channel name: " + name);
}

Matrix apply_channel(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.input_dim || rho.cols() != ch.input_dim)
    throw std::invalid_argument("state dimension does not match channel input");
  Matrix out = Matrix::Zero(ch.output_dim, ch.output_dim);
  for (const Matrix& k : ch.kraus) out += k * rho * k.adjoint();
  return out;
}

Matrix stinespring_isometry(const KrausChannel& ch) {
  const int env = static_cast<int>(ch.kraus.size());
  Matrix v = Matrix::Zero(ch.output_dim * env, ch.input_dim);
  for (int i = 0; i < env; ++i)
    for (int o = 0; o < ch.output_dim; ++o)
      for (int in = 0; in < ch.input_dim; ++in) v(o * env + i, in) = ch.kraus[i](o, in);
  return v;
}

StagePipeline run_two_stage(const DensityMatrix& initial_ab, const KrausChannel& stage1,
                            const KrausChannel& stage2) {
  validate_density_matrix(initial_ab);
  if (initial_ab.layout.part_count() != 2)
    throw std::invalid_argument("pipeline input must be a bipartite (A,B) state");
  const int da = initial_ab.layout.dim(0);
  const int db = initial_ab.layout.dim(1);
  if (stage1.input_dim != db)
    throw std::invalid_argument("stage 1 input dimension does not match B");
  if (stage2.input_dim != stage1.output_dim)
    throw std::invalid_argument("stage 2 input dimension does not match B1");
  const std::string a_label = initial_ab.layout.label(0);

  StagePipeline pipe;
  pipe.initial_ab = initial_ab;
  pipe.stage1 = stage1;
  pipe.stage2 = stage2;

  const int e1 = static_cast<int>(stage1.kraus.size());
  const int b1 = stage1.output_dim;
  const Matrix v1 = stinespring_isometry(stage1);
  const Matrix m1 = tensor_product(Matrix::Identity(da, da), v1);
  SubsystemLayout layout1({{a_label, da}, {"B1", b1}, {"E1", e1}});
  pipe.state1 = {m1 * initial_ab.mat * m1.adjoint(), layout1};
  validate_density_matrix(pipe.state1);

  const int e2 = static_cast<int>(stage2.kraus.size());
  const int b2 = stage2.output_dim;
  const Matrix v2 = stinespring_isometry(stage2);
  const Matrix m2 = tensor_product(tensor_product(Matrix::Identity(da, da), v2),
                                   Matrix::Identity(e1, e1));
  // m2 maps (A, B1, E1) to (A, B2, E2, E1); reorder to (A, B2, E1, E2).
  SubsystemLayout staged({{a_label, da}, {"B2", b2}, {"E2", e2}, {"E1", e1}});
  Matrix raw = m2 * pipe.state1.mat * m2.adjoint();
  Matrix ordered = permute_parts(raw, staged, {a_label, "B2", "E1", "E2"});
  pipe.state2 = {ordered, SubsystemLayout({{a_label, da}, {"B2", b2}, {"E1", e1}, {"E2", e2}})};
  validate_density_matrix(pipe.state2);
  return pipe;
}

DataProcessingReport data_processing_report(const StagePipeline& pipeline,
                                            const OptimizerConfig& config,
                                            bool direct_optimization) {
  if (!is_pure(pipeline.initial_ab))
    throw std::invalid_argument("data-processing analysis needs a pure initial AB state");
  if (pipeline.initial_ab.layout.dim(0) != 2 || pipeline.initial_ab.layout.dim(1) != 2)
    throw std::invalid_argument("data-processing analysis needs qubit A and B");

  const std::string a = pipeline.state1.layout.label(0);
  DataProcessingReport rep;
  rep.method = direct_optimization ? "direct" : "oracle-chain";

  const DensityMatrix rho_ab1 = reduced_state(pipeline.state1, {a, "B1"});
  const DensityMatrix rho_ab2 = reduced_state(pipeline.state2, {a, "B2"});
  rep.ic_stage1 = coherent_information(rho_ab1, {a}, {"B1"});
  rep.ic_stage2 = coherent_information(rho_ab2, {a}, {"B2"});
  rep.qdp_margin = rep.ic_stage1 - rep.ic_stage2;

  const DensityMatrix rho_ae = reduced_state(pipeline.state2, {a, "E1", "E2"});
  rep.cmi = conditional_mutual_information(rho_ae, {a}, {"E1"}, {"E2"});
  rep.identity_residual = std::abs(rep.qdp_margin - rep.cmi);

  // B-side terms: closed-form formation entanglement plus directly
  // optimized discord on the two-qubit marginals.
  const double e_ab1 = eof_two_qubit(rho_ab1);
  const double e_ab2 = eof_two_qubit(rho_ab2);
  const double d_ab1 = quantum_discord(rho_ab1, {"B1"}, config).value;
  const double d_ab2 = quantum_discord(rho_ab2, {"B2"}, config).value;
  rep.lii_stage1 = e_ab1 - d_ab1;
  rep.lii_full = e_ab2 - d_ab2;
  rep.delta_via_b = rep.lii_full - rep.lii_stage1;

  double e_ae1, d_ae1, e_ae12, d_ae12;
  if (!direct_optimization) {
    // Purification identities: the global states are pure at both stages,
    // so every E-side term reduces to a B-side term plus entropies.
    const double s_a_given_b1 = subsystem_entropy(pipeline.state1, {a, "B1"}) -
                                subsystem_entropy(pipeline.state1, {"B1"});
    const double s_a_given_e1 = subsystem_entropy(pipeline.state1, {a, "E1"}) -
                                subsystem_entropy(pipeline.state1, {"E1"});
    const double s_a_given_b2 = subsystem_entropy(pipeline.state2, {a, "B2"}) -
                                subsystem_entropy(pipeline.state2, {"B2"});
    const double s_a_given_e12 = subsystem_entropy(pipeline.state2, {a, "E1", "E2"}) -
                                 subsystem_entropy(pipeline.state2, {"E1", "E2"});
    d_ae1 = e_ab1 - s_a_given_e1;
    e_ae1 = d_ab1 + s_a_given_b1;
    d_ae12 = e_ab2 - s_a_given_e12;
    e_ae12 = d_ab2 + s_a_given_b2;
  } else {
    const DensityMatrix rho_ae1 = reduced_state(pipeline.state1, {a, "E1"});
    const int de1 = pipeline.state1.layout.group_dim({"E1"});
    d_ae1 = de1 == 1 ? 0.0 : quantum_discord(rho_ae1, {"E1"}, config).value;
    e_ae1 = eof_auto(pipeline.state1, {a}, {"E1"}, config);
    d_ae12 = quantum_discord(rho_ae, {"E1", "E2"}, config).value;
    e_ae12 = eof_auto(pipeline.state2, {a}, {"E1", "E2"}, config);
  }
  rep.delta_via_e = e_ae1 - e_ae12 + d_ae12 - d_ae1;
  rep.cross_residual = std::abs(rep.delta_via_b - rep.delta_via_e);

  rep.qdp2_margin = rep.qdp_margin - rep.delta_via_b;
  rep.lii_bound_margin = rep.qdp_margin - (rep.lii_full - rep.lii_stage1);

  rep.terms = {{"eofAB1", e_ab1},   {"eofAB2", e_ab2},   {"discordAB1", d_ab1},
               {"discordAB2", d_ab2}, {"eofAE1", e_ae1},   {"eofAE12", e_ae12},
               {"discordAE1", d_ae1}, {"discordAE12", d_ae12}};
  return rep;
}

}  // namespace ssalab
