// Tests for the Petz recovery map and the saturation diagnostics.  The
// recovery map is validated against hand-computable fixed points (product
// states, self-recovery of the marginal) and against the exact-Markov
// construction, whose conditional mutual information vanishes by design.
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "ssalab/measures.hpp"
#include "ssalab/recovery.hpp"
#include "ssalab/rng.hpp"
#include "ssalab/states.hpp"
#include "ssalab/tensor.hpp"

using namespace ssalab;

namespace {

Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("petz map on a product state appends the fixed marginal") {
  // rho_BC = rho_B (x) rho_C: the map must send any sigma_B supported on
  // supp(rho_B) to sigma_B (x) rho_C.
  SubsystemLayout layout({{"B", 2}, {"C", 3}});
  Rng rng(41);
  DensityMatrix rb = random_mixed_state(SubsystemLayout({{"B", 2}}), 2, 42);
  DensityMatrix rc = random_mixed_state(SubsystemLayout({{"C", 3}}), 3, 43);
  DensityMatrix rho_bc{kron2(rb.mat, rc.mat), layout};
  RecoveryMap map = build_petz_map(rho_bc, {"B"});

  for (std::uint64_t seed : {44u, 45u, 46u}) {
    DensityMatrix sigma =
        random_mixed_state(SubsystemLayout({{"B", 2}}), 2, seed);
    Matrix expected = kron2(sigma.mat, rc.mat);
    Matrix got = map.apply(sigma.mat);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(map.trace_loss(sigma.mat)) < 1e-9);
  }
}

TEST_CASE("petz map recovers its own marginal exactly") {
  SubsystemLayout layout({{"B", 2}, {"C", 2}});
  for (std::uint64_t seed : {51u, 52u, 53u, 54u}) {
    DensityMatrix rho_bc = random_mixed_state(layout, 3, seed);
    RecoveryMap map = build_petz_map(rho_bc, {"B"});
    DensityMatrix rho_b = reduced_state(rho_bc, {"B"});
    Matrix recovered = map.apply(rho_b.mat);
    CHECK((recovered - rho_bc.mat).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("petz map preserves trace on full-support inputs") {
  SubsystemLayout layout({{"B", 3}, {"C", 2}});
  DensityMatrix rho_bc = random_mixed_state(layout, 6, 61);
  RecoveryMap map = build_petz_map(rho_bc, {"B"});
  for (std::uint64_t seed = 70; seed < 90; ++seed) {
    DensityMatrix sigma =
        random_mixed_state(SubsystemLayout({{"B", 3}}), 3, seed);
    Matrix out = map.apply(sigma.mat);
    CHECK(std::abs(out.trace().real() - 1.0) < 1e-8);
    CHECK(std::abs(map.trace_loss(sigma.mat)) < 1e-8);
  }
}

TEST_CASE("GHZ is far from Markov; exact constructions are Markov") {
  DensityMatrix ghz = make_ghz_state();
  MarkovCheck bad = check_markov(ghz, {"A"}, {"B"}, {"C"});
  CHECK(bad.cmi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(bad.is_markov);
  CHECK(bad.recovery_distance > 0.1);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MarkovStateSpec spec = random_markov_spec(seed);
    DensityMatrix rho = make_markov_state(spec);
    MarkovCheck good = check_markov(rho, {"A"}, {"B"}, {"C"});
    CHECK(good.cmi <= 1e-9);
    CHECK(good.cmi >= -1e-12);
    CHECK(good.is_markov);
    CHECK(good.recovery_distance <= 1e-6);
  }
}

TEST_CASE("markov check accepts grouped middle parties") {
  // Bell(A,B1) (x) Bell(B2,C): conditioning on the pair {B1,B2} screens
  // A from C, so I(A:C|B1B2) = 0 while I(A:B1B2) = 2.
  DensityMatrix bell = make_bell_state();
  DensityMatrix rho{
      tensor_product(bell.mat, bell.mat),
      SubsystemLayout({{"A", 2}, {"B1", 2}, {"B2", 2}, {"C", 2}})};

  MarkovCheck check = check_markov(rho, {"A"}, {"B1", "B2"}, {"C"});
  CHECK(std::abs(check.cmi) <= 1e-9);
  CHECK(check.is_markov);
  CHECK(check.recovery_distance <= 1e-6);
  DensityMatrix ab = reduced_state(rho, {"A", "B1", "B2"});
  CHECK(mutual_information(ab, {"A"}, {"B1", "B2"}) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("constructed saturating states pass the equality diagnostics") {
  OptimizerConfig cfg;
  cfg.seed = 11;
  for (std::uint64_t seed : {3u, 7u}) {
    BssaStateSpec spec = random_bssa_spec(seed);
    DensityMatrix rho = make_bssa_saturating_state(spec);
    BssaSaturationReport report =
        check_bssa_saturation(rho, {"A"}, {"B"}, {"C"}, cfg);
    CHECK(report.j_equality <= 2e-3);
    CHECK(report.eof_monogamy <= 2e-3);
    CHECK(report.max_bound_saturated);
    CHECK(report.cmi >= -1e-9);
    CHECK(report.terms.count("jAB") == 1);
    CHECK(report.terms.count("eofABC") == 1);
  }
}
