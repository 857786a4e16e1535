#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ssalab/measures.hpp"
#include "ssalab/rng.hpp"
#include "ssalab/states.hpp"

using namespace ssalab;

TEST_CASE("named states have the textbook matrices") {
  const DensityMatrix bell = make_bell_state();
  CHECK(bell.layout.total_dim() == 4);
  CHECK(bell.mat(0, 0).real() == doctest::Approx(0.5));
  CHECK(bell.mat(0, 3).real() == doctest::Approx(0.5));
  CHECK(bell.mat(1, 1).real() == doctest::Approx(0.0));
  CHECK(is_pure(bell));
  CHECK(purity(bell) == doctest::Approx(1.0));

  const DensityMatrix ghz = make_ghz_state();
  CHECK(is_pure(ghz));
  CHECK(subsystem_entropy(ghz, {"A"}) == doctest::Approx(1.0));
  CHECK(subsystem_entropy(ghz, {"A", "B"}) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(ghz) == doctest::Approx(0.0).epsilon(1e-9));

  // W state marginal: eigenvalues (2/3, 1/3) on each qubit.
  const DensityMatrix w = make_w_state();
  const double h13 = -(1.0 / 3.0) * std::log2(1.0 / 3.0) - (2.0 / 3.0) * std::log2(2.0 / 3.0);
  CHECK(subsystem_entropy(w, {"A"}) == doctest::Approx(h13));

  const DensityMatrix product = make_named_state("product");
  CHECK(product.mat(0, 0).real() == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(product) == doctest::Approx(0.0));

  CHECK_THROWS(make_named_state("no-such-state"));
  CHECK_THROWS(make_named_state("werner:1.5"));
}

TEST_CASE("werner family endpoints and purity curve") {
  // p = 1: pure singlet.
  const DensityMatrix singlet = make_werner_state(1.0);
  CHECK(is_pure(singlet));
  CHECK(singlet.mat(1, 2).real() == doctest::Approx(-0.5));
  // p = 0: maximally mixed.
  const DensityMatrix mixed = make_werner_state(0.0);
  CHECK((mixed.mat - 0.25 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  // Purity is (1 + 3p^2)/4 for this family.
  for (double p : {0.2, 0.5, 0.8})
    CHECK(purity(make_werner_state(p)) == doctest::Approx((1.0 + 3.0 * p * p) / 4.0));
}

TEST_CASE("density matrix validation rejects malformed inputs") {
  DensityMatrix bad = make_bell_state();
  bad.mat(0, 0) += 0.5;  // trace off
  CHECK_THROWS(validate_density_matrix(bad));

  DensityMatrix nonherm = make_bell_state();
  nonherm.mat(0, 1) = Complex(0.3, 0.1);
  CHECK_THROWS(validate_density_matrix(nonherm));

  DensityMatrix negative = make_bell_state();
  negative.mat = 1.5 * negative.mat - 0.125 * Matrix::Identity(4, 4);
  CHECK_THROWS(validate_density_matrix(negative));

  CHECK_NOTHROW(validate_density_matrix(make_ghz_state()));
}

TEST_CASE("random pure states are Haar-ish: Bloch vectors average out") {
  // The mean Bloch vector of Haar qubit states is 0; with 1000 samples the
  // standard error per component is ~0.018, so 0.1 is a loose gate.
  double sx = 0.0, sy = 0.0, sz = 0.0;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    const DensityMatrix psi = random_pure_state(2, 1000 + k);
    sx += 2.0 * psi.mat(0, 1).real();
    sy += -2.0 * psi.mat(0, 1).imag();
    sz += (psi.mat(0, 0) - psi.mat(1, 1)).real();
  }
  CHECK(std::abs(sx / n) < 0.1);
  CHECK(std::abs(sy / n) < 0.1);
  CHECK(std::abs(sz / n) < 0.1);
}

TEST_CASE("random mixed states hit the requested rank") {
  const SubsystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
  for (int rank : {1, 3, 8}) {
    const DensityMatrix rho = random_mixed_state(layout, rank, 50 + rank);
    CHECK_NOTHROW(validate_density_matrix(rho));
    CHECK(support_rank(rho.mat) == rank);
  }
  CHECK_THROWS(random_mixed_state(layout, 0, 1));
  CHECK_THROWS(random_mixed_state(layout, 9, 1));
  // Determinism: same seed, same matrix, bit for bit.
  const DensityMatrix a = random_mixed_state(layout, 3, 77);
  const DensityMatrix b = random_mixed_state(layout, 3, 77);
  CHECK((a.mat - b.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random unitaries are unitary and seed-stable") {
  Rng rng(5);
  const Matrix u = random_unitary(4, rng);
  CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  Rng rng2(5);
  const Matrix v = random_unitary(4, rng2);
  CHECK((u - v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cq states are block classical on B") {
  const DensityMatrix cq = make_named_state("cq");
  CHECK_NOTHROW(validate_density_matrix(cq));
  // Off-diagonal blocks in the B index vanish: <a,k|rho|a',k'> = 0 for k != k'.
  for (int a = 0; a < 2; ++a)
    for (int a2 = 0; a2 < 2; ++a2)
      CHECK(std::abs(cq.mat(a * 2 + 0, a2 * 2 + 1)) == doctest::Approx(0.0));

  const DensityMatrix rcq = random_cq_state(2, 3, 9);
  CHECK(rcq.layout.dim(1) == 3);
  for (int a = 0; a < 2; ++a)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int k = 0; k < 3; ++k)
        for (int k2 = 0; k2 < 3; ++k2)
          if (k != k2) CHECK(std::abs(rcq.mat(a * 3 + k, a2 * 3 + k2)) < 1e-14);
}

TEST_CASE("markov construction saturates strong subadditivity") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const MarkovStateSpec spec = random_markov_spec(seed);
    const DensityMatrix rho = make_markov_state(spec);
    CHECK_NOTHROW(validate_density_matrix(rho));
    const double cmi = conditional_mutual_information(rho, {"A"}, {"B"}, {"C"});
    CHECK(std::abs(cmi) <= 1e-9);
  }
}

TEST_CASE("markov block dims add up") {
  MarkovStateSpec spec = random_markov_spec(4);
  int dim_b = 0;
  for (const MarkovBlock& block : spec.blocks) dim_b += block.left_dim * block.right_dim;
  CHECK(make_markov_state(spec).layout.dim(1) == dim_b);
}

TEST_CASE("bssa constructions are valid tripartite states") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const DensityMatrix rho = make_bssa_saturating_state(random_bssa_spec(seed));
    CHECK(rho.layout.part_count() == 3);
    CHECK_NOTHROW(validate_density_matrix(rho));
    // The B-C marginal is block-classical: I(A:C|B) must vanish is not
    // required here, but SSA evaluation must be finite and small terms sane.
    const double cmi = conditional_mutual_information(rho, {"A"}, {"B"}, {"C"});
    CHECK(cmi >= -1e-9);
  }
}

TEST_CASE("purification round trip") {
  const SubsystemLayout layout({{"A", 2}, {"B", 3}});
  const DensityMatrix rho = random_mixed_state(layout, 4, 21);
  const DensityMatrix psi = purify(rho, "R");
  CHECK(is_pure(psi));
  CHECK(psi.layout.part_count() == 3);
  CHECK(psi.layout.label(2) == "R");
  const DensityMatrix back = reduced_state(psi, {"A", "B"});
  CHECK((back.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("state files round trip and reject bad payloads") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ssalab_state_test";
  fs::create_directories(dir);
  const std::string path = (dir / "state.json").string();

  const DensityMatrix rho = random_mixed_state(SubsystemLayout({{"A", 2}, {"B", 2}}), 2, 33);
  save_state_file(rho, path);
  const DensityMatrix loaded = load_state_file(path);
  CHECK(loaded.layout == rho.layout);
  CHECK((loaded.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(state_digest(loaded) == state_digest(rho));

  // Tampered payloads must be rejected: break hermiticity beyond 1e-8.
  nlohmann::ordered_json doc = state_to_json(rho);
  doc["matrix"][0][1][0] = doc["matrix"][0][1][0].get<double>() + 1e-3;
  CHECK_THROWS(state_from_json(doc));

  // Non-unit trace beyond tolerance is rejected too.
  nlohmann::ordered_json doc2 = state_to_json(rho);
  doc2["matrix"][0][0][0] = doc2["matrix"][0][0][0].get<double>() + 1e-3;
  CHECK_THROWS(state_from_json(doc2));

  // And structurally broken documents.
  nlohmann::ordered_json doc3 = state_to_json(rho);
  doc3.erase("layout");
  CHECK_THROWS(state_from_json(doc3));

  CHECK_THROWS(load_state_file((dir / "missing.json").string()));
  fs::remove_all(dir);
}

TEST_CASE("digest is stable and sensitive") {
  const DensityMatrix a = make_bell_state();
  CHECK(state_digest(a) == state_digest(make_bell_state()));
  CHECK(state_digest(a) != state_digest(make_ghz_state()));
  CHECK(state_digest(a) != state_digest(make_werner_state(0.9999)));
}
