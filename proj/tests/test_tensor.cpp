#include "doctest.h"

#include <cmath>

#include "ssalab/rng.hpp"
#include "ssalab/tensor.hpp"

using namespace ssalab;

namespace {

Matrix random_hermitian(int dim, std::uint64_t seed) {
  Rng rng(dim * 1000 + seed);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) m.col(i) = rng.complex_gaussian(dim);
  return 0.5 * (m + m.adjoint()).eval();
}

Matrix random_density(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) g.col(i) = rng.complex_gaussian(dim);
  Matrix m = g * g.adjoint();
  return m / m.trace().real();
}

}  // namespace

TEST_CASE("layout indexing and group handling") {
  const SubsystemLayout layout({{"A", 2}, {"B", 3}, {"C", 2}});
  CHECK(layout.total_dim() == 12);
  CHECK(layout.part_count() == 3);
  CHECK(layout.dim(1) == 3);
  CHECK(layout.label(2) == "C");
  CHECK(layout.has_label("B"));
  CHECK(!layout.has_label("X"));
  CHECK(layout.part_index("C") == 2);
  CHECK_THROWS(layout.part_index("nope"));

  // Group indices come back sorted into layout order regardless of request order.
  CHECK(layout.group_indices({"C", "A"}) == std::vector<int>{0, 2});
  CHECK_THROWS(layout.group_indices({"A", "A"}));
  CHECK_THROWS(layout.group_indices({"Q"}));
  CHECK(layout.complement({"B"}) == std::vector<std::string>{"A", "C"});
  CHECK(layout.group_dim({"A", "C"}) == 4);

  const SubsystemLayout sub = layout.sub_layout({"C", "B"});
  CHECK(sub.part_count() == 2);
  CHECK(sub.label(0) == "B");  // layout order wins
  CHECK(sub.total_dim() == 6);

  CHECK(layout == layout.sub_layout({"A", "B", "C"}));
}

TEST_CASE("group indexer implements the row-major mixed radix convention") {
  // Layout (A:2, B:3, C:2), full index = a*6 + b*2 + c with A most significant.
  const SubsystemLayout layout({{"A", 2}, {"B", 3}, {"C", 2}});
  const GroupIndexer ix(layout, std::vector<int>{1});  // the B part
  CHECK(ix.group_dim() == 3);
  CHECK(ix.rest_dim() == 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 2; ++c) {
        const int rest = a * 2 + c;  // A then C, each in layout order
        CHECK(ix.full_index(b, rest) == a * 6 + b * 2 + c);
      }
}

TEST_CASE("tensor product matches hand-computed bit flip") {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Vector e00(4), e11(4);
  e00 << 1, 0, 0, 0;
  e11 << 0, 0, 0, 1;
  // (X (x) X) |00> = |11> under the first-part-most-significant convention.
  CHECK((tensor_product(x, x) * e00 - e11).norm() == doctest::Approx(0.0));

  Vector v0(2), v1(2);
  v0 << 1, 0;
  v1 << 0, 1;
  CHECK((tensor_product(v1, v1) - e11).norm() == doctest::Approx(0.0));
}

TEST_CASE("partial trace against an explicit four-index sum") {
  const SubsystemLayout layout({{"A", 2}, {"B", 3}});
  const Matrix rho = random_density(6, 7);

  // Oracle: rho_A(a,a') = sum_b rho[(a,b),(a',b)], indices by hand.
  Matrix oracle_a = Matrix::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b = 0; b < 3; ++b) oracle_a(a, a2) += rho(a * 3 + b, a2 * 3 + b);
  Matrix oracle_b = Matrix::Zero(3, 3);
  for (int b = 0; b < 3; ++b)
    for (int b2 = 0; b2 < 3; ++b2)
      for (int a = 0; a < 2; ++a) oracle_b(b, b2) += rho(a * 3 + b, a * 3 + b2);

  CHECK((partial_trace(rho, layout, {"A"}) - oracle_a).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((partial_trace(rho, layout, {"B"}) - oracle_b).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(partial_trace(rho, layout, {"A"}).trace().real() == doctest::Approx(1.0));

  // Tracing nothing returns the matrix unchanged.
  CHECK((partial_trace(rho, layout, {"A", "B"}) - rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial trace of a product state factorizes") {
  const Matrix a = random_density(2, 1);
  const Matrix b = random_density(3, 2);
  const SubsystemLayout layout({{"A", 2}, {"B", 3}});
  const Matrix rho = tensor_product(a, b);
  CHECK((partial_trace(rho, layout, {"A"}) - a).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((partial_trace(rho, layout, {"B"}) - b).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("embed operator acts only on its target slot") {
  const SubsystemLayout layout({{"A", 2}, {"B", 2}});
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Matrix on_b = embed_operator(x, layout, {"B"});
  CHECK((on_b - tensor_product(Matrix::Identity(2, 2), x)).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix on_a = embed_operator(x, layout, {"A"});
  CHECK((on_a - tensor_product(x, Matrix::Identity(2, 2))).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("permute parts relabels the index order") {
  const SubsystemLayout layout({{"A", 2}, {"B", 3}});
  const Matrix a = random_density(2, 3);
  const Matrix b = random_density(3, 4);
  const Matrix ab = tensor_product(a, b);
  const Matrix ba = permute_parts(ab, layout, {"B", "A"});
  CHECK((ba - tensor_product(b, a)).cwiseAbs().maxCoeff() < 1e-13);

  // Permuting twice restores the original.
  const SubsystemLayout swapped({{"B", 3}, {"A", 2}});
  CHECK((permute_parts(ba, swapped, {"A", "B"}) - ab).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("hermitian eigendecomposition is descending and reconstructs") {
  const Matrix h = random_hermitian(5, 11);
  const EigenSystem sys = hermitian_eigen(h);
  for (int i = 0; i + 1 < 5; ++i) CHECK(sys.values[i] >= sys.values[i + 1]);
  Matrix rebuilt = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    rebuilt += sys.values[i] * (sys.vectors.col(i) * sys.vectors.col(i).adjoint());
  CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(hermitian_eigen(Matrix::Random(3, 3)));
}

TEST_CASE("spectral functions act on the support only") {
  Matrix rho = Matrix::Zero(3, 3);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.5;  // third eigenvalue is exactly zero
  const Matrix lg = log2_on_support(rho);
  CHECK(lg(0, 0).real() == doctest::Approx(-1.0));
  CHECK(lg(2, 2).real() == doctest::Approx(0.0));  // untouched off support

  const Matrix sq = sqrt_on_support(rho);
  CHECK((sq * sq - rho).cwiseAbs().maxCoeff() < 1e-13);

  const Matrix pinv = pinv_on_support(rho);
  CHECK(pinv(0, 0).real() == doctest::Approx(2.0));
  CHECK(pinv(2, 2).real() == doctest::Approx(0.0));
  CHECK(support_rank(rho) == 2);
  CHECK(support_rank(Matrix::Identity(4, 4)) == 4);
}

TEST_CASE("trace distance on commuting states is half the L1 gap") {
  Matrix half = 0.5 * Matrix::Identity(2, 2);
  Matrix tilted = Matrix::Zero(2, 2);
  tilted(0, 0) = 0.75;
  tilted(1, 1) = 0.25;
  CHECK(trace_distance(half, tilted) == doctest::Approx(0.25));
  CHECK(trace_distance(half, half) == doctest::Approx(0.0));
}

TEST_CASE("hermiticity check") {
  CHECK(is_hermitian(random_hermitian(4, 2)));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK(!is_hermitian(m));
}
