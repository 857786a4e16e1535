#pragma once

// Dense complex linear algebra on labelled tensor-product spaces.
//
// Every multipartite operator carries a SubsystemLayout describing the
// ordered factors of the product space.  Index convention: basis states are
// enumerated row-major with the *first* part most significant, i.e. for
// layout [A(2), B(3)] the full index is 3*iA + iB.  Groups of parts are
// always reported in layout order, so reduced operators returned by
// partial_trace use the same convention and compose with embed_operator
// without any permutation bookkeeping.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ssalab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Eigenvalues with |lambda| below this are treated as zero when deciding
// operator support (pseudo-inverse, log on support, rank counting).
inline constexpr double kSupportCutoff = 1e-12;

// Absolute tolerance for structural checks (hermiticity, trace one,
// positivity, Kraus completeness).
inline constexpr double kStructureTol = 1e-10;

struct Part {
  std::string label;
  int dim = 0;
};

// Ordered list of labelled factors of a tensor-product space.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Part> parts);

  const std::vector<Part>& parts() const { return parts_; }
  int part_count() const { return static_cast<int>(parts_.size()); }
  int total_dim() const { return total_dim_; }
  int dim(int part) const { return parts_.at(part).dim; }
  const std::string& label(int part) const { return parts_.at(part).label; }

  bool has_label(const std::string& label) const;
  // Index of the part with the given label; throws std::invalid_argument
  // for unknown labels.
  int part_index(const std::string& label) const;
  // Part indices for a group of labels, sorted into layout order.
  // Throws on unknown or repeated labels.
  std::vector<int> group_indices(const std::vector<std::string>& labels) const;
  // Labels not contained in `labels`, in layout order.
  std::vector<std::string> complement(const std::vector<std::string>& labels) const;
  // Product of the dims of the given group.
  int group_dim(const std::vector<std::string>& labels) const;
  // Layout consisting of the given group only (layout order).
  SubsystemLayout sub_layout(const std::vector<std::string>& labels) const;
  // Concatenation [this, other]; labels must stay unique.
  SubsystemLayout concat(const SubsystemLayout& other) const;

  bool operator==(const SubsystemLayout& other) const;

 private:
  std::vector<Part> parts_;
  int total_dim_ = 1;
};

// Splits full-space indices into a (group, rest) pair of sub-indices, both
// enumerated in layout order.  Used by partial_trace / embed_operator /
// permute_parts so that none of them ever materialises a permuted copy.
class GroupIndexer {
 public:
  GroupIndexer(const SubsystemLayout& layout, const std::vector<int>& group_parts);

  int group_dim() const { return group_dim_; }
  int rest_dim() const { return rest_dim_; }
  // Full-space index assembled from a group index and a rest index.
  int full_index(int group, int rest) const;

 private:
  // Mixed-radix digit weights of each group/rest digit in the full index.
  std::vector<int> group_dims_, group_strides_;
  std::vector<int> rest_dims_, rest_strides_;
  int group_dim_ = 1;
  int rest_dim_ = 1;
};

// Kronecker product, first factor most significant.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);

bool is_hermitian(const Matrix& m, double tol = kStructureTol);

// Trace out everything except `keep`; result lives on sub_layout(keep).
Matrix partial_trace(const Matrix& m, const SubsystemLayout& layout,
                     const std::vector<std::string>& keep);

// op acts on the group `target` (basis in layout order); result is
// op tensored with the identity on the rest, at the correct index positions.
Matrix embed_operator(const Matrix& op, const SubsystemLayout& layout,
                      const std::vector<std::string>& target);

// Reorders the factors of m to `new_order` (a permutation of all labels).
Matrix permute_parts(const Matrix& m, const SubsystemLayout& layout,
                     const std::vector<std::string>& new_order);

struct EigenSystem {
  RealVector values;  // descending
  Matrix vectors;     // columns match values
};

// Eigendecomposition of a Hermitian matrix; throws if m is not Hermitian
// within kStructureTol.
EigenSystem hermitian_eigen(const Matrix& m);

// f applied to the nonzero eigenvalues of a Hermitian matrix; eigenvalues
// with |lambda| <= kSupportCutoff are mapped to zero, so the result acts on
// the support of m only.
Matrix function_on_support(const Matrix& m, const std::function<double(double)>& f);

Matrix log2_on_support(const Matrix& m);
Matrix sqrt_on_support(const Matrix& m);
Matrix pinv_on_support(const Matrix& m);

// Rank counted with the support cutoff.
int support_rank(const Matrix& m);

// (1/2) * trace-norm of (a - b).
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace ssalab
