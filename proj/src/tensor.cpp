#include "ssalab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ssalab {

SubsystemLayout::SubsystemLayout(std::vector<Part> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("layout needs at least one part");
  std::set<std::string> seen;
  for (const Part& p : parts_) {
    if (p.label.empty()) throw std::invalid_argument("empty part label");
    if (p.dim < 1) throw std::invalid_argument("part dim must be >= 1: " + p.label);
    if (!seen.insert(p.label).second)
      throw std::invalid_argument("duplicate part label: " + p.label);
    total_dim_ *= p.dim;
  }
}

bool SubsystemLayout::has_label(const std::string& label) const {
  for (const Part& p : parts_)
    if (p.label == label) return true;
  return false;
}

int SubsystemLayout::part_index(const std::string& label) const {
  for (int i = 0; i < part_count(); ++i)
    if (parts_[i].label == label) return i;
  throw std::invalid_argument("unknown part label: " + label);
}

std::vector<int> SubsystemLayout::group_indices(const std::vector<std::string>& labels) const {
  std::vector<int> idx;
  idx.reserve(labels.size());
  for (const std::string& l : labels) idx.push_back(part_index(l));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw std::invalid_argument("repeated label in group");
  return idx;
}

std::vector<std::string> SubsystemLayout::complement(const std::vector<std::string>& labels) const {
  std::vector<int> group = group_indices(labels);
  std::vector<std::string> rest;
  for (int i = 0; i < part_count(); ++i)
    if (!std::binary_search(group.begin(), group.end(), i)) rest.push_back(parts_[i].label);
  return rest;
}

int SubsystemLayout::group_dim(const std::vector<std::string>& labels) const {
  int d = 1;
  for (int i : group_indices(labels)) d *= parts_[i].dim;
  return d;
}

SubsystemLayout SubsystemLayout::sub_layout(const std::vector<std::string>& labels) const {
  std::vector<Part> sub;
  for (int i : group_indices(labels)) sub.push_back(parts_[i]);
  return SubsystemLayout(sub);
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  std::vector<Part> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return SubsystemLayout(all);
}

bool SubsystemLayout::operator==(const SubsystemLayout& other) const {
  if (parts_.size() != other.parts_.size()) return false;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].label != other.parts_[i].label || parts_[i].dim != other.parts_[i].dim)
      return false;
  return true;
}

GroupIndexer::GroupIndexer(const SubsystemLayout& layout, const std::vector<int>& group_parts) {
  const int n = layout.part_count();
  // Stride of part i in the full index (first part most significant).
  std::vector<int> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * layout.dim(i + 1);

  std::vector<bool> in_group(n, false);
  for (int g : group_parts) in_group.at(g) = true;
  for (int i = 0; i < n; ++i) {
    if (in_group[i]) {
      group_dims_.push_back(layout.dim(i));
      group_strides_.push_back(stride[i]);
      group_dim_ *= layout.dim(i);
    } else {
      rest_dims_.push_back(layout.dim(i));
      rest_strides_.push_back(stride[i]);
      rest_dim_ *= layout.dim(i);
    }
  }
}

int GroupIndexer::full_index(int group, int rest) const {
  int full = 0;
  for (int i = static_cast<int>(group_dims_.size()) - 1; i >= 0; --i) {
    full += (group % group_dims_[i]) * group_strides_[i];
    group /= group_dims_[i];
  }
  for (int i = static_cast<int>(rest_dims_.size()) - 1; i >= 0; --i) {
    full += (rest % rest_dims_[i]) * rest_strides_[i];
    rest /= rest_dims_[i];
  }
  return full;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix partial_trace(const Matrix& m, const SubsystemLayout& layout,
                     const std::vector<std::string>& keep) {
  if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim())
    throw std::invalid_argument("matrix size does not match layout");
  GroupIndexer ix(layout, layout.group_indices(keep));
  const int dk = ix.group_dim(), dr = ix.rest_dim();
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Complex s = 0.0;
      for (int r = 0; r < dr; ++r) s += m(ix.full_index(i, r), ix.full_index(j, r));
      out(i, j) = s;
    }
  return out;
}

Matrix embed_operator(const Matrix& op, const SubsystemLayout& layout,
                      const std::vector<std::string>& target) {
  GroupIndexer ix(layout, layout.group_indices(target));
  const int dt = ix.group_dim(), dr = ix.rest_dim();
  if (op.rows() != dt || op.cols() != dt)
    throw std::invalid_argument("operator size does not match target group");
  Matrix out = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (int i = 0; i < dt; ++i)
    for (int j = 0; j < dt; ++j) {
      if (op(i, j) == Complex(0.0)) continue;
      for (int r = 0; r < dr; ++r) out(ix.full_index(i, r), ix.full_index(j, r)) = op(i, j);
    }
  return out;
}

Matrix permute_parts(const Matrix& m, const SubsystemLayout& layout,
                     const std::vector<std::string>& new_order) {
  if (static_cast<int>(new_order.size()) != layout.part_count())
    throw std::invalid_argument("permutation must list every part");
  if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim())
    throw std::invalid_argument("matrix size does not match layout");
  const int n = layout.part_count();
  const int d = layout.total_dim();

  std::vector<int> old_stride(n, 1);
  for (int i = n - 2; i >= 0; --i) old_stride[i] = old_stride[i + 1] * layout.dim(i + 1);

  // new_stride[k]: stride, in the permuted index, of the part placed at slot k.
  std::vector<int> perm(n);  // slot k holds old part perm[k]
  {
    std::vector<bool> used(n, false);
    for (int k = 0; k < n; ++k) {
      perm[k] = layout.part_index(new_order[k]);
      if (used[perm[k]]) throw std::invalid_argument("repeated label in permutation");
      used[perm[k]] = true;
    }
  }
  std::vector<int> new_stride(n, 1);
  for (int k = n - 2; k >= 0; --k) new_stride[k] = new_stride[k + 1] * layout.dim(perm[k + 1]);

  // map[i] = permuted index of old full index i
  std::vector<int> map(d, 0);
  for (int i = 0; i < d; ++i) {
    int out = 0;
    for (int k = 0; k < n; ++k) {
      int digit = (i / old_stride[perm[k]]) % layout.dim(perm[k]);
      out += digit * new_stride[k];
    }
    map[i] = out;
  }
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

EigenSystem hermitian_eigen(const Matrix& m) {
  if (!is_hermitian(m)) throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigendecomposition failed");
  // Eigen returns ascending order; flip to descending.
  const Eigen::Index n = m.rows();
  EigenSystem sys;
  sys.values = solver.eigenvalues().reverse();
  sys.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) sys.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  return sys;
}

Matrix function_on_support(const Matrix& m, const std::function<double(double)>& f) {
  EigenSystem sys = hermitian_eigen(m);
  RealVector vals = sys.values;
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    vals(k) = std::abs(vals(k)) <= kSupportCutoff ? 0.0 : f(vals(k));
  return sys.vectors * vals.asDiagonal() * sys.vectors.adjoint();
}

Matrix log2_on_support(const Matrix& m) {
  return function_on_support(m, [](double x) { return std::log2(x); });
}

Matrix sqrt_on_support(const Matrix& m) {
  return function_on_support(m, [](double x) { return std::sqrt(x); });
}

Matrix pinv_on_support(const Matrix& m) {
  return function_on_support(m, [](double x) { return 1.0 / x; });
}

int support_rank(const Matrix& m) {
  EigenSystem sys = hermitian_eigen(m);
  int r = 0;
  for (Eigen::Index k = 0; k < sys.values.size(); ++k)
    if (std::abs(sys.values(k)) > kSupportCutoff) ++r;
  return r;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  EigenSystem sys = hermitian_eigen(a - b);
  return 0.5 * sys.values.cwiseAbs().sum();
}

}  // namespace ssalab
