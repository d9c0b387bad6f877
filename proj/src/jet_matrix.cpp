#include "gammaforge/jet_matrix.hpp"

#include <sstream>

#include "gammaforge/errors.hpp"

namespace gammaforge {

JetMatrix::JetMatrix(int rows, int cols, const Jet& prototype)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows * cols), prototype) {
  if (rows < 1 || cols < 1) throw ShapeError("jet matrix must be non-empty");
}

JetMatrix::JetMatrix(int rows, int cols, std::vector<Jet> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 1 || cols < 1 || entries_.size() != static_cast<std::size_t>(rows * cols))
    throw ShapeError("jet matrix entry count differs from rows * cols");
  for (const auto& e : entries_)
    if (!e.same_shape(entries_.front())) throw ShapeError("jet matrix entries differ in dimension, order or base point");
}

JetMatrix JetMatrix::identity(int n, int dim, int order, const std::vector<double>& base_point) {
  if (static_cast<int>(base_point.size()) != dim) throw ShapeError("base point length differs from jet dimension");
  JetMatrix out(n, n, Jet::constant(0.0, order, base_point));
  for (int i = 0; i < n; ++i) out(i, i).derivs()[0] = 1.0;
  return out;
}

JetMatrix JetMatrix::constant(const Eigen::MatrixXd& values, int order, const std::vector<double>& base_point) {
  const int r = static_cast<int>(values.rows()), c = static_cast<int>(values.cols());
  JetMatrix out(r, c, Jet::constant(0.0, order, base_point));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out(i, j).derivs()[0] = values(i, j);
  return out;
}

Eigen::MatrixXd JetMatrix::value() const {
  Eigen::MatrixXd v(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) v(i, j) = (*this)(i, j).value();
  return v;
}

JetMatrix JetMatrix::derivative(int axis) const {
  std::vector<Jet> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.derivative(axis));
  return {rows_, cols_, std::move(out)};
}

JetMatrix JetMatrix::truncated(int order) const {
  std::vector<Jet> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.truncated(order));
  return {rows_, cols_, std::move(out)};
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("jet matrix product: inner dimensions differ");
  JetMatrix out(a.rows(), b.cols(), Jet::constant(0.0, a.order(), a.base_point()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("jet matrix sum: shapes differ");
  JetMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

JetMatrix operator-(const JetMatrix& a, const JetMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("jet matrix difference: shapes differ");
  JetMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

JetMatrix inverse(const JetMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("inverse of a non-square jet matrix");
  const Eigen::MatrixXd v = m.value();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 1e-13 * std::max(1.0, s(0)))) {
    std::ostringstream msg;
    msg << "jet matrix value part is singular (smallest singular value " << smin << ")";
    throw SingularityError(msg.str(), smin);
  }
  const int n = m.rows();
  JetMatrix approx = JetMatrix::constant(v.inverse(), m.order(), m.base_point());
  JetMatrix two = JetMatrix::identity(n, m.dim(), m.order(), m.base_point());
  for (int i = 0; i < n; ++i) two(i, i).derivs()[0] = 2.0;
  // Each Newton step doubles the number of correct orders: 1, 2, 4, ...
  for (int correct = 1; correct <= m.order(); correct *= 2) approx = approx * (two - m * approx);
  return approx;
}

}  // namespace gammaforge
