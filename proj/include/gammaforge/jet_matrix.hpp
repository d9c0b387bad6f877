#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gammaforge/jet.hpp"

namespace gammaforge {

/// Matrix of jets sharing dimension, order and base point (jets of a matrix field).
class JetMatrix {
 public:
  JetMatrix(int rows, int cols, const Jet& prototype);
  JetMatrix(int rows, int cols, std::vector<Jet> entries);

  static JetMatrix identity(int n, int dim, int order, const std::vector<double>& base_point);
  /// Constant jets from a plain matrix.
  static JetMatrix constant(const Eigen::MatrixXd& values, int order, const std::vector<double>& base_point);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int order() const { return entries_.front().order(); }
  int dim() const { return entries_.front().dim(); }
  const std::vector<double>& base_point() const { return entries_.front().base_point(); }

  const Jet& operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r * cols_ + c)]; }
  Jet& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r * cols_ + c)]; }

  /// Order-0 part.
  Eigen::MatrixXd value() const;
  /// Matrix of d/dx^axis entries (one order lower).
  JetMatrix derivative(int axis) const;
  JetMatrix truncated(int order) const;

 private:
  int rows_;
  int cols_;
  std::vector<Jet> entries_;
};

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator+(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator-(const JetMatrix& a, const JetMatrix& b);

/// Inverse with jet entries: M * inverse(M) equals the identity jet matrix
/// to the full order. The value part is inverted directly and the result is
/// refined order by order with Newton steps N <- N (2I - M N).
/// Throws SingularityError (carrying the smallest singular value) when the
/// value part is numerically singular.
JetMatrix inverse(const JetMatrix& m);

}  // namespace gammaforge
