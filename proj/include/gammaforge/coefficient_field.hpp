#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "gammaforge/expr.hpp"
#include "gammaforge/jet_matrix.hpp"

namespace gammaforge {

/// Smooth coefficient data given as parsed expressions in chart coordinates.
///
/// Scalar fields hold one expression, vector fields `dim` expressions and
/// symmetric-matrix fields the upper triangle (row-major, i <= j); the lower
/// triangle is mirrored on evaluation.
class CoefficientField {
 public:
  enum class Shape { Scalar, Vector, SymmetricMatrix };

  CoefficientField() = default;

  static CoefficientField scalar(int dim, const std::string& source);
  static CoefficientField vector(int dim, const std::vector<std::string>& sources);
  /// `rows` is a full dim x dim table of sources; entries below the diagonal are ignored.
  static CoefficientField symmetric(int dim, const std::vector<std::vector<std::string>>& rows);
  /// Vector field with an arbitrary number of components (maps into another chart).
  static CoefficientField map(int dim, const std::vector<std::string>& sources);

  int dim() const { return dim_; }
  Shape shape() const { return shape_; }
  std::size_t component_count() const { return exprs_.size(); }
  bool empty() const { return exprs_.empty(); }

  const Expr& component(std::size_t i) const { return *exprs_.at(i); }
  /// Upper-triangle entry (i, j) of a symmetric field; (j, i) is accepted too.
  const Expr& entry(int i, int j) const;
  const std::string& source(std::size_t i) const { return sources_.at(i); }
  const std::string& entry_source(int i, int j) const;

  double scalar_value(std::span<const double> x) const;
  Eigen::VectorXd vector_value(std::span<const double> x) const;
  Eigen::MatrixXd matrix_value(std::span<const double> x) const;

  Jet scalar_jet(std::span<const double> x, int order) const;
  std::vector<Jet> vector_jets(std::span<const double> x, int order) const;
  JetMatrix matrix_jets(std::span<const double> x, int order) const;

 private:
  int dim_ = 0;
  Shape shape_ = Shape::Scalar;
  std::vector<ExprPtr> exprs_;
  std::vector<std::string> sources_;
};

}  // namespace gammaforge
