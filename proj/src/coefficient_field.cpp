#include "gammaforge/coefficient_field.hpp"

#include "gammaforge/errors.hpp"

namespace gammaforge {

namespace {

std::size_t upper_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // rows 0..i-1 contribute n, n-1, ..., n-i+1 entries
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

}  // namespace

CoefficientField CoefficientField::scalar(int dim, const std::string& source) {
  CoefficientField f;
  f.dim_ = dim;
  f.shape_ = Shape::Scalar;
  f.exprs_.push_back(parse_expr(source, dim));
  f.sources_.push_back(source);
  return f;
}

CoefficientField CoefficientField::vector(int dim, const std::vector<std::string>& sources) {
  if (static_cast<int>(sources.size()) != dim)
    throw InputError("vector field needs " + std::to_string(dim) + " components, got " + std::to_string(sources.size()));
  CoefficientField f = map(dim, sources);
  f.shape_ = Shape::Vector;
  return f;
}

CoefficientField CoefficientField::map(int dim, const std::vector<std::string>& sources) {
  if (sources.empty()) throw InputError("map needs at least one component");
  CoefficientField f;
  f.dim_ = dim;
  f.shape_ = Shape::Vector;
  for (const auto& s : sources) {
    f.exprs_.push_back(parse_expr(s, dim));
    f.sources_.push_back(s);
  }
  return f;
}

CoefficientField CoefficientField::symmetric(int dim, const std::vector<std::vector<std::string>>& rows) {
  if (static_cast<int>(rows.size()) != dim) throw InputError("symmetric field needs " + std::to_string(dim) + " rows");
  CoefficientField f;
  f.dim_ = dim;
  f.shape_ = Shape::SymmetricMatrix;
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[i].size()) != dim)
      throw InputError("symmetric field row " + std::to_string(i) + " needs " + std::to_string(dim) + " entries");
    for (int j = i; j < dim; ++j) {
      f.exprs_.push_back(parse_expr(rows[i][j], dim));
      f.sources_.push_back(rows[i][j]);
    }
  }
  return f;
}

const Expr& CoefficientField::entry(int i, int j) const {
  if (shape_ != Shape::SymmetricMatrix) throw ShapeError("entry(i, j) on a non-matrix field");
  return *exprs_.at(upper_index(dim_, i, j));
}

const std::string& CoefficientField::entry_source(int i, int j) const {
  if (shape_ != Shape::SymmetricMatrix) throw ShapeError("entry_source(i, j) on a non-matrix field");
  return sources_.at(upper_index(dim_, i, j));
}

double CoefficientField::scalar_value(std::span<const double> x) const {
  if (shape_ != Shape::Scalar) throw ShapeError("scalar value of a non-scalar field");
  return evaluate(*exprs_[0], x);
}

Eigen::VectorXd CoefficientField::vector_value(std::span<const double> x) const {
  if (shape_ != Shape::Vector) throw ShapeError("vector value of a non-vector field");
  Eigen::VectorXd v(static_cast<Eigen::Index>(exprs_.size()));
  for (std::size_t i = 0; i < exprs_.size(); ++i) v(static_cast<Eigen::Index>(i)) = evaluate(*exprs_[i], x);
  return v;
}

Eigen::MatrixXd CoefficientField::matrix_value(std::span<const double> x) const {
  if (shape_ != Shape::SymmetricMatrix) throw ShapeError("matrix value of a non-matrix field");
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) m(i, j) = m(j, i) = evaluate(entry(i, j), x);
  return m;
}

Jet CoefficientField::scalar_jet(std::span<const double> x, int order) const {
  if (shape_ != Shape::Scalar) throw ShapeError("scalar jet of a non-scalar field");
  return eval_jet(*exprs_[0], x, order);
}

std::vector<Jet> CoefficientField::vector_jets(std::span<const double> x, int order) const {
  if (shape_ != Shape::Vector) throw ShapeError("vector jets of a non-vector field");
  std::vector<Jet> out;
  out.reserve(exprs_.size());
  for (const auto& e : exprs_) out.push_back(eval_jet(*e, x, order));
  return out;
}

JetMatrix CoefficientField::matrix_jets(std::span<const double> x, int order) const {
  if (shape_ != Shape::SymmetricMatrix) throw ShapeError("matrix jets of a non-matrix field");
  JetMatrix m(dim_, dim_, Jet(dim_, order, std::vector<double>(x.begin(), x.end())));
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) m(i, j) = m(j, i) = eval_jet(entry(i, j), x, order);
  return m;
}

}  // namespace gammaforge
