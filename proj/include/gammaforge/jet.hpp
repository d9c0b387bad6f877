#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gammaforge/multi_index.hpp"

namespace gammaforge {

inline constexpr int kMaxJetOrder = 4;

/// Truncated Taylor data of a smooth function at a point.
///
/// A jet of order K in n variables stores the partial derivatives
/// d^alpha f(x0) for every |alpha| <= K, densely, in the graded order of
/// `MultiIndexTable`. Entries are raw derivative values, not Taylor
/// coefficients, so products carry binomial factors.
///
/// Binary operations require identical dimension, order and base point and
/// throw `ShapeError` otherwise. Use `truncated` to bring operands to a
/// common order.
class Jet {
 public:
  /// Zero jet.
  Jet(int dim, int order, std::vector<double> base_point);

  static Jet constant(double value, int order, std::vector<double> base_point);
  /// Jet of the coordinate function x^axis (0-based axis).
  static Jet coordinate(int axis, int order, std::vector<double> base_point);

  int dim() const { return table_->dim(); }
  int order() const { return table_->order(); }
  std::size_t size() const { return derivs_.size(); }
  const std::vector<double>& base_point() const { return base_; }
  const MultiIndexTable& table() const { return *table_; }

  double value() const { return derivs_[0]; }
  /// d_i f, d_i d_j f, d_i d_j d_k f at the base point.
  double d(int i) const;
  double d(int i, int j) const;
  double d(int i, int j, int k) const;

  double operator[](std::span<const int> alpha) const;
  double& at(std::span<const int> alpha);

  std::span<const double> derivs() const { return derivs_; }
  std::span<double> derivs() { return derivs_; }

  /// Jet of d f / d x^axis, one order lower.
  Jet derivative(int axis) const;
  /// Same function, lower order.
  Jet truncated(int order) const;

  bool same_shape(const Jet& other) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator*=(double s);
  Jet& operator+=(double s);
  Jet operator-() const;

 private:
  Jet(std::shared_ptr<const MultiIndexTable> table, std::vector<double> base);
  void require_same_shape(const Jet& other, const char* op) const;

  std::shared_ptr<const MultiIndexTable> table_;
  std::vector<double> base_;
  std::vector<double> derivs_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

/// Smooth univariate functions that can be composed with a jet.
struct ScalarFunction {
  enum class Kind { Sin, Cos, Exp, Log, Sqrt, Tanh, PowConst, Recip };
  Kind kind;
  double exponent = 0.0;  // PowConst only

  static ScalarFunction sin() { return {Kind::Sin}; }
  static ScalarFunction cos() { return {Kind::Cos}; }
  static ScalarFunction exp() { return {Kind::Exp}; }
  static ScalarFunction log() { return {Kind::Log}; }
  static ScalarFunction sqrt() { return {Kind::Sqrt}; }
  static ScalarFunction tanh() { return {Kind::Tanh}; }
  static ScalarFunction pow(double p) { return {Kind::PowConst, p}; }
  static ScalarFunction recip() { return {Kind::Recip}; }

  /// phi(x), phi'(x), ..., phi^(order)(x). Throws DomainError outside the domain.
  std::vector<double> derivatives(double x, int order) const;
  const char* name() const;
};

/// Jet of phi o f, exact to the order of `f`.
Jet compose(const ScalarFunction& phi, const Jet& f);

Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet sqrt(const Jet& f);
Jet tanh(const Jet& f);
Jet pow(const Jet& f, double p);
Jet pow(const Jet& f, int p);

/// Jet of the affine function y -> sum_i gradient_i (y^i - x^i): value 0,
/// gradient `gradient`, all higher derivatives zero.
Jet affine_probe(std::span<const double> point, std::span<const double> gradient, int order);

}  // namespace gammaforge
