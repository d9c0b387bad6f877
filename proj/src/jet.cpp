#include "gammaforge/jet.hpp"

#include <cmath>
#include <string>

#include "gammaforge/errors.hpp"

namespace gammaforge {

Jet::Jet(int dim, int order, std::vector<double> base_point)
    : base_(std::move(base_point)) {
  if (order < 0 || order > kMaxJetOrder)
    throw ShapeError("jet order " + std::to_string(order) + " outside [0, " + std::to_string(kMaxJetOrder) + "]");
  if (static_cast<int>(base_.size()) != dim) throw ShapeError("base point length differs from jet dimension");
  table_ = MultiIndexTable::get(dim, order);
  derivs_.assign(table_->size(), 0.0);
}

Jet::Jet(std::shared_ptr<const MultiIndexTable> table, std::vector<double> base)
    : table_(std::move(table)), base_(std::move(base)), derivs_(table_->size(), 0.0) {}

Jet Jet::constant(double value, int order, std::vector<double> base_point) {
  const int dim = static_cast<int>(base_point.size());
  Jet j(dim, order, std::move(base_point));
  j.derivs_[0] = value;
  return j;
}

Jet Jet::coordinate(int axis, int order, std::vector<double> base_point) {
  const int dim = static_cast<int>(base_point.size());
  if (axis < 0 || axis >= dim) throw ShapeError("coordinate axis out of range");
  Jet j(dim, order, std::move(base_point));
  j.derivs_[0] = j.base_[axis];
  if (order >= 1) j.derivs_[1 + axis] = 1.0;  // degree-1 block is e_1, ..., e_n
  return j;
}

double Jet::d(int i) const {
  if (order() < 1) throw ShapeError("first derivative requested from an order-0 jet");
  return derivs_[table_->shifted(0, i)];
}

double Jet::d(int i, int j) const {
  if (order() < 2) throw ShapeError("second derivative requested from a jet of order < 2");
  return derivs_[table_->shifted(table_->shifted(0, i), j)];
}

double Jet::d(int i, int j, int k) const {
  if (order() < 3) throw ShapeError("third derivative requested from a jet of order < 3");
  return derivs_[table_->shifted(table_->shifted(table_->shifted(0, i), j), k)];
}

double Jet::operator[](std::span<const int> alpha) const {
  const long idx = table_->index_of(alpha);
  if (idx < 0) throw ShapeError("multi-index exceeds jet order");
  return derivs_[idx];
}

double& Jet::at(std::span<const int> alpha) {
  const long idx = table_->index_of(alpha);
  if (idx < 0) throw ShapeError("multi-index exceeds jet order");
  return derivs_[idx];
}

Jet Jet::derivative(int axis) const {
  if (order() < 1) throw ShapeError("cannot differentiate an order-0 jet");
  if (axis < 0 || axis >= dim()) throw ShapeError("derivative axis out of range");
  Jet out(MultiIndexTable::get(dim(), order() - 1), base_);
  for (std::size_t i = 0; i < out.derivs_.size(); ++i) out.derivs_[i] = derivs_[table_->shifted(i, axis)];
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) throw ShapeError("cannot raise jet order by truncation");
  if (new_order == order()) return *this;
  Jet out(MultiIndexTable::get(dim(), new_order), base_);
  std::copy(derivs_.begin(), derivs_.begin() + static_cast<long>(out.derivs_.size()), out.derivs_.begin());
  return out;
}

bool Jet::same_shape(const Jet& other) const {
  return table_ == other.table_ && base_ == other.base_;
}

void Jet::require_same_shape(const Jet& other, const char* op) const {
  if (!same_shape(other))
    throw ShapeError(std::string("jet ") + op + ": operands differ in dimension, order or base point");
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_shape(rhs, "add");
  for (std::size_t i = 0; i < derivs_.size(); ++i) derivs_[i] += rhs.derivs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_shape(rhs, "subtract");
  for (std::size_t i = 0; i < derivs_.size(); ++i) derivs_[i] -= rhs.derivs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : derivs_) v *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  derivs_[0] += s;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  out *= -1.0;
  return out;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  if (!a.same_shape(b)) throw ShapeError("jet multiply: operands differ in dimension, order or base point");
  Jet out = Jet::constant(0.0, a.order(), a.base_point());
  auto o = out.derivs();
  auto x = a.derivs();
  auto y = b.derivs();
  for (const auto& t : a.table().product_terms()) o[t.out] += t.binomial * x[t.left] * y[t.right];
  return out;
}

Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a += -s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator/(const Jet& a, const Jet& b) { return a * compose(ScalarFunction::recip(), b); }
Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
Jet operator/(double s, const Jet& a) { return compose(ScalarFunction::recip(), a) *= s; }

const char* ScalarFunction::name() const {
  switch (kind) {
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Exp: return "exp";
    case Kind::Log: return "log";
    case Kind::Sqrt: return "sqrt";
    case Kind::Tanh: return "tanh";
    case Kind::PowConst: return "pow";
    case Kind::Recip: return "recip";
  }
  return "?";
}

namespace {

bool is_integer(double p) { return std::floor(p) == p; }

// Derivatives of x -> x^p: p (p-1) ... (p-k+1) x^(p-k).
std::vector<double> power_derivatives(double x, double p, int order) {
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  double falling = 1.0;
  for (int k = 0; k <= order; ++k) {
    out[k] = (falling == 0.0) ? 0.0 : falling * std::pow(x, p - k);
    falling *= (p - k);
  }
  return out;
}

}  // namespace

std::vector<double> ScalarFunction::derivatives(double x, int order) const {
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  switch (kind) {
    case Kind::Sin:
    case Kind::Cos: {
      const double s = std::sin(x), c = std::cos(x);
      // sin: s, c, -s, -c, ...   cos: c, -s, -c, s, ...
      const double cycle_sin[4] = {s, c, -s, -c};
      const int shift = (kind == Kind::Sin) ? 0 : 1;
      for (int k = 0; k <= order; ++k) out[k] = cycle_sin[(k + shift) % 4];
      return out;
    }
    case Kind::Exp: {
      const double e = std::exp(x);
      for (double& v : out) v = e;
      return out;
    }
    case Kind::Log: {
      if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
      out[0] = std::log(x);
      double fact = 1.0;  // (k-1)!
      for (int k = 1; k <= order; ++k) {
        out[k] = ((k % 2 == 1) ? 1.0 : -1.0) * fact / std::pow(x, k);
        fact *= k;
      }
      return out;
    }
    case Kind::Sqrt: {
      if (x < 0.0 || (x == 0.0 && order > 0)) throw DomainError("sqrt of value " + std::to_string(x));
      if (order == 0) return {std::sqrt(x)};
      return power_derivatives(x, 0.5, order);
    }
    case Kind::Tanh: {
      const double t = std::tanh(x);
      const double u = 1.0 - t * t;
      const double all[5] = {t, u, -2.0 * t * u, -2.0 * u * (1.0 - 3.0 * t * t), 8.0 * t * u * (2.0 - 3.0 * t * t)};
      if (order > 4) throw DomainError("tanh derivatives are tabulated to order 4");
      for (int k = 0; k <= order; ++k) out[k] = all[k];
      return out;
    }
    case Kind::PowConst: {
      if (is_integer(exponent)) {
        if (exponent < 0 && x == 0.0) throw DomainError("negative power of zero");
      } else if (x < 0.0 || (x == 0.0 && exponent < order)) {
        throw DomainError("non-integer power of value " + std::to_string(x));
      }
      return power_derivatives(x, exponent, order);
    }
    case Kind::Recip: {
      if (x == 0.0) throw DomainError("reciprocal of zero");
      return power_derivatives(x, -1.0, order);
    }
  }
  return out;
}

Jet compose(const ScalarFunction& phi, const Jet& f) {
  // phi(f) = sum_k phi^(k)(f0) / k! (f - f0)^k, exact because (f - f0) has zero value part.
  const int order = f.order();
  const auto dphi = phi.derivatives(f.value(), order);
  Jet h = f;
  h.derivs()[0] = 0.0;
  Jet out = Jet::constant(dphi[0], order, f.base_point());
  Jet power = Jet::constant(1.0, order, f.base_point());
  double factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    power = power * h;
    factorial *= k;
    const double c = dphi[k] / factorial;
    auto o = out.derivs();
    auto p = power.derivs();
    for (std::size_t i = 1; i < o.size(); ++i) o[i] += c * p[i];
  }
  return out;
}

Jet sin(const Jet& f) { return compose(ScalarFunction::sin(), f); }
Jet cos(const Jet& f) { return compose(ScalarFunction::cos(), f); }
Jet exp(const Jet& f) { return compose(ScalarFunction::exp(), f); }
Jet log(const Jet& f) { return compose(ScalarFunction::log(), f); }
Jet sqrt(const Jet& f) { return compose(ScalarFunction::sqrt(), f); }
Jet tanh(const Jet& f) { return compose(ScalarFunction::tanh(), f); }
Jet pow(const Jet& f, double p) { return compose(ScalarFunction::pow(p), f); }

Jet pow(const Jet& f, int p) {
  Jet base = p < 0 ? compose(ScalarFunction::recip(), f) : f;
  unsigned n = static_cast<unsigned>(p < 0 ? -p : p);
  Jet out = Jet::constant(1.0, f.order(), f.base_point());
  while (n) {
    if (n & 1u) out = out * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return out;
}

Jet affine_probe(std::span<const double> point, std::span<const double> gradient, int order) {
  if (point.size() != gradient.size()) throw ShapeError("probe gradient length differs from point dimension");
  Jet out(static_cast<int>(point.size()), order, std::vector<double>(point.begin(), point.end()));
  if (order >= 1)
    for (std::size_t i = 0; i < gradient.size(); ++i) out.derivs()[1 + i] = gradient[i];
  return out;
}

}  // namespace gammaforge
