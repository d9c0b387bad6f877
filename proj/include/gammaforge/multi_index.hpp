#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace gammaforge {

/// Exponent vector alpha of a partial derivative d^alpha.
using MultiIndex = std::vector<int>;

inline int total_degree(std::span<const int> alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

/// Dense enumeration of all multi-indices with |alpha| <= order in graded
/// lexicographic order: degree ascending, then lexicographically descending
/// exponents within a degree (x1^2, x1 x2, x2^2, ...).
///
/// The ordering is prefix-stable: the table of order k is the first
/// size(dim, k) entries of the table of any order K >= k. Tables are shared
/// and immutable; obtain them through `MultiIndexTable::get`.
class MultiIndexTable {
 public:
  struct ProductTerm {
    std::uint16_t out;
    std::uint16_t left;
    std::uint16_t right;
    double binomial;
  };

  static std::shared_ptr<const MultiIndexTable> get(int dim, int order);

  /// Number of multi-indices with |alpha| <= order, C(dim + order, order).
  static std::size_t count(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return size_; }

  std::span<const int> exponents(std::size_t idx) const {
    return {exponents_.data() + idx * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  int degree(std::size_t idx) const { return degrees_[idx]; }

  /// Position of `alpha`, or -1 when |alpha| > order.
  long index_of(std::span<const int> alpha) const;

  /// Index of alpha + e_axis, for every alpha of degree < order; -1 otherwise.
  long shifted(std::size_t idx, int axis) const { return shift_[idx * dim_ + axis]; }

  /// Generalized Leibniz terms: d^alpha(fg) = sum binom(alpha, beta) d^beta f d^(alpha-beta) g.
  const std::vector<ProductTerm>& product_terms() const { return product_; }

  /// alpha! for each entry.
  double factorial(std::size_t idx) const { return factorial_[idx]; }

 private:
  MultiIndexTable(int dim, int order);

  int dim_;
  int order_;
  std::size_t size_;
  std::vector<int> exponents_;
  std::vector<int> degrees_;
  std::vector<long> shift_;
  std::vector<ProductTerm> product_;
  std::vector<double> factorial_;
  std::vector<std::pair<std::uint64_t, long>> lookup_;  // sorted (key, index)
};

}  // namespace gammaforge
