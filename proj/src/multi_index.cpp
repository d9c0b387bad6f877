#include "gammaforge/multi_index.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "gammaforge/errors.hpp"

namespace gammaforge {
namespace {

constexpr int kMaxDim = 9;
constexpr int kMaxOrder = 8;

std::uint64_t encode(std::span<const int> alpha, int base) {
  std::uint64_t key = 0;
  for (int a : alpha) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(a);
  return key;
}

// All exponent vectors of total degree `degree`, lexicographically descending.
void append_degree(int dim, int degree, std::vector<int>& out) {
  std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
  auto rec = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dim - 1) {
      alpha[axis] = remaining;
      out.insert(out.end(), alpha.begin(), alpha.end());
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      alpha[axis] = a;
      self(self, axis + 1, remaining - a);
    }
  };
  rec(rec, 0, degree);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::size_t MultiIndexTable::count(int dim, int order) {
  // C(dim + order, order)
  return static_cast<std::size_t>(binomial(dim + order, order) + 0.5);
}

std::shared_ptr<const MultiIndexTable> MultiIndexTable::get(int dim, int order) {
  if (dim < 1 || dim > kMaxDim) throw ShapeError("jet dimension must lie in [1, 9]");
  if (order < 0 || order > kMaxOrder) throw ShapeError("jet order must lie in [0, 8]");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot.reset(new MultiIndexTable(dim, order));
  return slot;
}

MultiIndexTable::MultiIndexTable(int dim, int order) : dim_(dim), order_(order) {
  for (int d = 0; d <= order; ++d) append_degree(dim, d, exponents_);
  size_ = exponents_.size() / static_cast<std::size_t>(dim);

  const int base = order + 1;
  degrees_.resize(size_);
  factorial_.resize(size_);
  lookup_.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto alpha = exponents(i);
    degrees_[i] = total_degree(alpha);
    double f = 1.0;
    for (int a : alpha)
      for (int k = 2; k <= a; ++k) f *= k;
    factorial_[i] = f;
    lookup_.emplace_back(encode(alpha, base), static_cast<long>(i));
  }
  std::sort(lookup_.begin(), lookup_.end());

  shift_.assign(size_ * static_cast<std::size_t>(dim), -1);
  std::vector<int> work(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < size_; ++i) {
    if (degrees_[i] == order) continue;
    auto alpha = exponents(i);
    for (int axis = 0; axis < dim; ++axis) {
      std::copy(alpha.begin(), alpha.end(), work.begin());
      ++work[axis];
      shift_[i * dim + axis] = index_of(work);
    }
  }

  // Enumerate beta <= alpha componentwise for every alpha.
  std::vector<int> beta(static_cast<std::size_t>(dim));
  std::vector<int> rest(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < size_; ++i) {
    auto alpha = exponents(i);
    std::fill(beta.begin(), beta.end(), 0);
    while (true) {
      double coeff = 1.0;
      for (int a = 0; a < dim; ++a) {
        coeff *= binomial(alpha[a], beta[a]);
        rest[a] = alpha[a] - beta[a];
      }
      product_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(index_of(beta)),
                          static_cast<std::uint16_t>(index_of(rest)), coeff});
      int axis = dim - 1;
      while (axis >= 0 && beta[axis] == alpha[axis]) {
        beta[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
      ++beta[axis];
    }
  }
}

long MultiIndexTable::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) throw ShapeError("multi-index length differs from jet dimension");
  for (int a : alpha)
    if (a < 0) throw ShapeError("multi-index entries must be non-negative");
  if (total_degree(alpha) > order_) return -1;
  const auto key = encode(alpha, order_ + 1);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(key, long{-1}));
  return (it != lookup_.end() && it->first == key) ? it->second : -1;
}

}  // namespace gammaforge
