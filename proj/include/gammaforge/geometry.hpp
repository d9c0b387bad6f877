#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gammaforge {

/// Christoffel symbols Gamma^k_ij at a point.
class ConnectionPoint {
 public:
  explicit ConnectionPoint(int n = 0) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  int dim() const { return n_; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }

  /// max |Gamma^k_ij - other^k_ij|
  double max_abs_difference(const ConnectionPoint& other) const;
  /// max |Gamma^k_ij - Gamma^k_ji|
  double max_asymmetry() const;

 private:
  std::size_t index(int k, int i, int j) const { return static_cast<std::size_t>((k * n_ + i) * n_ + j); }
  int n_;
  std::vector<double> data_;
};

/// Riemann tensor components R^l_ijk, defined by R(d_i, d_j) d_k = R^l_ijk d_l:
///   R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik.
class RiemannPoint {
 public:
  explicit RiemannPoint(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

  int dim() const { return n_; }
  double operator()(int l, int i, int j, int k) const { return data_[index(l, i, j, k)]; }
  double& operator()(int l, int i, int j, int k) { return data_[index(l, i, j, k)]; }

 private:
  std::size_t index(int l, int i, int j, int k) const {
    return static_cast<std::size_t>(((l * n_ + i) * n_ + j) * n_ + k);
  }
  int n_;
  std::vector<double> data_;
};

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace gammaforge
