#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

#include "psr/error.hpp"

namespace psr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense rank-3 array, n x n x n, row-major in (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n_ + j) * n_ + k];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array, n^4 entries.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

inline void require_dim(const Vec& x, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(x.size()) != n)
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": expected " + std::to_string(n) +
                                            " coordinates, got " + std::to_string(x.size()));
}

/// Orthonormal basis of the Euclidean orthogonal complement of `normal`,
/// taken from the columns of the Householder reflector that sends `normal`
/// to a multiple of the coordinate axis where it is largest.
inline Mat householder_complement(const Vec& normal) {
  const Eigen::Index n = normal.size();
  Eigen::Index k = 0;
  normal.cwiseAbs().maxCoeff(&k);
  const double norm = normal.norm();
  Vec u = normal;
  u(k) += (normal(k) >= 0.0 ? norm : -norm);
  const double uu = u.squaredNorm();
  Mat q = Mat::Identity(n, n);
  if (uu > 0.0) q -= (2.0 / uu) * u * u.transpose();
  Mat basis(n, n - 1);
  for (Eigen::Index c = 0, col = 0; c < n; ++c) {
    if (c == k) continue;
    basis.col(col++) = q.col(c);
  }
  return basis;
}

/// T'(i,j,k) = sum T(a,b,c) A(a,i) A(b,j) A(c,k): the tensor pulled back
/// through the linear map A, one slot at a time.
inline Tensor3 transform_slots(const Tensor3& t, const Mat& a) {
  const std::size_t n = t.dim();
  Tensor3 cur = t;
  for (int slot = 0; slot < 3; ++slot) {
    Tensor3 next(n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r) {
          const double v = cur(p, q, r);
          if (v == 0.0) continue;
          // contract the first slot and rotate it to the back
          for (std::size_t i = 0; i < n; ++i)
            next(q, r, i) += v * a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i));
        }
    cur = std::move(next);
  }
  return cur;
}

inline Tensor4 transform_slots(const Tensor4& t, const Mat& a) {
  const std::size_t n = t.dim();
  Tensor4 cur = t;
  for (int slot = 0; slot < 4; ++slot) {
    Tensor4 next(n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            const double v = cur(p, q, r, s);
            if (v == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i)
              next(q, r, s, i) += v * a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i));
          }
    cur = std::move(next);
  }
  return cur;
}

inline bool is_finite(const Vec& v) { return v.allFinite(); }

}  // namespace psr
