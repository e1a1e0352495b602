#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

#include "psr/linalg.hpp"

namespace psr {

/// Inertia of a symmetric matrix. An eigenvalue counts as zero when
/// |lambda| <= tolerance * max(1, |M|_2); `threshold` is that product.
struct SignatureResult {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  std::vector<double> eigenvalues;  // ascending
  double tolerance = 0.0;
  double threshold = 0.0;

  bool positive_definite() const { return n_minus == 0 && n_zero == 0 && n_plus > 0; }
  bool matches(int p, int m, int z) const { return n_plus == p && n_minus == m && n_zero == z; }
  std::string triple() const {
    return "(" + std::to_string(n_plus) + "," + std::to_string(n_minus) + "," + std::to_string(n_zero) + ")";
  }
};

inline constexpr double kSignatureTolerance = 1e-9;

inline SignatureResult signature(const Mat& m, double tol = kSignatureTolerance) {
  if (m.rows() != m.cols()) fail(ErrorCode::dimension_mismatch, "signature needs a square matrix");
  if (!(tol >= 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be non-negative");
  if (!m.allFinite()) fail(ErrorCode::domain_error, "matrix has non-finite entries");
  const double asym = m.rows() ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
  const double size = m.rows() ? m.cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-12 * std::max(1.0, size)) fail(ErrorCode::not_symmetric, "matrix is not symmetric");

  SignatureResult r;
  r.tolerance = tol;
  if (m.rows() == 0) return r;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double norm2 = ev.cwiseAbs().maxCoeff();
  r.threshold = tol * std::max(1.0, norm2);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    r.eigenvalues.push_back(ev(i));
    if (std::abs(ev(i)) <= r.threshold)
      ++r.n_zero;
    else if (ev(i) > 0)
      ++r.n_plus;
    else
      ++r.n_minus;
  }
  return r;
}

}  // namespace psr
