#pragma once

#include <cmath>
#include <string>

#include "psr/homogeneous_function.hpp"
#include "psr/linalg.hpp"

namespace psr {

// Conventions. The Kähler potential is K = -log h(x) on R^m + iU, so every
// tensor depends on x = Im z only.
//   g_{mu nu}          = (-h_{mu nu}/h + h_mu h_nu / h^2) / 4
//   Gamma^rho_{sigma mu} = i * C(rho, sigma, mu)         (C stored)
//   R^rho_{sigma mu nu}  = R(rho, sigma, mu, nu)          (real; R = dC/dx^nu / 2)
//   Ric_{mu nu}        = sum_rho R(rho, mu, rho, nu)
//   scal               = g^{mu nu} Ric_{mu nu}
// Index raising on the Hessian side uses the ordinary inverse of d^2h.

/// Evaluation point of the curvature stack for a homogeneous h of degree D
/// in m variables.
class RMapContext {
 public:
  RMapContext(HomogeneousFunction h, Vec x) : h_(std::move(h)), x_(std::move(x)) {
    require_dim(x_, h_.n_vars(), "RMapContext point");
    jet_ = h_.jet(x_, 4);
    if (!(jet_.value > 0.0)) fail(ErrorCode::non_positive_h, "h must be positive at the point");
    const double det = jet_.hess.determinant();
    const double scale = std::pow(std::max(1.0, jet_.hess.cwiseAbs().maxCoeff()), static_cast<double>(dim()));
    if (!(std::abs(det) > 1e-12 * scale)) fail(ErrorCode::degenerate_hessian, "Hessian of h is singular");
    hess_inv_ = jet_.hess.inverse();
  }

  const HomogeneousFunction& function() const { return h_; }
  const Vec& point() const { return x_; }
  const DerivativeJet& jet() const { return jet_; }
  const Mat& hess_inv() const { return hess_inv_; }
  double degree() const { return h_.degree(); }
  std::size_t dim() const { return h_.n_vars(); }
  double h() const { return jet_.value; }

  RMapContext at(const Vec& y) const { return RMapContext(h_, y); }

 private:
  HomogeneousFunction h_;
  Vec x_;
  DerivativeJet jet_;
  Mat hess_inv_;
};

struct RMapMetric {
  Mat g;
  Mat g_inv_closed;
  Mat g_inv_numeric;
};

inline Mat rmap_metric_only(const RMapContext& c) {
  const auto& j = c.jet();
  const double h = j.value;
  return (-j.hess / h + j.grad * j.grad.transpose() / (h * h)) / 4.0;
}

inline RMapMetric rmap_metric(const RMapContext& c) {
  RMapMetric r;
  r.g = rmap_metric_only(c);
  const Vec& x = c.point();
  r.g_inv_closed = -4.0 * c.h() * c.hess_inv() + (4.0 / (c.degree() - 1.0)) * x * x.transpose();
  r.g_inv_numeric = r.g.inverse();
  return r;
}

namespace detail {

// V(a, b, c) = sum_k Hinv(a, k) T(k, b, c)
inline Tensor3 raise_first(const Mat& hinv, const Tensor3& t) {
  const std::size_t m = t.dim();
  Tensor3 v(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t k = 0; k < m; ++k) {
      const double w = hinv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k));
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t cc = 0; cc < m; ++cc) v(a, b, cc) += w * t(k, b, cc);
    }
  return v;
}

inline double at(const Mat& m, std::size_t i, std::size_t j) {
  return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}
inline double at(const Vec& v, std::size_t i) { return v(static_cast<Eigen::Index>(i)); }

}  // namespace detail

inline Tensor3 christoffel(const RMapContext& c) {
  const auto& j = c.jet();
  const std::size_t m = c.dim();
  const double h = j.value;
  const double k = 1.0 / (c.degree() - 1.0);
  const Tensor3 v = detail::raise_first(c.hess_inv(), j.third);
  Tensor3 out(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t u = 0; u < m; ++u) {
        double bracket = h * v(r, u, s) + k * detail::at(c.point(), r) * detail::at(j.hess, u, s);
        if (r == u) bracket -= detail::at(j.grad, s);
        if (r == s) bracket -= detail::at(j.grad, u);
        out(r, s, u) = -bracket / (2.0 * h);
      }
  return out;
}

inline Tensor4 riemann(const RMapContext& c) {
  const auto& j = c.jet();
  const std::size_t m = c.dim();
  const double h = j.value;
  const double k = 1.0 / (c.degree() - 1.0);
  const Tensor3 v = detail::raise_first(c.hess_inv(), j.third);
  Tensor4 out(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t u = 0; u < m; ++u)
        for (std::size_t n = 0; n < m; ++n) {
          double hq = 0.0, vv = 0.0;
          for (std::size_t a = 0; a < m; ++a) {
            hq += detail::at(c.hess_inv(), r, a) * j.fourth(a, u, s, n);
            vv += v(r, n, a) * v(a, u, s);
          }
          const double hs = detail::at(j.grad, s), hu = detail::at(j.grad, u), hn = detail::at(j.grad, n);
          double b = h * h * (hq - vv);
          b += k * detail::at(c.point(), r) * (h * j.third(u, s, n) - detail::at(j.hess, u, s) * hn);
          if (r == s) b += hu * hn - h * detail::at(j.hess, u, n);
          if (r == u) b += hs * hn - h * detail::at(j.hess, s, n);
          if (r == n) b += h * k * detail::at(j.hess, u, s);
          out(r, s, u, n) = -b / (4.0 * h * h);
        }
  return out;
}

enum class RicciMethod { contraction, logdet };
enum class ScalMethod { theorem, corollary };

inline Mat ricci_from_riemann(const Tensor4& r) {
  const std::size_t m = r.dim();
  Mat ric = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t n = 0; n < m; ++n)
      for (std::size_t p = 0; p < m; ++p)
        ric(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(n)) += r(p, u, p, n);
  return ric;
}

/// Ric = -m g - (1/4) d^2 log d, with the jet of d = det d^2h exact for
/// polynomials and extrapolated differences otherwise.
inline Mat ricci_logdet(const RMapContext& c) {
  const DeterminantJet dj = determinant_jet(c.function(), c.point());
  const double d = dj.value;
  if (d == 0.0) fail(ErrorCode::degenerate_hessian, "det of the Hessian vanishes");
  const Mat logdet_hess = dj.hess / d - dj.grad * dj.grad.transpose() / (d * d);
  return -static_cast<double>(c.dim()) * rmap_metric_only(c) - 0.25 * logdet_hess;
}

inline Mat ricci(const RMapContext& c, RicciMethod method = RicciMethod::contraction) {
  if (method == RicciMethod::logdet) return ricci_logdet(c);
  return ricci_from_riemann(riemann(c));
}

inline double scal_constant(double m, double D) { return -m * m + (D - 2.0) / (D - 1.0) * m; }

inline double scalar_curvature(const RMapContext& c, ScalMethod method = ScalMethod::theorem) {
  const auto& j = c.jet();
  const std::size_t m = c.dim();
  const Mat& hi = c.hess_inv();
  const double h = j.value;
  double s = scal_constant(static_cast<double>(m), c.degree());
  if (method == ScalMethod::corollary) {
    const DeterminantJet dj = determinant_jet(c.function(), c.point());
    const double d = dj.value;
    if (d == 0.0) fail(ErrorCode::degenerate_hessian, "det of the Hessian vanishes");
    s += (h / d) * (hi.cwiseProduct(dj.hess)).sum();
    s -= (h / (d * d)) * dj.grad.dot(hi * dj.grad);
    return s;
  }
  const Tensor3 v = detail::raise_first(hi, j.third);
  // cubic term: Hinv^{ra} T_{nab} Hinv^{bk} Hinv^{mn} T_{krm} = sum V(r,n,b) V(b,r,m) Hinv(m,n)
  double cubic = 0.0, quartic = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t n = 0; n < m; ++n)
      for (std::size_t mu = 0; mu < m; ++mu) {
        const double hmn = detail::at(hi, mu, n);
        for (std::size_t b = 0; b < m; ++b) cubic += v(r, n, b) * v(b, r, mu) * hmn;
        for (std::size_t kk = 0; kk < m; ++kk)
          quartic += detail::at(hi, r, kk) * hmn * j.fourth(kk, r, mu, n);
      }
  return s - h * cubic + h * quartic;
}

/// Everything at one point, with the redundant routes cross-checked.
struct CurvatureBundle {
  Vec point;
  double h = 0.0;
  double d = 0.0;
  Mat g;
  Mat g_inv;          // closed form
  Mat g_inv_numeric;  // matrix inverse of g
  Tensor3 christoffel;
  Tensor4 riemann;
  Mat ricci_contraction;
  Mat ricci_logdet;
  double scal_theorem = 0.0;
  double scal_corollary = 0.0;
  double scal_from_ricci = 0.0;  // g^{mu nu} Ric_{mu nu} with the contraction Ricci

  double ricci_mismatch() const {
    const double scale = std::max(1.0, ricci_contraction.cwiseAbs().maxCoeff());
    return (ricci_contraction - ricci_logdet).cwiseAbs().maxCoeff() / scale;
  }
  double scal_mismatch() const { return std::abs(scal_theorem - scal_corollary); }
};

inline constexpr double kCrossCheckTolerance = 1e-8;

inline CurvatureBundle curvature_bundle(const RMapContext& c, bool cross_check = true,
                                        double tolerance = kCrossCheckTolerance) {
  CurvatureBundle b;
  b.point = c.point();
  b.h = c.h();
  b.d = c.jet().hess.determinant();
  const RMapMetric met = rmap_metric(c);
  b.g = met.g;
  b.g_inv = met.g_inv_closed;
  b.g_inv_numeric = met.g_inv_numeric;
  b.christoffel = christoffel(c);
  b.riemann = riemann(c);
  b.ricci_contraction = ricci_from_riemann(b.riemann);
  b.ricci_logdet = ricci_logdet(c);
  b.scal_theorem = scalar_curvature(c, ScalMethod::theorem);
  b.scal_corollary = scalar_curvature(c, ScalMethod::corollary);
  b.scal_from_ricci = (b.g_inv.cwiseProduct(b.ricci_contraction)).sum();
  if (cross_check) {
    if (!(b.ricci_mismatch() < tolerance))
      fail(ErrorCode::cross_check_failed, "Ricci routes disagree by " + std::to_string(b.ricci_mismatch()));
    if (!(b.scal_mismatch() < tolerance))
      fail(ErrorCode::cross_check_failed, "scalar curvature routes disagree by " + std::to_string(b.scal_mismatch()));
  }
  return b;
}

// --- finite-difference ladder (independent oracles) --------------------------

/// g = (1/4) d^2(-log h) by extrapolated central differences of the potential.
inline Mat metric_from_potential_fd(const HomogeneousFunction& h, const Vec& x, double step = 1e-3) {
  const auto j = finite_difference_jet([&h](const Vec& p) { return -std::log(h(p)); }, x, 2, step);
  return 0.25 * j.hess;
}

/// C^rho_{sigma mu} = -(1/2) g^{rho kappa} d_sigma g_{mu kappa}, derivative
/// of the closed-form metric by extrapolated central differences.
inline Tensor3 christoffel_fd(const RMapContext& c, double step = 1e-5) {
  const std::size_t m = c.dim();
  const double s = step * std::max(1.0, c.point().norm());
  const Mat ginv = rmap_metric_only(c).inverse();
  Tensor3 out(m);
  for (std::size_t sg = 0; sg < m; ++sg) {
    auto g_at = [&](double t) {
      Vec y = c.point();
      y(static_cast<Eigen::Index>(sg)) += t;
      return rmap_metric_only(c.at(y));
    };
    const Mat d1 = (g_at(s) - g_at(-s)) / (2 * s);
    const Mat d2 = (g_at(s / 2) - g_at(-s / 2)) / s;
    const Mat dg = (4.0 * d2 - d1) / 3.0;
    const Mat raised = ginv * dg;  // (rho, mu) since dg is symmetric
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t u = 0; u < m; ++u)
        out(r, sg, u) = -0.5 * raised(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(u));
  }
  return out;
}

/// R = (1/2) dC/dx^nu with the closed-form C differenced.
inline Tensor4 riemann_fd(const RMapContext& c, double step = 1e-5) {
  const std::size_t m = c.dim();
  const double s = step * std::max(1.0, c.point().norm());
  Tensor4 out(m);
  for (std::size_t n = 0; n < m; ++n) {
    auto c_at = [&](double t) {
      Vec y = c.point();
      y(static_cast<Eigen::Index>(n)) += t;
      return christoffel(c.at(y));
    };
    const Tensor3 p1 = c_at(s), m1 = c_at(-s), p2 = c_at(s / 2), m2 = c_at(-s / 2);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t sg = 0; sg < m; ++sg)
        for (std::size_t u = 0; u < m; ++u) {
          const double d1 = (p1(r, sg, u) - m1(r, sg, u)) / (2 * s);
          const double d2 = (p2(r, sg, u) - m2(r, sg, u)) / s;
          out(r, sg, u, n) = 0.5 * (4.0 * d2 - d1) / 3.0;
        }
  }
  return out;
}

}  // namespace psr
