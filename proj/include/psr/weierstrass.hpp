#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psr/polynomial.hpp"

namespace psr {

/// y^2 z - 4x^3 + a x z^2 + b z^3, with a and b taken exactly from their
/// double values.
inline HomogeneousPolynomial weierstrass_polynomial(double a, double b) {
  TermMap t;
  t[{0, 2, 1}] = 1;
  t[{3, 0, 0}] = -4;
  t[{1, 0, 2}] = Rational(a);
  t[{0, 0, 3}] = Rational(b);
  return HomogeneousPolynomial(3, 3, t);
}

/// y^2 z - x^3 + x z^2 + R x^2 z.
inline HomogeneousPolynomial r_form_polynomial(double r) {
  TermMap t;
  t[{0, 2, 1}] = 1;
  t[{3, 0, 0}] = -1;
  t[{1, 0, 2}] = 1;
  t[{2, 0, 1}] = Rational(r);
  return HomogeneousPolynomial(3, 3, t);
}

inline double weierstrass_discriminant(double a, double b) { return a * a * a - 27.0 * b * b; }

namespace detail {

inline bool discriminant_is_zero(double a, double b) {
  const double delta = weierstrass_discriminant(a, b);
  return std::abs(delta) <= 1e-12 * std::max(std::abs(a * a * a), 27.0 * b * b);
}

inline double polish_cubic_root(double a, double b, double r) {
  for (int it = 0; it < 3; ++it) {
    const double f = 4.0 * r * r * r - a * r - b;
    const double df = 12.0 * r * r - a;
    if (df == 0.0) break;
    const double next = r - f / df;
    if (std::abs(4.0 * next * next * next - a * next - b) >= std::abs(f)) break;
    r = next;
  }
  return r;
}

}  // namespace detail

/// Real roots of 4x^3 - a x - b in ascending order: trigonometric form for
/// three real roots, Cardano for one, each followed by Newton polishing.
inline std::vector<double> depressed_cubic_roots(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) fail(ErrorCode::invalid_argument, "coefficients must be finite");
  if (detail::discriminant_is_zero(a, b))
    fail(ErrorCode::degenerate_discriminant, "a^3 - 27 b^2 vanishes; roots are not distinct");
  const double delta = weierstrass_discriminant(a, b);
  std::vector<double> roots;
  if (delta > 0.0) {
    // a > 0 here
    const double m = std::sqrt(a / 3.0);  // 2 sqrt(a/12)
    const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
  } else {
    // x^3 + p x + q with p = -a/4, q = -b/4
    const double p = -a / 4.0;
    const double q = -b / 4.0;
    const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u = q >= 0.0 ? -std::cbrt(q / 2.0 + s) : std::cbrt(-q / 2.0 + s);
    roots.push_back(u == 0.0 ? 0.0 : u - p / (3.0 * u));
  }
  for (double& r : roots) r = detail::polish_cubic_root(a, b, r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct WeierstrassForm {
  double a = 0.0;
  double b = 0.0;
  double discriminant = 0.0;
  std::optional<double> j;
  std::vector<double> roots;  // ascending

  // labels with x2 < x3 < x1 when there are three roots
  double x2() const { return roots.at(0); }
  double x3() const { return roots.at(1); }
  double x1() const { return roots.at(2); }
};

inline WeierstrassForm weierstrass_form(double a, double b) {
  WeierstrassForm w;
  w.a = a;
  w.b = b;
  w.discriminant = weierstrass_discriminant(a, b);
  if (!detail::discriminant_is_zero(a, b)) w.j = a * a * a / w.discriminant;
  w.roots = depressed_cubic_roots(a, b);
  return w;
}

struct WeierstrassNormalization {
  double b_tilde = 0.0;
  Mat map;      // diag(1, (3/a)^{1/4}, sqrt(a/3)); h^{(a,b)} = h^{(3, b_tilde)} o map
  Mat inverse;
};

inline WeierstrassNormalization weierstrass_normalize(double a, double b) {
  if (!(weierstrass_discriminant(a, b) > 0.0) || detail::discriminant_is_zero(a, b))
    fail(ErrorCode::non_positive_discriminant, "normalization needs a^3 - 27 b^2 > 0");
  WeierstrassNormalization n;
  n.b_tilde = std::pow(3.0 / a, 1.5) * b;
  n.map = Mat::Zero(3, 3);
  n.map(0, 0) = 1.0;
  n.map(1, 1) = std::pow(3.0 / a, 0.25);
  n.map(2, 2) = std::sqrt(a / 3.0);
  n.inverse = n.map.inverse();
  return n;
}

/// One strict inequality lhs(point) op rhs, with lhs a homogeneous
/// polynomial written in x, y, z.
struct Inequality {
  std::string lhs;
  std::string op;  // "<" or ">"
  double rhs = 0.0;

  std::string to_string() const {
    std::ostringstream os;
    os.precision(15);
    os << lhs << ' ' << op << ' ' << rhs;
    return os.str();
  }
};

struct ComponentReport {
  std::vector<Inequality> predicate;  // together with h = 1
  Vec sample;
  bool closed = false;
};

struct WeierstrassClassification {
  WeierstrassForm form;
  int connected_components = 0;  // of {h = 1}
  bool has_psr_component = false;
  std::optional<ComponentReport> psr_component;
};

inline WeierstrassClassification classify_weierstrass(double a, double b) {
  WeierstrassClassification c;
  c.form = weierstrass_form(a, b);
  if (c.form.discriminant < 0.0) {
    c.connected_components = 1;
    return c;
  }
  c.connected_components = 2;
  c.has_psr_component = true;
  const auto norm = weierstrass_normalize(a, b);
  // local maximum of 4x^3 - 3x - b_tilde sits at x = -1/2 with value 1 - b_tilde
  Vec seed(3);
  seed << 0.5, 0.0, -1.0;
  seed *= std::cbrt(1.0 / (1.0 - norm.b_tilde));
  ComponentReport comp;
  comp.sample = norm.inverse * seed;
  comp.predicate.push_back({"z", "<", 0.0});
  if (a == 3.0) {
    comp.predicate.push_back({"2*x - z", ">", 0.0});
  } else {
    // 2x' > z' with (x', z') = (x, sqrt(a/3) z)
    std::ostringstream lhs;
    lhs.precision(15);
    lhs << "2*x - " << std::sqrt(a / 3.0) << "*z";
    comp.predicate.push_back({lhs.str(), ">", 0.0});
  }
  c.psr_component = comp;
  return c;
}

/// Reduction of h^{(3,b)}, |b| < 1, to y^2 z - x^3 + x z^2 + R x^2 z.
/// Factors: S rescales to the companion form, `shear` sends x -> x + c z,
/// `scale2` rescales y and z; h_R = h^{(3,b)} o S o shear o scale2.
struct RFormReduction {
  double b = 0.0;
  double c = 0.0;
  double R = 0.0;
  double residual = 0.0;  // |c^3 - c - 2b/3^{3/2}|
  Mat S, shear, scale2;
  Mat composed;  // S * shear * scale2
  Mat inverse;   // maps points of {h^{(3,b)} = 1} to points of {h_R = 1}

  Vec map(const Vec& p) const { return inverse * p; }
  HomogeneousPolynomial reduced() const { return r_form_polynomial(R); }
};

inline RFormReduction reduce_to_R_form(double b) {
  if (!(std::abs(b) < 1.0)) fail(ErrorCode::out_of_range, "R-form reduction needs |b| < 1");
  const double target = 2.0 * b / std::pow(3.0, 1.5);
  const double edge = 1.0 / std::sqrt(3.0);
  // c^3 - c decreases on (-edge, edge) from 2/3^{3/2} to -2/3^{3/2}
  double lo = -edge, hi = edge, c = 0.0;
  auto f = [&](double v) { return v * v * v - v - target; };
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double fc = f(c);
    if (std::abs(fc) < 1e-15) {
      converged = true;
      break;
    }
    if (fc > 0.0)
      lo = c;
    else
      hi = c;
    const double df = 3.0 * c * c - 1.0;
    double next = c - fc / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - c) <= 1e-17 + 1e-16 * std::abs(c)) {
      c = next;
      converged = true;
      break;
    }
    c = next;
  }
  RFormReduction r;
  r.b = b;
  r.c = c;
  r.residual = std::abs(f(c));
  if (!converged && r.residual >= 1e-12) fail(ErrorCode::no_convergence, "Newton iteration for c did not converge");
  const double w = 1.0 - 3.0 * c * c;
  r.R = -3.0 * c / std::sqrt(w);
  const double gamma = std::pow(4.0, 1.0 / 6.0) / std::sqrt(3.0);
  r.S = Mat::Zero(3, 3);
  r.S(0, 0) = std::pow(4.0, -1.0 / 3.0);
  r.S(1, 1) = 1.0 / std::sqrt(gamma);
  r.S(2, 2) = gamma;
  r.shear = Mat::Identity(3, 3);
  r.shear(0, 2) = c;
  r.scale2 = Mat::Zero(3, 3);
  r.scale2(0, 0) = 1.0;
  r.scale2(1, 1) = std::pow(w, 0.25);
  r.scale2(2, 2) = 1.0 / std::sqrt(w);
  r.composed = r.S * r.shear * r.scale2;
  r.inverse = r.composed.inverse();
  return r;
}

/// Negative root z of y^2 z - x^3 + x z^2 + R x^2 z = 1 for x > 0.
inline double graph_z(double x, double y, double R) {
  if (!(x > 0.0)) fail(ErrorCode::non_positive_x, "graph_z needs x > 0");
  const double w = y * y + R * x * x;
  const double c = 4.0 * x * x * x * x + 4.0 * x;
  const double root = std::sqrt(w * w + c);
  // w + root computed without cancellation when w < 0
  const double sum = w >= 0.0 ? w + root : c / (root - w);
  return -sum / (2.0 * x);
}

/// Induced metric of {h_R = 1} in the coordinates x = s, y = s t, together
/// with the pieces of the lower-bound argument for completeness.
struct StMetric {
  double E = 0.0, F = 0.0, G = 0.0;
  double A = 0.0;
  double square_E = 0.0, square_F = 0.0, square_G = 0.0;  // completed square (PSD)
  double bound_E = 0.0;  // 1 / s^2
  double bound_G = 0.0;  // s^3 (u + sqrt(u^2 + 1)), u = t^2 + R
  double residual_E = 0.0;
  double residual_G = 0.0;

  /// t-integrand of the comparison metric, sqrt(u + sqrt(u^2 + 1))
  static double mu_integrand(double t, double R) {
    const double u = t * t + R;
    return std::sqrt(u + std::sqrt(u * u + 1.0));
  }
};

inline StMetric weierstrass_st_metric(double s, double t, double R) {
  if (!(s > 0.0)) fail(ErrorCode::non_positive_s, "s must be positive");
  StMetric m;
  const double u = t * t + R;
  const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2, s5 = s4 * s, s6 = s3 * s3, s8 = s4 * s4;
  m.A = s4 * u * u + 4.0 * s4 + 4.0 * s;
  const double sA = s * m.A;
  const double sqrtA = std::sqrt(m.A);
  m.E = (24.0 * s3 + 6.0 + 6.0 * s3 * u * u) / sA;
  m.F = 6.0 * s4 * t * u / sA;
  const double t2 = t * t, t4 = t2 * t2, t6 = t4 * t2;
  m.G = (4.0 * s8 * R + s8 * R * R * R + 4.0 * R * s5 + 12.0 * s8 * t2 + s8 * t6 + 12.0 * s5 * t2 +
         3.0 * R * R * s8 * t2 + 3.0 * R * s8 * t4 + (s6 * R * R + 2.0 * s6 * t2 * R + s6 * t4 + 4.0 * s6 + 4.0 * s3) * sqrtA) /
        sA;
  m.square_E = 4.5 * s3 * u * u / sA;
  m.square_F = 6.0 * s4 * t * u / sA;
  m.square_G = 8.0 * s5 * t2 / sA;
  m.bound_E = 1.0 / s2;
  m.bound_G = s3 * (u + std::sqrt(u * u + 1.0));
  m.residual_E = (m.E - m.square_E) - m.bound_E;
  m.residual_G = (m.G - m.square_G) - m.bound_G;
  return m;
}

}  // namespace psr
