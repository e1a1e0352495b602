#pragma once

#include <Eigen/Cholesky>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "psr/homogeneous_function.hpp"
#include "psr/hyperbolicity.hpp"
#include "psr/parallel.hpp"

namespace psr {

// ---------------------------------------------------------------------------
// Graph charts

/// The level set {h = 1} near a base point, written as a graph over all
/// coordinates except `axis`, the one with the largest |dh/dx^k|.
class SurfaceChart {
 public:
  SurfaceChart(HomogeneousFunction h, const Vec& base) : h_(std::move(h)), base_(base) {
    require_dim(base, h_.n_vars(), "SurfaceChart base point");
    const DerivativeJet j = h_.jet(base, 1);
    if (std::abs(j.value - 1.0) > 1e-9) fail(ErrorCode::domain_error, "chart base point is not on {h = 1}");
    j.grad.cwiseAbs().maxCoeff(&axis_);
    if (j.grad(axis_) == 0.0) fail(ErrorCode::gradient_vanishes, "dh vanishes at the chart base point");
  }

  SurfaceChart(HomogeneousFunction h, const Vec& base, Eigen::Index axis) : h_(std::move(h)), base_(base), axis_(axis) {
    require_dim(base, h_.n_vars(), "SurfaceChart base point");
    if (axis < 0 || axis >= base.size()) fail(ErrorCode::out_of_range, "chart axis out of range");
  }

  Eigen::Index axis() const { return axis_; }
  std::size_t chart_dim() const { return h_.n_vars() - 1; }
  const HomogeneousFunction& function() const { return h_; }

  /// Chart coordinates of an ambient point (drop the graph axis).
  Vec coordinates(const Vec& p) const {
    Vec u(p.size() - 1);
    for (Eigen::Index i = 0, c = 0; i < p.size(); ++i)
      if (i != axis_) u(c++) = p(i);
    return u;
  }

  /// Ambient point over u, solving h = 1 for the graph coordinate by Newton
  /// iteration started from the base point's value.
  Vec point(const Vec& u) const {
    Vec p(h_.n_vars());
    for (Eigen::Index i = 0, c = 0; i < p.size(); ++i) p(i) = (i == axis_) ? base_(axis_) : u(c++);
    for (int it = 0; it < 60; ++it) {
      const DerivativeJet j = h_.jet(p, 1);
      const double step = (j.value - 1.0) / j.grad(axis_);
      p(axis_) -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(p(axis_)))) {
        if (std::abs(h_(p) - 1.0) < 1e-9) return p;
      }
    }
    if (std::abs(h_(p) - 1.0) < 1e-9) return p;
    fail(ErrorCode::no_convergence, "graph coordinate did not converge");
  }

  /// Tangent vectors d p / d u_i = e_i - (h_i / h_k) e_k as columns.
  Mat tangent_basis(const Vec& p) const {
    const DerivativeJet j = h_.jet(p, 1);
    const Eigen::Index n = p.size();
    Mat t = Mat::Zero(n, n - 1);
    for (Eigen::Index i = 0, c = 0; i < n; ++i) {
      if (i == axis_) continue;
      t(i, c) = 1.0;
      t(axis_, c) = -j.grad(i) / j.grad(axis_);
      ++c;
    }
    return t;
  }

  /// Pullback of -d^2h by the graph parametrization at chart coordinates u.
  Mat metric(const Vec& u) const {
    const Vec p = point(u);
    const Mat t = tangent_basis(p);
    const Mat g = -t.transpose() * h_.jet(p, 2).hess * t;
    return 0.5 * (g + g.transpose());
  }

 private:
  HomogeneousFunction h_;
  Vec base_;
  Eigen::Index axis_ = 0;
};

/// Induced metric g_H at p in the best-axis chart.
inline Mat induced_metric(const HomogeneousFunction& h, const Vec& p) {
  const auto rep = psr_point_test(h, p);
  if (rep.verdict != PsrVerdict::psr_point) fail(ErrorCode::not_psr_point, "point is not a PSR point");
  const SurfaceChart chart(h, p);
  return chart.metric(chart.coordinates(p));
}

/// Christoffel symbols of the chart metric, Gamma(k, i, j), by central
/// differences of the metric with the given step.
inline Tensor3 chart_christoffel(const SurfaceChart& chart, const Vec& u, double step = 1e-5) {
  const std::size_t n = chart.chart_dim();
  const Mat g = chart.metric(u);
  const Mat ginv = g.inverse();
  std::vector<Mat> dg(n);  // dg[l](i, j) = d_l g_ij
  for (std::size_t l = 0; l < n; ++l) {
    Vec up = u, um = u;
    up(static_cast<Eigen::Index>(l)) += step;
    um(static_cast<Eigen::Index>(l)) -= step;
    dg[l] = (chart.metric(up) - chart.metric(um)) / (2.0 * step);
  }
  Tensor3 gamma(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j),
                     ll = static_cast<Eigen::Index>(l);
          s += ginv(static_cast<Eigen::Index>(k), ll) * (dg[i](jj, ll) + dg[j](ii, ll) - dg[l](ii, jj));
        }
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

// ---------------------------------------------------------------------------
// Geodesics

enum class Termination { budget_reached, boundary_hit, chart_failure };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::budget_reached: return "budget_reached";
    case Termination::boundary_hit: return "boundary_hit";
    case Termination::chart_failure: return "chart_failure";
  }
  return "unknown";
}

struct GeodesicSample {
  double arclength = 0.0;
  Vec point;  // ambient coordinates
  double d = 0.0;
};

struct GeodesicOptions {
  double rtol = 1e-9;
  double atol = 1e-10;
  double initial_step = 1e-2;
  double max_step = 0.25;
  double min_step = 1e-12;
  double cubic_norm_limit = 1e8;  // boundary when the normalized cubic form exceeds this
  double recenter_radius = 0.25;
  double sample_spacing = 0.1;
  std::size_t max_steps = 2'000'000;
};

struct GeodesicResult {
  std::vector<GeodesicSample> samples;
  double arclength = 0.0;
  Termination termination = Termination::chart_failure;
  std::string detail;  // what triggered the termination
  double min_abs_d = 0.0;
  double energy_drift = 0.0;           // max |g(v, v) - 1|
  double max_level_residual = 0.0;     // max |h - 1| in the working frame
  double max_cubic_norm = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t recenterings = 0;
  Vec end_point;
  Vec end_velocity;
};

namespace detail {

/// Jet of y -> h(A y) from the jet of h at A y.
inline DerivativeJet pullback_jet(const DerivativeJet& j, const Mat& a, const Vec& y) {
  DerivativeJet out = detail::empty_jet(y, j.order);
  out.value = j.value;
  if (j.order >= 1) out.grad = a.transpose() * j.grad;
  if (j.order >= 2) out.hess = a.transpose() * j.hess * a;
  if (j.order >= 3) out.third = transform_slots(j.third, a);
  if (j.order >= 4) out.fourth = transform_slots(j.fourth, a);
  return out;
}

using WideFloat = boost::multiprecision::cpp_bin_float_100;

/// Coefficients of h o A, expanded in extended precision and rounded once.
inline HomogeneousPolynomial compose_wide(const HomogeneousPolynomial& h, const std::vector<WideFloat>& a) {
  const std::size_t n = h.n_vars();
  std::map<Exponent, WideFloat> acc;
  for (const auto& [exp, c] : h.terms()) {
    std::map<Exponent, WideFloat> term{{Exponent(n, 0), WideFloat(c)}};
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < exp[i]; ++k) {
        std::map<Exponent, WideFloat> next;
        for (const auto& [e, v] : term)
          for (std::size_t j = 0; j < n; ++j) {
            if (a[i * n + j] == 0) continue;
            Exponent f = e;
            ++f[j];
            next[f] += v * a[i * n + j];
          }
        term = std::move(next);
      }
    for (const auto& [e, v] : term) acc[e] += v;
  }
  TermMap terms;
  for (const auto& [e, v] : acc) {
    const double rounded = v.convert_to<double>();
    if (rounded != 0.0) terms.emplace(e, Rational(rounded));
  }
  return HomogeneousPolynomial(n, h.degree(), std::move(terms), h.variables());
}

/// h in a moving linear frame: local(y) = h(A y). The frame product is kept
/// in extended precision, since A becomes exponentially ill-conditioned
/// along long geodesics, and for polynomials h o A is recomposed from the
/// original coefficients at each frame change. Rounding therefore never
/// accumulates across frames.
class LocalModel {
 public:
  explicit LocalModel(const HomogeneousFunction& h)
      : h_(h), n_(h.n_vars()), a_(Mat::Identity(n_, n_)), wide_(n_ * n_, WideFloat(0)) {
    for (std::size_t i = 0; i < n_; ++i) wide_[i * n_ + i] = 1;
    if (const auto* p = h.polynomial()) poly_ = p->rounded();
  }

  DerivativeJet jet(const Vec& y, int order) const {
    if (poly_) return evaluate_jet(*poly_, y, order);
    const Vec x = a_ * y;
    if (!h_.in_domain(x)) fail(ErrorCode::domain_error, "left the function's domain");
    return pullback_jet(h_.jet(x, order), a_, y);
  }

  bool in_domain(const Vec& y) const { return poly_ || h_.in_domain(a_ * y); }

  void recenter(const Mat& b) {
    std::vector<WideFloat> next(n_ * n_, WideFloat(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        WideFloat s = 0;
        for (std::size_t k = 0; k < n_; ++k)
          s += wide_[i * n_ + k] * b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
        next[i * n_ + j] = s;
      }
    wide_ = std::move(next);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = wide_[i * n_ + j].convert_to<double>();
    log_abs_det_ += std::log(std::abs(b.determinant()));
    if (poly_) poly_ = compose_wide(*h_.polynomial(), wide_);
  }

  /// Ambient point A y, evaluated in extended precision.
  Vec ambient(const Vec& y) const {
    Vec x(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      WideFloat s = 0;
      for (std::size_t j = 0; j < n_; ++j) s += wide_[i * n_ + j] * y(static_cast<Eigen::Index>(j));
      x(static_cast<Eigen::Index>(i)) = s.convert_to<double>();
    }
    return x;
  }

  const Mat& frame() const { return a_; }
  double log_abs_det() const { return log_abs_det_; }
  double degree() const { return h_.degree(); }

 private:
  const HomogeneousFunction& h_;
  std::size_t n_;
  Mat a_;
  std::vector<WideFloat> wide_;
  std::optional<HomogeneousPolynomial> poly_;
  double log_abs_det_ = 0.0;
};

struct LeftDomain {};

/// g_H-orthonormal basis of ker dh at y (columns), or nullopt if the
/// restricted form is not positive definite.
inline std::optional<Mat> orthonormal_tangent_frame(const DerivativeJet& j) {
  const Mat k = householder_complement(j.grad);
  Mat g = -k.transpose() * j.hess * k;
  g = 0.5 * (g + g.transpose());
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Mat l = llt.matrixL();
  // E = K L^{-T} so that E^T g E = I
  return Mat(k * l.transpose().inverse());
}

/// |T|^2 with indices raised by P = -H + 2 (Hy)(Hy)^T / (y^T H y), the
/// positive definite companion of the Lorentzian -H. Invariant under
/// linear changes of frame.
inline double cubic_form_norm(const DerivativeJet& j, const Vec& y) {
  const Vec hy = j.hess * y;
  const Mat p = -j.hess + 2.0 * hy * hy.transpose() / y.dot(hy);
  const Tensor3 raised = transform_slots(j.third, p.inverse());
  double s = 0.0;
  for (std::size_t f = 0; f < raised.data().size(); ++f) s += raised.data()[f] * j.third.data()[f];
  return std::sqrt(std::max(0.0, s));
}

/// Acceleration of a unit-speed geodesic of g_H in ambient coordinates:
/// the Hessian-metric geodesic term -1/2 H^{-1} T(v, v) plus the normal
/// force along y that keeps d^2h/dt^2 = 0.
inline Vec geodesic_acceleration(const DerivativeJet& j, const Vec& y, const Vec& v) {
  const std::size_t n = static_cast<std::size_t>(y.size());
  Vec tvv = Vec::Zero(y.size());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        tvv(static_cast<Eigen::Index>(k)) += j.third(k, a, b) * v(static_cast<Eigen::Index>(a)) * v(static_cast<Eigen::Index>(b));
  const Eigen::PartialPivLU<Mat> lu(j.hess);
  const Vec a0 = -0.5 * lu.solve(tvv);
  const double lambda = (-v.dot(j.hess * v) - j.grad.dot(a0)) / j.grad.dot(y);
  return a0 + lambda * y;
}

}  // namespace detail

/// Integrates a unit-speed geodesic of g_H from p with initial velocity v
/// (ambient coordinates, tangent to {h = 1}) up to arclength l_max.
///
/// The state lives in a moving linear frame that is re-centred on the
/// current point whenever it drifts; each step is followed by projection
/// back onto {h = 1} and onto its tangent space. Reaching the degenerate
/// boundary shows up as blow-up of the frame-invariant cubic-form norm or
/// as step-size underflow, and is reported as boundary_hit.
inline GeodesicResult integrate_geodesic(const HomogeneousFunction& h, const Vec& p, const Vec& v, double l_max,
                                         const GeodesicOptions& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  const std::size_t n = h.n_vars();
  require_dim(p, n, "geodesic start point");
  require_dim(v, n, "geodesic velocity");
  if (!(l_max >= 0.0)) fail(ErrorCode::invalid_argument, "length budget must be non-negative");
  const auto rep = psr_point_test(h, p);
  if (rep.verdict != PsrVerdict::psr_point) fail(ErrorCode::not_psr_point, "start point is not a PSR point");
  {
    const DerivativeJet j0 = h.jet(p, 2);
    if (std::abs(j0.grad.dot(v)) > 1e-8 * std::max(1.0, j0.grad.norm() * v.norm()))
      fail(ErrorCode::invalid_argument, "initial velocity is not tangent to {h = 1}");
    if (std::abs(-v.dot(j0.hess * v) - 1.0) > 1e-8) fail(ErrorCode::invalid_argument, "initial velocity is not unit");
  }
  const double D = h.degree();

  detail::LocalModel model(h);
  GeodesicResult out;
  Vec y = p, w = v;

  auto d_original = [&](const DerivativeJet& j) {
    // d transforms with det(A)^2 under y = A^{-1} x
    return j.hess.determinant() * std::exp(-2.0 * model.log_abs_det());
  };
  auto recenter = [&](const DerivativeJet& j) {
    const auto e = detail::orthonormal_tangent_frame(j);
    if (!e) return false;
    Mat b(n, n);
    b.col(0) = y;
    b.rightCols(n - 1) = *e;
    const Vec w_new = b.lu().solve(w);
    model.recenter(b);
    y = Vec::Unit(n, 0);
    w = w_new;
    ++out.recenterings;
    return true;
  };
  auto record = [&](double t, const DerivativeJet& j) {
    GeodesicSample s;
    s.arclength = t;
    s.point = model.ambient(y);
    s.d = d_original(j);
    out.samples.push_back(std::move(s));
  };

  DerivativeJet jet = model.jet(y, 3);
  if (!recenter(jet)) fail(ErrorCode::not_psr_point, "induced metric not positive definite at start");
  jet = model.jet(y, 3);
  out.min_abs_d = std::abs(d_original(jet));
  record(0.0, jet);
  double next_sample = opt.sample_spacing;

  using State = std::vector<double>;
  auto system = [&](const State& s, State& ds, double) {
    Vec yy = Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(n));
    Vec ww = Eigen::Map<const Vec>(s.data() + n, static_cast<Eigen::Index>(n));
    if (!yy.allFinite() || !ww.allFinite() || !model.in_domain(yy)) throw detail::LeftDomain{};
    DerivativeJet j;
    try {
      j = model.jet(yy, 3);
    } catch (const Error&) {
      throw detail::LeftDomain{};
    }
    if (!(j.value > 0.0) || j.hess.determinant() == 0.0) throw detail::LeftDomain{};
    const Vec acc = detail::geodesic_acceleration(j, yy, ww);
    if (!acc.allFinite()) throw detail::LeftDomain{};
    for (std::size_t i = 0; i < n; ++i) {
      ds[i] = ww(static_cast<Eigen::Index>(i));
      ds[n + i] = acc(static_cast<Eigen::Index>(i));
    }
  };

  auto stepper = odeint::make_controlled(opt.atol, opt.rtol, opt.max_step, odeint::runge_kutta_dopri5<State>());
  State state(2 * n);
  auto pack = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = y(static_cast<Eigen::Index>(i));
      state[n + i] = w(static_cast<Eigen::Index>(i));
    }
  };
  pack();
  double t = 0.0;
  double dt = std::min(opt.initial_step, opt.max_step);
  out.termination = Termination::budget_reached;

  while (t < l_max) {
    if (out.steps >= opt.max_steps) {
      out.termination = Termination::chart_failure;
      out.detail = "step budget exhausted";
      break;
    }
    if (dt < opt.min_step) {
      out.termination = Termination::boundary_hit;
      out.detail = "step size underflow";
      break;
    }
    const double t_before = t;
    double step = std::min(dt, l_max - t);
    const double attempted = step;
    State trial = state;
    bool ok = false;
    try {
      ok = stepper.try_step(system, trial, t, step) == odeint::success;
    } catch (const detail::LeftDomain&) {
      ok = false;
      step *= 0.5;
      t = t_before;
    }
    if (!ok) {
      ++out.rejected;
      dt = step;
      stepper.reset();
      continue;
    }
    // accept only if the new point is still inside the PSR region
    Vec y_new = Eigen::Map<const Vec>(trial.data(), static_cast<Eigen::Index>(n));
    Vec w_new = Eigen::Map<const Vec>(trial.data() + n, static_cast<Eigen::Index>(n));
    DerivativeJet j_new;
    bool inside = y_new.allFinite() && w_new.allFinite() && model.in_domain(y_new);
    if (inside) {
      j_new = model.jet(y_new, 1);
      inside = j_new.value > 0.0;
    }
    if (inside) {
      y_new /= std::pow(j_new.value, 1.0 / D);
      j_new = model.jet(y_new, 3);
      w_new -= (j_new.grad.dot(w_new) / j_new.grad.dot(y_new)) * y_new;
      inside = detail::orthonormal_tangent_frame(j_new).has_value();
    }
    if (!inside) {
      ++out.rejected;
      t = t_before;
      dt = 0.5 * attempted;
      stepper.reset();
      continue;
    }
    ++out.steps;
    dt = step;
    y = y_new;
    w = w_new;
    jet = j_new;
    out.max_level_residual = std::max(out.max_level_residual, std::abs(jet.value - 1.0));
    out.energy_drift = std::max(out.energy_drift, std::abs(-w.dot(jet.hess * w) - 1.0));
    out.min_abs_d = std::min(out.min_abs_d, std::abs(d_original(jet)));
    const double cubic = detail::cubic_form_norm(jet, y);
    out.max_cubic_norm = std::max(out.max_cubic_norm, cubic);
    if (t >= next_sample || t >= l_max) {
      record(t, jet);
      next_sample = t + opt.sample_spacing;
    }
    if (!(cubic < opt.cubic_norm_limit)) {
      out.termination = Termination::boundary_hit;
      out.detail = "cubic form norm blow-up";
      break;
    }
    if ((y - Vec::Unit(n, 0)).cwiseAbs().maxCoeff() > opt.recenter_radius) {
      if (!recenter(jet)) {
        out.termination = Termination::chart_failure;
        out.detail = "frame construction failed";
        break;
      }
      jet = model.jet(y, 3);
    }
    pack();
    stepper.reset();
  }
  out.arclength = t;
  if (out.samples.empty() || out.samples.back().arclength < t) record(t, jet);
  out.end_point = model.ambient(y);
  out.end_velocity = model.ambient(w);
  return out;
}

/// Unit tangent vectors at p spread at angles 2 pi k / count in a
/// g_H-orthonormal frame of T_p (first two frame vectors).
inline std::vector<Vec> direction_fan(const HomogeneousFunction& h, const Vec& p, int count) {
  if (count < 1) fail(ErrorCode::invalid_argument, "need at least one direction");
  const DerivativeJet j = h.jet(p, 2);
  const auto e = detail::orthonormal_tangent_frame(j);
  if (!e) fail(ErrorCode::not_psr_point, "induced metric not positive definite");
  std::vector<Vec> dirs;
  for (int k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * k / count;
    Vec v = std::cos(a) * e->col(0);
    if (e->cols() > 1) v += std::sin(a) * e->col(1);
    dirs.push_back(v);
  }
  return dirs;
}

struct ProbeReport {
  Vec start;
  double l_max = 0.0;
  std::vector<GeodesicResult> shots;
  double min_arclength = 0.0;
  double max_energy_drift = 0.0;
  int budget_reached = 0;
  int boundary_hits = 0;
  int chart_failures = 0;

  /// Numerical evidence only: finite budgets cannot certify completeness.
  std::string verdict() const {
    if (chart_failures > 0) return "inconclusive";
    return boundary_hits == 0 ? "complete-evidence" : "incomplete-evidence";
  }
};

inline ProbeReport completeness_probe(const HomogeneousFunction& h, const Vec& sample, int n_directions, double l_max,
                                      std::size_t workers = 1, const GeodesicOptions& opt = {}) {
  const auto dirs = direction_fan(h, sample, n_directions);
  ProbeReport r;
  r.start = sample;
  r.l_max = l_max;
  r.shots.resize(dirs.size());
  parallel_for(dirs.size(), workers, [&](std::size_t k) { r.shots[k] = integrate_geodesic(h, sample, dirs[k], l_max, opt); });
  r.min_arclength = l_max;
  for (const auto& s : r.shots) {
    r.min_arclength = std::min(r.min_arclength, s.arclength);
    r.max_energy_drift = std::max(r.max_energy_drift, s.energy_drift);
    switch (s.termination) {
      case Termination::budget_reached: ++r.budget_reached; break;
      case Termination::boundary_hit: ++r.boundary_hits; break;
      case Termination::chart_failure: ++r.chart_failures; break;
    }
  }
  return r;
}

inline void write_geodesic_csv(std::ostream& os, const GeodesicResult& g) {
  os << "arclength";
  const char* names[] = {"x", "y", "z", "w"};
  const Eigen::Index n = g.samples.empty() ? 3 : g.samples.front().point.size();
  for (Eigen::Index i = 0; i < n; ++i) os << ',' << (n <= 4 ? names[i] : ("x" + std::to_string(i + 1)).c_str());
  os << ",d\n";
  os.precision(12);
  for (const auto& s : g.samples) {
    os << s.arclength;
    for (Eigen::Index i = 0; i < s.point.size(); ++i) os << ',' << s.point(i);
    os << ',' << s.d << '\n';
  }
}

// ---------------------------------------------------------------------------
// Surface of revolution z(x^2 + y^2 - z^2) = 1, z < 0

struct RotationalProfile {
  double rho = 0.0;
  double phi = 0.0;   // z on the level set over radius^2 = rho
  double dphi = 0.0;  // d phi / d rho
  double f1 = 0.0;    // g = 2 f1 drho^2 + 2 f2 ds^2
  double f2 = 0.0;
};

/// phi(rho) <= -1 solving 1/z + z^2 = rho (bracketed Newton).
inline double case_d_phi(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) fail(ErrorCode::non_positive_rho, "rho must be non-negative");
  if (rho == 0.0) return -1.0;
  auto f = [rho](double z) { return 1.0 / z + z * z - rho; };
  double lo = -std::sqrt(rho + 1.0) - 1.0, hi = -1.0;  // f(lo) > 0 > f(hi)
  double z = -std::sqrt(rho + 1.0);
  for (int it = 0; it < 200; ++it) {
    const double fz = f(z);
    if (fz > 0.0)
      lo = z;
    else
      hi = z;
    double next = z - fz / (2.0 * z - 1.0 / (z * z));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 4e-16 * std::abs(z)) return next;
    z = next;
  }
  if (std::abs(f(z)) <= 1e-12 * std::max(1.0, rho)) return z;
  fail(ErrorCode::no_convergence, "phi(rho) did not converge");
}

inline RotationalProfile rotational_profile_case_d(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorCode::non_positive_rho, "rho must be positive");
  RotationalProfile r;
  r.rho = rho;
  r.phi = case_d_phi(rho);
  const double u = r.phi * r.phi * r.phi;
  r.dphi = r.phi * r.phi / (2.0 * u - 1.0);
  // -phi/(4 rho) + phi'(3 phi phi' - 1), rearranged with 1 + u = rho phi
  r.f1 = 3.0 * r.phi * (4.0 * u + 1.0) / (4.0 * rho * (2.0 * u - 1.0) * (2.0 * u - 1.0));
  r.f2 = -r.phi * rho;
  return r;
}

/// Integral of sqrt(f1) over [a, b], by Gauss-Kronrod in log rho.
inline double case_d_tail_integral(double a, double b) {
  if (!(a > 0.0) || !(b >= a)) fail(ErrorCode::non_positive_rho, "need 0 < a <= b");
  auto integrand = [](double s) {
    const double rho = std::exp(s);
    return std::sqrt(rotational_profile_case_d(rho).f1) * rho;
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, std::log(a), std::log(b), 15, 1e-12);
}

// ---------------------------------------------------------------------------
// x(y^2 - z^2) + y^3 = 1 in the coordinates t+- = log(|y| +- z)

struct Case5Check {
  double half_g_diag = 0.0;   // coefficient of dt+^2 and dt-^2 in g/2
  double half_g_cross = 0.0;  // coefficient of dt+ dt- in g/2
  Mat g;
  Mat residual;               // g - (dt+^2 + dt-^2)
  double min_eigenvalue = 0.0;
  bool psd = false;
};

/// Ambient point of the complete component with the given t+- coordinates.
inline Vec case5_point(double t_plus, double t_minus) {
  const double ep = std::exp(t_plus), em = std::exp(t_minus);
  const double y = -(ep + em) / 2.0;
  const double z = (ep - em) / 2.0;
  // y^2 - z^2 = e^{t+ + t-}
  const double x = (1.0 - y * y * y) / (ep * em);
  Vec p(3);
  p << x, y, z;
  return p;
}

inline Case5Check case5_lower_bound_check(double t_plus, double t_minus) {
  Case5Check c;
  const double e = std::exp(3.0 * t_plus) + std::exp(3.0 * t_minus);
  c.half_g_diag = 1.0 + e / 8.0;
  c.half_g_cross = 1.0 - e / 4.0;
  c.g = Mat(2, 2);
  c.g << 2.0 * c.half_g_diag, c.half_g_cross, c.half_g_cross, 2.0 * c.half_g_diag;
  c.residual = c.g - Mat::Identity(2, 2);
  c.min_eigenvalue = signature(c.residual, 0.0).eigenvalues.front();
  c.psd = c.min_eigenvalue >= -1e-9 * std::max(1.0, c.g.cwiseAbs().maxCoeff());
  return c;
}

}  // namespace psr
