#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psr/jet.hpp"
#include "psr/polynomial.hpp"

namespace psr {

/// A positively homogeneous function of real degree D (D > 0, D != 1) on an
/// R_{>0}-invariant domain. Polynomials keep their exact representation so
/// callers can take exact routes (e.g. the Hessian determinant).
class HomogeneousFunction {
 public:
  using Evaluator = std::function<double(const Vec&)>;
  using JetEvaluator = std::function<DerivativeJet(const Vec&, int)>;
  using DomainPredicate = std::function<bool(const Vec&)>;

  HomogeneousFunction(std::size_t n_vars, double degree, Evaluator f, JetEvaluator jet = {},
                      DomainPredicate domain = {}, std::string name = {})
      : n_(n_vars), degree_(degree), f_(std::move(f)), jet_(std::move(jet)), domain_(std::move(domain)),
        name_(std::move(name)) {
    if (n_ == 0) fail(ErrorCode::invalid_argument, "function needs at least one variable");
    if (!(degree_ > 0.0) || degree_ == 1.0 || !std::isfinite(degree_))
      fail(ErrorCode::invalid_argument, "degree must be positive and different from 1");
    if (!f_) fail(ErrorCode::invalid_argument, "missing evaluator");
  }

  // implicit on purpose: polynomials are homogeneous functions
  HomogeneousFunction(const HomogeneousPolynomial& p)  // NOLINT
      : HomogeneousFunction(p.n_vars(), static_cast<double>(p.degree()), [p](const Vec& x) { return p(x); },
                            [p](const Vec& x, int order) { return evaluate_jet(p, x, order); }, {},
                            p.to_string()) {
    poly_ = std::make_shared<PolyData>();
    poly_->poly = p;
  }

  std::size_t n_vars() const noexcept { return n_; }
  double degree() const noexcept { return degree_; }
  const std::string& name() const noexcept { return name_; }
  bool has_analytic_jet() const noexcept { return static_cast<bool>(jet_); }
  const HomogeneousPolynomial* polynomial() const noexcept { return poly_ ? &poly_->poly : nullptr; }

  /// Exact Hessian determinant, computed once per polynomial; null otherwise.
  const HomogeneousPolynomial* hessian_determinant() const {
    if (!poly_) return nullptr;
    std::call_once(poly_->once, [this] { poly_->det = poly_->poly.hessian_determinant(); });
    return &poly_->det;
  }

  bool in_domain(const Vec& x) const {
    if (static_cast<std::size_t>(x.size()) != n_ || !x.allFinite()) return false;
    return !domain_ || domain_(x);
  }

  double operator()(const Vec& x) const {
    check(x);
    return f_(x);
  }

  DerivativeJet jet(const Vec& x, int order = 4) const {
    check(x);
    if (jet_) return jet_(x, order);
    return finite_difference_jet(f_, x, order);
  }

 private:
  void check(const Vec& x) const {
    require_dim(x, n_, "homogeneous function");
    if (domain_ && !domain_(x)) fail(ErrorCode::domain_error, "point outside the function's domain");
  }

  std::size_t n_;
  double degree_;
  Evaluator f_;
  JetEvaluator jet_;
  DomainPredicate domain_;
  std::string name_;
  struct PolyData {
    HomogeneousPolynomial poly;
    std::once_flag once;
    HomogeneousPolynomial det;
  };
  std::shared_ptr<PolyData> poly_;
};

inline DerivativeJet evaluate_jet(const HomogeneousFunction& h, const Vec& x, int order = 4) {
  return h.jet(x, order);
}

/// h(x) = prod_i x_i^{a_i} on the open positive orthant, with analytic
/// derivatives. Degree is sum a_i.
inline HomogeneousFunction power_product(const std::vector<double>& exponents) {
  const std::size_t n = exponents.size();
  double degree = 0.0;
  for (double a : exponents) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorCode::invalid_argument, "exponents must be positive");
    degree += a;
  }
  auto value = [exponents](const Vec& x) {
    double log_h = 0.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) log_h += exponents[i] * std::log(x(static_cast<Eigen::Index>(i)));
    return std::exp(log_h);
  };
  auto jet = [exponents, value, n](const Vec& x, int order) {
    detail::require_order(order);
    DerivativeJet j = detail::empty_jet(x, order);
    j.value = value(x);
    // derivative along a multiset with counts c_i: h * prod falling(a_i, c_i) / x_i^{c_i}
    auto entry = [&](const std::vector<std::size_t>& idx) {
      std::vector<int> counts(n, 0);
      for (std::size_t i : idx) ++counts[i];
      double v = j.value;
      for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < counts[i]; ++k) v *= (exponents[i] - k) / x(static_cast<Eigen::Index>(i));
      return v;
    };
    for (std::size_t a = 0; a < n && order >= 1; ++a) {
      j.grad(static_cast<Eigen::Index>(a)) = entry({a});
      for (std::size_t b = 0; b < n && order >= 2; ++b) {
        j.hess(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = entry({a, b});
        for (std::size_t c = 0; c < n && order >= 3; ++c) {
          j.third(a, b, c) = entry({a, b, c});
          for (std::size_t d = 0; d < n && order >= 4; ++d) j.fourth(a, b, c, d) = entry({a, b, c, d});
        }
      }
    }
    return j;
  };
  auto domain = [](const Vec& x) { return (x.array() > 0.0).all(); };
  std::string name = "prod";
  for (double a : exponents) name += " " + std::to_string(a);
  return HomogeneousFunction(n, degree, value, jet, domain, name);
}

/// Value, gradient and Hessian of d = det(Hessian of h).
struct DeterminantJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
  bool exact = false;
};

/// Exact route for polynomials (differentiating the determinant polynomial);
/// otherwise Richardson-extrapolated central differences of d with step
/// `rel_step * max(1,|x|)`, failing with sign_change_in_d if d changes sign
/// inside the stencil.
inline DeterminantJet determinant_jet(const HomogeneousFunction& h, const Vec& x, double rel_step = 1e-3) {
  DeterminantJet out;
  if (const auto* det = h.hessian_determinant()) {
    const DerivativeJet j = evaluate_jet(*det, x, 2);
    out.value = j.value;
    out.grad = j.grad;
    out.hess = j.hess;
    out.exact = true;
    return out;
  }
  const double d0 = h.jet(x, 2).hess.determinant();
  auto d = [&](const Vec& p) {
    const double v = h.jet(p, 2).hess.determinant();
    if ((v > 0.0) != (d0 > 0.0) || v == 0.0)
      fail(ErrorCode::sign_change_in_d, "det of the Hessian changes sign within the difference stencil");
    return v;
  };
  const DerivativeJet j = finite_difference_jet(d, x, 2, rel_step);
  out.value = d0;
  out.grad = j.grad;
  out.hess = j.hess;
  return out;
}

}  // namespace psr
