#pragma once

#include <cmath>
#include <functional>

#include "psr/linalg.hpp"
#include "psr/polynomial.hpp"

namespace psr {

/// Value and derivatives of a function at a point, up to `order` (0..4).
/// Tensors above `order` are left zero-sized.
struct DerivativeJet {
  Vec point;
  int order = 0;
  double value = 0.0;
  Vec grad;
  Mat hess;
  Tensor3 third;
  Tensor4 fourth;

  std::size_t dim() const { return static_cast<std::size_t>(point.size()); }
};

namespace detail {

inline void require_order(int order) {
  if (order < 0 || order > 4) fail(ErrorCode::invalid_argument, "jet order must be in 0..4");
}

inline DerivativeJet empty_jet(const Vec& x, int order) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  DerivativeJet j;
  j.point = x;
  j.order = order;
  if (order >= 1) j.grad = Vec::Zero(x.size());
  if (order >= 2) j.hess = Mat::Zero(x.size(), x.size());
  if (order >= 3) j.third = Tensor3(n);
  if (order >= 4) j.fourth = Tensor4(n);
  return j;
}

inline double* jet_slot(DerivativeJet& j, std::size_t order) {
  switch (order) {
    case 0: return &j.value;
    case 1: return j.grad.data();
    case 2: return j.hess.data();  // symmetric, so storage order is irrelevant
    case 3: return const_cast<double*>(j.third.data().data());
    default: return const_cast<double*>(j.fourth.data().data());
  }
}

}  // namespace detail

/// Exact-derivative jet of a polynomial; only the final point evaluation is
/// done in floating point.
inline DerivativeJet evaluate_jet(const HomogeneousPolynomial& h, const Vec& x, int order = 4) {
  detail::require_order(order);
  require_dim(x, h.n_vars(), "evaluate_jet");
  const auto& tables = h.tables();
  const auto powers = h.power_table(x);
  DerivativeJet j = detail::empty_jet(x, order);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(order); ++k) {
    double* out = detail::jet_slot(j, k);
    const auto& ord = tables.orders[k];
    for (std::size_t u = 0; u < ord.unique.size(); ++u) {
      const double v = ord.unique[u].evaluate(powers);
      for (std::size_t flat : ord.positions[u]) out[flat] = v;
    }
  }
  return j;
}

/// Central-difference jet of a scalar function with one Richardson step per
/// derivative order. `base_step` is scaled by max(1, |x|); orders 3 and 4
/// use progressively larger steps since their roundoff grows like eps/s^k.
inline DerivativeJet finite_difference_jet(const std::function<double(const Vec&)>& f, const Vec& x, int order,
                                           double base_step = 1e-4) {
  detail::require_order(order);
  const std::size_t n = static_cast<std::size_t>(x.size());
  const double scale = std::max(1.0, x.norm());
  DerivativeJet j = detail::empty_jet(x, order);
  j.value = f(x);

  // nested central difference over an index tuple with step s
  std::function<double(const Vec&, const std::vector<std::size_t>&, std::size_t, double)> nested =
      [&](const Vec& p, const std::vector<std::size_t>& idx, std::size_t depth, double s) -> double {
    if (depth == idx.size()) return f(p);
    Vec plus = p, minus = p;
    plus(static_cast<Eigen::Index>(idx[depth])) += s;
    minus(static_cast<Eigen::Index>(idx[depth])) -= s;
    return (nested(plus, idx, depth + 1, s) - nested(minus, idx, depth + 1, s)) / (2.0 * s);
  };

  static constexpr double kStepFactor[] = {0.0, 1.0, 1.0, 20.0, 50.0};
  for (std::size_t k = 1; k <= static_cast<std::size_t>(order); ++k) {
    const double s = base_step * kStepFactor[k] * scale;
    double* out = detail::jet_slot(j, k);
    std::vector<std::size_t> tuple(k, 0);
    while (true) {
      const double coarse = nested(x, tuple, 0, s);
      const double fine = nested(x, tuple, 0, s / 2);
      const double v = (4.0 * fine - coarse) / 3.0;
      std::vector<std::size_t> perm = tuple;
      do {
        std::size_t flat = 0;
        for (std::size_t i : perm) flat = flat * n + i;
        out[flat] = v;
      } while (std::next_permutation(perm.begin(), perm.end()));

      std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(k) - 1;
      while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == n - 1) --pos;
      if (pos < 0) break;
      const std::size_t v2 = ++tuple[static_cast<std::size_t>(pos)];
      for (std::size_t q = static_cast<std::size_t>(pos) + 1; q < k; ++q) tuple[q] = v2;
    }
  }
  return j;
}

}  // namespace psr
