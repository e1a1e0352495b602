#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "psr/homogeneous_function.hpp"
#include "psr/parallel.hpp"
#include "psr/signature.hpp"
#include "psr/weierstrass.hpp"

namespace psr {

enum class PsrVerdict {
  psr_point,
  lorentzian_but_not_psr,
  not_psr,     // h > 0 but -d^2h is not Lorentzian (e.g. definite)
  degenerate,  // restricted form has a kernel
  outside,     // h <= 0 or outside the function's domain
};

inline std::string to_string(PsrVerdict v) {
  switch (v) {
    case PsrVerdict::psr_point: return "psr_point";
    case PsrVerdict::lorentzian_but_not_psr: return "lorentzian_but_not_psr";
    case PsrVerdict::not_psr: return "not_psr";
    case PsrVerdict::degenerate: return "degenerate";
    case PsrVerdict::outside: return "outside";
  }
  return "unknown";
}

struct PsrPointReport {
  Vec point;
  double h = 0.0;
  double d = 0.0;                // det of the Hessian of h
  SignatureResult neg_hessian;   // inertia of -d^2h
  Mat kernel_basis;              // orthonormal basis of ker dh
  Mat restricted;                // -d^2h restricted to ker dh
  SignatureResult restricted_signature;
  PsrVerdict verdict = PsrVerdict::outside;
};

/// Lorentzian here means -d^2h has inertia (n, 1, 0), i.e. d^2h has one
/// positive and n negative directions.
inline bool is_lorentzian(const SignatureResult& neg_hessian) {
  const int n = neg_hessian.n_plus + neg_hessian.n_minus + neg_hessian.n_zero;
  return neg_hessian.matches(n - 1, 1, 0);
}

inline PsrPointReport psr_point_test(const HomogeneousFunction& h, const Vec& p) {
  require_dim(p, h.n_vars(), "psr_point_test");
  PsrPointReport r;
  r.point = p;
  if (!h.in_domain(p)) return r;
  const DerivativeJet j = h.jet(p, 2);
  r.h = j.value;
  r.d = j.hess.determinant();
  r.neg_hessian = signature(-j.hess);
  const double grad_scale = std::max(1.0, j.hess.norm() * p.norm());
  if (!(j.grad.norm() > 1e-12 * grad_scale))
    fail(ErrorCode::gradient_vanishes, "dh vanishes at the point (cone singularity)");
  r.kernel_basis = householder_complement(j.grad);
  r.restricted = -r.kernel_basis.transpose() * j.hess * r.kernel_basis;
  r.restricted = 0.5 * (r.restricted + r.restricted.transpose());
  r.restricted_signature = signature(r.restricted);
  if (!(r.h > 0.0))
    r.verdict = PsrVerdict::outside;
  else if (r.restricted_signature.positive_definite())
    r.verdict = PsrVerdict::psr_point;
  else if (r.restricted_signature.n_zero > 0 || r.neg_hessian.n_zero > 0)
    r.verdict = PsrVerdict::degenerate;
  else if (is_lorentzian(r.neg_hessian))
    r.verdict = PsrVerdict::lorentzian_but_not_psr;
  else
    r.verdict = PsrVerdict::not_psr;
  return r;
}

struct LorentzianRegionResult {
  bool lorentzian = false;
  bool degenerate = false;  // |d| within tolerance of zero
  double d = 0.0;
  explicit operator bool() const { return lorentzian; }
};

/// Membership in {d > 0, x > 0} u {d > 0, z < 0} for h^{(a,b)}, with d the
/// exact Hessian determinant evaluated at p.
inline LorentzianRegionResult lorentzian_region_test(double a, double b, const Vec& p) {
  require_dim(p, 3, "lorentzian_region_test");
  const HomogeneousPolynomial det = weierstrass_polynomial(a, b).hessian_determinant();
  LorentzianRegionResult r;
  r.d = det(p);
  double coef = 0.0;
  for (const auto& [e, c] : det.terms()) coef += std::abs(c.convert_to<double>());
  const double scale = coef * std::pow(std::max(1.0, p.cwiseAbs().maxCoeff()), 3);
  r.degenerate = std::abs(r.d) <= 1e-12 * scale;
  r.lorentzian = !r.degenerate && r.d > 0.0 && (p(0) > 0.0 || p(2) < 0.0);
  return r;
}

// ---------------------------------------------------------------------------

struct ScanPoint {
  std::vector<int> index;  // grid multi-index
  Vec grid_point;
  Vec point;               // radial projection onto {h = 1}
  double h = 0.0;          // h at the grid point
  double h_level = 0.0;    // h at the projected point, 1 up to rounding
  double d = 0.0;          // det of the Hessian at the projected point
  PsrVerdict verdict = PsrVerdict::outside;
  int component = -1;
};

struct ScanComponent {
  int id = 0;
  std::size_t size = 0;
  Vec sample;
  bool touches_degenerate = false;  // adjacent to h > 0 points that are not PSR
};

struct DomainScanResult {
  std::vector<ScanPoint> points;  // only grid points with h > 0, grid order
  std::vector<ScanComponent> components;
  std::size_t grid_points = 0;
  std::map<std::string, std::size_t> verdict_counts;
};

/// Labels every grid point of the box with h > 0 by the verdict at its
/// radial projection onto {h = 1} (the verdict is invariant under positive
/// scaling), then groups PSR points into components by grid adjacency
/// (all 3^n - 1 neighbours).
inline DomainScanResult domain_scan(const HomogeneousFunction& h, const Vec& lo, const Vec& hi, int grid,
                                    std::size_t workers = 1) {
  const std::size_t n = h.n_vars();
  require_dim(lo, n, "domain_scan box");
  require_dim(hi, n, "domain_scan box");
  if (grid < 2) fail(ErrorCode::invalid_argument, "grid needs at least 2 points per axis");
  if (!((hi - lo).array() > 0.0).all()) fail(ErrorCode::invalid_argument, "box must have positive extent");
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid);

  auto unflatten = [&](std::size_t flat) {
    std::vector<int> idx(n);
    for (std::size_t i = n; i-- > 0;) {
      idx[i] = static_cast<int>(flat % static_cast<std::size_t>(grid));
      flat /= static_cast<std::size_t>(grid);
    }
    return idx;
  };

  std::vector<ScanPoint> all(total);
  std::vector<char> positive(total, 0);
  parallel_for(total, workers, [&](std::size_t f) {
    ScanPoint sp;
    sp.index = unflatten(f);
    sp.grid_point = Vec(n);
    for (std::size_t i = 0; i < n; ++i)
      sp.grid_point(static_cast<Eigen::Index>(i)) =
          lo(static_cast<Eigen::Index>(i)) +
          (hi(static_cast<Eigen::Index>(i)) - lo(static_cast<Eigen::Index>(i))) * sp.index[i] / (grid - 1);
    if (!h.in_domain(sp.grid_point)) return;
    sp.h = h(sp.grid_point);
    if (!(sp.h > 0.0) || !std::isfinite(sp.h)) return;
    sp.point = sp.grid_point / std::pow(sp.h, 1.0 / h.degree());
    sp.h_level = h(sp.point);
    try {
      const auto rep = psr_point_test(h, sp.point);
      sp.verdict = rep.verdict;
      sp.d = rep.d;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::gradient_vanishes) throw;
      sp.verdict = PsrVerdict::degenerate;
    }
    positive[f] = 1;
    all[f] = std::move(sp);
  });

  DomainScanResult out;
  out.grid_points = total;
  std::size_t count = 0;
  for (std::size_t f = 0; f < total; ++f) count += positive[f];
  if (count == 0) fail(ErrorCode::empty_scan, "no grid point in the box has h > 0");

  // neighbour offsets in flat index space
  std::vector<std::vector<int>> offsets;
  for (std::size_t code = 0; code < static_cast<std::size_t>(std::pow(3, n)); ++code) {
    std::vector<int> off(n);
    std::size_t c = code;
    bool zero = true;
    for (std::size_t i = 0; i < n; ++i) {
      off[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
      if (off[i] != 0) zero = false;
    }
    if (!zero) offsets.push_back(off);
  }
  auto neighbour = [&](const std::vector<int>& idx, const std::vector<int>& off, std::size_t& flat) {
    flat = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int v = idx[i] + off[i];
      if (v < 0 || v >= grid) return false;
      flat = flat * static_cast<std::size_t>(grid) + static_cast<std::size_t>(v);
    }
    return true;
  };

  // union-find over PSR points
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto is_psr = [&](std::size_t f) { return positive[f] && all[f].verdict == PsrVerdict::psr_point; };
  for (std::size_t f = 0; f < total; ++f) {
    if (!is_psr(f)) continue;
    for (const auto& off : offsets) {
      std::size_t g;
      if (neighbour(all[f].index, off, g) && is_psr(g)) {
        const std::size_t ra = find(f), rb = find(g);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  std::map<std::size_t, int> root_id;
  for (std::size_t f = 0; f < total; ++f) {
    if (!positive[f]) continue;
    ScanPoint& sp = all[f];
    ++out.verdict_counts[to_string(sp.verdict)];
    if (sp.verdict == PsrVerdict::psr_point) {
      const std::size_t root = find(f);
      auto [it, inserted] = root_id.emplace(root, static_cast<int>(out.components.size()));
      if (inserted) {
        ScanComponent c;
        c.id = it->second;
        c.sample = sp.point;
        out.components.push_back(c);
      }
      sp.component = it->second;
      ScanComponent& comp = out.components[static_cast<std::size_t>(sp.component)];
      ++comp.size;
      for (const auto& off : offsets) {
        std::size_t g;
        if (neighbour(sp.index, off, g) && positive[g] && all[g].verdict != PsrVerdict::psr_point)
          comp.touches_degenerate = true;
      }
    }
    out.points.push_back(std::move(sp));
  }
  return out;
}

inline void write_scan_csv(std::ostream& os, const DomainScanResult& scan) {
  os << "x,y,z,h,d,verdict,component_id\n";
  os.precision(12);
  for (const auto& p : scan.points) {
    for (Eigen::Index i = 0; i < p.point.size(); ++i) os << p.point(i) << ',';
    for (Eigen::Index i = p.point.size(); i < 3; ++i) os << ',';
    os << p.h_level << ',' << p.d << ',' << to_string(p.verdict) << ',' << p.component << '\n';
  }
}

}  // namespace psr
