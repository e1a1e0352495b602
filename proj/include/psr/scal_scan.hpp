#pragma once

#include <boost/math/tools/minima.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "psr/catalog.hpp"
#include "psr/hyperbolicity.hpp"
#include "psr/parallel.hpp"
#include "psr/rmap_curvature.hpp"

namespace psr {

/// An affine slice of the cone: point(u) = base + sum_i u_i e_{free[i]},
/// with u ranging over the box [lo, hi] and restricted by `region`.
struct SliceSpec {
  Vec base;
  std::vector<std::size_t> free;
  Vec lo, hi;
  std::vector<Inequality> region;

  Vec point(const Vec& u) const {
    Vec p = base;
    for (std::size_t i = 0; i < free.size(); ++i)
      p(static_cast<Eigen::Index>(free[i])) = u(static_cast<Eigen::Index>(i));
    return p;
  }
};

/// Geometric march from an interior point toward a boundary point.
struct BoundaryProbeSpec {
  std::string stratum;
  Vec start;
  Vec target;
  int halvings = 20;
};

struct BoundaryLimit {
  std::string stratum;
  std::vector<double> distances;  // relative distance 2^-k to the target
  std::vector<double> values;
  double last = 0.0;
  double value = 0.0;  // Richardson extrapolation of the last two values
};

struct ScalSample {
  Vec slice;  // slice coordinates u
  Vec point;
  double scal = 0.0;
  bool excluded = false;  // d too close to zero
};

struct ScalHistogram {
  double lo = 0.0, hi = 0.0;
  std::vector<std::size_t> counts;
};

struct ScalScanResult {
  std::vector<ScalSample> samples;  // grid order, only points inside the region
  std::size_t excluded = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  Vec argmin, argmax;
  ScalHistogram histogram;
  std::vector<BoundaryLimit> boundary_limits;
};

struct ScalScanOptions {
  int grid = 101;
  std::size_t workers = 1;
  int bins = 20;
  double d_exclusion = 1e-10;
  ScalMethod method = ScalMethod::theorem;
};

inline double scal_at(const HomogeneousFunction& h, const Vec& p, ScalMethod method = ScalMethod::theorem) {
  return scalar_curvature(RMapContext(h, p), method);
}

namespace detail {

/// |d| scale for the exclusion test: sum of |coefficients| of d times |p|^deg.
inline double determinant_scale(const HomogeneousFunction& h, const Vec& p) {
  const double r = std::max(1.0, p.cwiseAbs().maxCoeff());
  if (const auto* det = h.hessian_determinant()) {
    const HomogeneousPolynomial& d = *det;
    double s = 0.0;
    for (const auto& [e, c] : d.terms()) s += std::abs(c.convert_to<double>());
    return s * std::pow(r, d.degree());
  }
  return std::pow(r, h.n_vars() * (h.degree() - 2.0));
}

/// Sample inside the region: predicates hold, h > 0 and the radial
/// projection is a PSR point.
inline bool in_scan_region(const HomogeneousFunction& h, const SliceSpec& s, const Vec& p) {
  if (!satisfies(s.region, p) || !h.in_domain(p)) return false;
  const double v = h(p);
  if (!(v > 0.0) || !std::isfinite(v)) return false;
  try {
    return psr_point_test(h, p / std::pow(v, 1.0 / h.degree())).verdict == PsrVerdict::psr_point;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace detail

inline BoundaryLimit boundary_probe(const HomogeneousFunction& h, const BoundaryProbeSpec& spec,
                                    ScalMethod method = ScalMethod::theorem) {
  if (spec.halvings < 2) fail(ErrorCode::invalid_argument, "boundary probe needs at least two halvings");
  BoundaryLimit b;
  b.stratum = spec.stratum;
  for (int k = 0; k <= spec.halvings; ++k) {
    const double e = std::ldexp(1.0, -k);
    const Vec p = spec.target + e * (spec.start - spec.target);
    b.distances.push_back(e);
    b.values.push_back(scal_at(h, p, method));
  }
  const std::size_t n = b.values.size();
  b.last = b.values[n - 1];
  // error linear in the distance to the stratum
  b.value = 2.0 * b.values[n - 1] - b.values[n - 2];
  return b;
}

inline ScalScanResult scal_scan(const HomogeneousFunction& h, const SliceSpec& slice,
                                const std::vector<BoundaryProbeSpec>& probes = {}, const ScalScanOptions& opt = {}) {
  const std::size_t k = slice.free.size();
  require_dim(slice.base, h.n_vars(), "slice base");
  require_dim(slice.lo, k, "slice box");
  require_dim(slice.hi, k, "slice box");
  if (k == 0) fail(ErrorCode::invalid_argument, "slice needs at least one free coordinate");
  if (opt.grid < 2) fail(ErrorCode::invalid_argument, "grid needs at least 2 points per axis");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<std::size_t>(opt.grid);

  std::vector<std::optional<ScalSample>> cells(total);
  parallel_for(total, opt.workers, [&](std::size_t f) {
    Vec u(k);
    std::size_t rest = f;
    for (std::size_t i = k; i-- > 0;) {
      const auto idx = static_cast<double>(rest % static_cast<std::size_t>(opt.grid));
      rest /= static_cast<std::size_t>(opt.grid);
      const auto ii = static_cast<Eigen::Index>(i);
      u(ii) = slice.lo(ii) + (slice.hi(ii) - slice.lo(ii)) * idx / (opt.grid - 1);
    }
    const Vec p = slice.point(u);
    if (!detail::in_scan_region(h, slice, p)) return;
    ScalSample s;
    s.slice = u;
    s.point = p;
    const double d = h.jet(p, 2).hess.determinant();
    if (std::abs(d) < opt.d_exclusion * detail::determinant_scale(h, p)) {
      s.excluded = true;
      s.scal = std::numeric_limits<double>::quiet_NaN();
    } else {
      s.scal = scal_at(h, p, opt.method);
    }
    cells[f] = std::move(s);
  });

  ScalScanResult r;
  for (auto& c : cells) {
    if (!c) continue;
    if (c->excluded) {
      ++r.excluded;
    } else {
      if (c->scal < r.min) {
        r.min = c->scal;
        r.argmin = c->point;
      }
      if (c->scal > r.max) {
        r.max = c->scal;
        r.argmax = c->point;
      }
    }
    r.samples.push_back(std::move(*c));
  }
  if (r.samples.size() == r.excluded) fail(ErrorCode::empty_scan, "no usable grid point inside the scan region");

  const int bins = std::max(1, opt.bins);
  r.histogram.lo = r.min;
  r.histogram.hi = r.max;
  r.histogram.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = r.max - r.min;
  for (const auto& s : r.samples) {
    if (s.excluded) continue;
    int b = width > 0.0 ? static_cast<int>((s.scal - r.min) / width * bins) : 0;
    ++r.histogram.counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
  }
  for (const auto& p : probes) r.boundary_limits.push_back(boundary_probe(h, p, opt.method));
  return r;
}

struct RefinedMinimum {
  Vec point;
  double value = 0.0;
};

/// Minimum of scal on a 1-dimensional slice by Brent's method on [lo, hi].
inline RefinedMinimum refine_minimum_1d(const HomogeneousFunction& h, const SliceSpec& slice, double lo, double hi,
                                        ScalMethod method = ScalMethod::theorem) {
  if (slice.free.size() != 1) fail(ErrorCode::invalid_argument, "Brent refinement needs a 1-dimensional slice");
  auto f = [&](double t) {
    Vec u(1);
    u << t;
    return scal_at(h, slice.point(u), method);
  };
  const auto [t, v] = boost::math::tools::brent_find_minima(f, lo, hi, 52);
  Vec u(1);
  u << t;
  return {slice.point(u), v};
}

/// Minimum of scal by repeated zoomed grids around the best region point.
inline RefinedMinimum refine_minimum_zoom(const HomogeneousFunction& h, const SliceSpec& slice, const Vec& start_u,
                                          double radius, int rounds = 8, int grid = 11,
                                          ScalMethod method = ScalMethod::theorem) {
  const std::size_t k = slice.free.size();
  require_dim(start_u, k, "zoom start");
  Vec best_u = start_u;
  double best = scal_at(h, slice.point(best_u), method);
  for (int round = 0; round < rounds; ++round) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= static_cast<std::size_t>(grid);
    const Vec centre = best_u;
    for (std::size_t f = 0; f < total; ++f) {
      Vec u(k);
      std::size_t rest = f;
      for (std::size_t i = k; i-- > 0;) {
        const auto idx = static_cast<double>(rest % static_cast<std::size_t>(grid));
        rest /= static_cast<std::size_t>(grid);
        u(static_cast<Eigen::Index>(i)) = centre(static_cast<Eigen::Index>(i)) + radius * (2.0 * idx / (grid - 1) - 1.0);
      }
      const Vec p = slice.point(u);
      if (!detail::in_scan_region(h, slice, p)) continue;
      const double v = scal_at(h, p, method);
      if (v < best) {
        best = v;
        best_u = u;
      }
    }
    radius *= 0.25;
  }
  return {slice.point(best_u), best};
}

// ---------------------------------------------------------------------------
// Presets for the catalog surfaces

struct ScalRangePreset {
  std::string id;
  HomogeneousPolynomial polynomial;
  SliceSpec slice;
  std::vector<BoundaryProbeSpec> probes;
};

namespace detail {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace detail

/// Slice, region and boundary strata used for the scalar curvature ranges of
/// the complete surfaces a) to f). `b` is only used for f.
inline ScalRangePreset scal_range_preset(const std::string& id, double b = 0.0) {
  using detail::vec;
  ScalRangePreset p;
  p.id = id;
  if (id == "a") {
    p.polynomial = parse_polynomial("x*y*z");
    p.slice = {vec({0, 0, 1}), {0, 1}, vec({0.05, 0.05}), vec({3, 3}), {{"x", ">", 0}, {"y", ">", 0}}};
  } else if (id == "b") {
    p.polynomial = parse_polynomial("x*(x*y-z^2)");
    p.slice = {vec({1, 0, 0}), {1, 2}, vec({0.01, -2}), vec({4, 2}), {{"x", ">", 0}}};
  } else if (id == "c") {
    p.polynomial = parse_polynomial("x*y*z+x^3");
    p.slice = {vec({0, 0, -1}), {0, 1}, vec({-3, 0}), vec({0, 10}), {{"x", "<", 0}, {"y", ">", 0}}};
    p.probes = {{"h -> 0, x < 0", vec({-1, 3, -1}), vec({-1, 1, -1}), 20},
                {"x -> 0", vec({-1, 3, -1}), vec({0, 3, -1}), 20}};
  } else if (id == "d") {
    p.polynomial = parse_polynomial("z*(x^2+y^2-z^2)");
    p.slice = {vec({0, 0, -1}), {0, 1}, vec({-1, -1}), vec({1, 1}), {{"z", "<", 0}}};
    p.probes = {{"h -> 0", vec({0, 0, -1}), vec({1, 0, -1}), 20}};
  } else if (id == "e") {
    p.polynomial = parse_polynomial("x*(y^2-z^2)+y^3");
    p.slice = {vec({1, 0, 0}), {1}, vec({-1}), vec({0}), {{"y", "<", 0}, {"x", ">", 0}}};
    // d vanishes like y^2 at y = 0, so stop the march early
    p.probes = {{"y -> 0", vec({1, -0.5, 0}), vec({1, 0, 0}), 12},
                {"y -> -x", vec({1, -0.5, 0}), vec({1, -1, 0}), 20}};
  } else if (id == "f") {
    if (!(std::abs(b) < 1.0)) fail(ErrorCode::out_of_range, "surface f needs |b| < 1");
    p.polynomial = weierstrass_polynomial(3.0, b);
    p.slice = {vec({0, 0, -1}), {0, 1}, vec({-0.5, -2}), vec({1.5, 2}), {{"z", "<", 0}, {"2*x - z", ">", 0}}};
  } else {
    fail(ErrorCode::unknown_id, "no scalar curvature preset for '" + id + "'");
  }
  return p;
}

/// Minimum of scal over the f) surface for parameter b: coarse grid, then
/// zoomed grids around the best point.
inline RefinedMinimum weierstrass_scal_minimum(double b, int grid = 61) {
  const ScalRangePreset p = scal_range_preset("f", b);
  const HomogeneousFunction h(p.polynomial);
  ScalScanOptions opt;
  opt.grid = grid;
  const ScalScanResult r = scal_scan(h, p.slice, {}, opt);
  Vec u(2);
  u << r.argmin(0), r.argmin(1);
  const double cell = (p.slice.hi - p.slice.lo).maxCoeff() / (grid - 1);
  return refine_minimum_zoom(h, p.slice, u, 2.0 * cell);
}

// ---------------------------------------------------------------------------

inline void write_scal_csv(std::ostream& os, const ScalScanResult& r) {
  const std::size_t k = r.samples.empty() ? 0 : static_cast<std::size_t>(r.samples.front().slice.size());
  for (std::size_t i = 0; i < k; ++i) os << 'u' << i + 1 << ',';
  os << "x,y,z,scal,excluded\n";
  os.precision(15);
  for (const auto& s : r.samples) {
    for (Eigen::Index i = 0; i < s.slice.size(); ++i) os << s.slice(i) << ',';
    for (Eigen::Index i = 0; i < s.point.size(); ++i) os << s.point(i) << ',';
    if (s.excluded)
      os << ",1\n";
    else
      os << s.scal << ",0\n";
  }
}

inline std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline nlohmann::json scal_summary_json(const ScalScanResult& r) {
  nlohmann::json j;
  j["min"] = r.min;
  j["argmin"] = to_std(r.argmin);
  j["max_observed"] = r.max;
  j["argmax"] = to_std(r.argmax);
  j["samples"] = r.samples.size();
  j["excluded"] = r.excluded;
  j["histogram"] = {{"lo", r.histogram.lo}, {"hi", r.histogram.hi}, {"counts", r.histogram.counts}};
  j["boundary_limits"] = nlohmann::json::array();
  for (const auto& b : r.boundary_limits)
    j["boundary_limits"].push_back({{"stratum", b.stratum}, {"value", b.value}, {"last_sample", b.last}});
  return j;
}

}  // namespace psr
