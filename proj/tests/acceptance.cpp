// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "psr/psr.hpp"

using namespace psr;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Random points of the cone over the PSR components of an entry, kept a
// scale-free distance away from h = 0 and det d^2h = 0.
std::vector<Vec> cone_points(const CatalogEntry& e, std::mt19937_64& rng, int count) {
  std::normal_distribution<double> g(0.0, 0.3);
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  const HomogeneousFunction h(e.polynomial);
  std::vector<Vec> out;
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 200 * count; ++tries) {
    const auto& c = e.components[static_cast<std::size_t>(tries) % e.components.size()];
    const Vec p = scale(rng) * (c.sample + vec3(g(rng), g(rng), g(rng)));
    const double v = h(p), n3 = std::pow(p.norm(), 3);
    if (!(v > 1e-2 * n3) || !satisfies(c.predicate, p / std::cbrt(v))) continue;
    if (psr_point_test(h, p).verdict != PsrVerdict::psr_point) continue;
    if (std::abs(h.jet(p, 2).hess.determinant()) < 1e-3 * n3) continue;
    out.push_back(p);
  }
  return out;
}

struct Case {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Verdict&)> body;
};

// ---------------------------------------------------------------------------

void stu_constants(Verdict& v) {
  std::mt19937_64 rng(1);
  const HomogeneousFunction h(parse_polynomial("x*y*z"));
  double worst_s = 0, worst_r = 0;
  for (int i = 0; i < 100; ++i) {
    const RMapContext c(h, random_stu_point(rng));
    worst_s = std::max(worst_s, std::abs(scalar_curvature(c) + 6));
    worst_r = std::max(worst_r, (ricci(c) + 2 * rmap_metric_only(c)).cwiseAbs().maxCoeff());
  }
  v.check(worst_s <= 1e-9, "max|scal+6| = " + num(worst_s) + " (tol 1e-9)");
  v.check(worst_r < 1e-9, "max|Ric+2g| = " + num(worst_r) + " (tol 1e-9)");
}

void homogeneous_b(Verdict& v) {
  std::mt19937_64 rng(2);
  const HomogeneousFunction h(parse_polynomial("x*(x*y-z^2)"));
  double worst = 0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, std::abs(scalar_curvature(RMapContext(h, random_b_point(rng))) + 7.5));
  v.check(worst <= 1e-9, "max|scal+7.5| = " + num(worst) + " (tol 1e-9)");
}

void quantum_stu(Verdict& v) {
  const auto p = scal_range_preset("c");
  ScalScanOptions opt;
  opt.grid = 200;
  opt.workers = workers();
  const auto r = scal_scan(HomogeneousFunction(p.polynomial), p.slice, p.probes, opt);
  v.check(r.min > -7.5 && r.max < -6.0,
          "200x200 grid (" + std::to_string(r.samples.size()) + " pts) in [" + num(r.min) + ", " + num(r.max) + "] within (-7.5,-6)");
  const double expected[] = {-7.5, -6.0};
  for (std::size_t i = 0; i < r.boundary_limits.size(); ++i) {
    const auto& b = r.boundary_limits[i];
    v.check(std::abs(b.value - expected[i]) <= 1e-3,
            "limit " + b.stratum + " = " + num(b.value) + " vs " + num(expected[i]) + " (tol 1e-3)");
  }
  v.check(r.boundary_limits.size() == 2, "two boundary strata probed");
}

void rotational_d(Verdict& v) {
  const auto p = scal_range_preset("d");
  const HomogeneousFunction h(p.polynomial);
  const double axis = scal_at(h, vec3(0, 0, -1));
  v.check(std::abs(axis + 26.0 / 3.0) <= 1e-8, "scal(0,0,-1) = " + num(axis) + " vs -26/3 (tol 1e-8)");
  ScalScanOptions opt;
  opt.grid = 201;
  opt.workers = workers();
  const auto r = scal_scan(h, p.slice, p.probes, opt);
  v.check(r.min >= -26.0 / 3.0 - 1e-8 && r.max < -7.5, "grid image [" + num(r.min) + ", " + num(r.max) + "] in [-26/3, -7.5)");
  v.check(std::abs(r.max + 7.5) <= 1e-2, "observed supremum " + num(r.max) + " within 1e-2 of -7.5");
}

void case_e(Verdict& v) {
  const auto p = scal_range_preset("e");
  const HomogeneousFunction h(p.polynomial);
  double worst = 0, lo = 1e300, hi = -1e300;
  for (int i = 1; i < 2000; ++i) {
    const double y = -i / 2000.0;
    const double s = scal_at(h, vec3(1, y, 0));
    worst = std::max(worst, std::abs(s - (-6 + (12 * y + 9 * y * y) / 2)));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  v.check(worst <= 1e-9, "max|scal(1,y,0) - closed form| = " + num(worst) + " (tol 1e-9)");
  const auto m = refine_minimum_1d(h, p.slice, -0.99, -0.01);
  v.check(std::abs(m.value + 8) <= 1e-9, "min = " + num(m.value));
  v.check(std::abs(m.point(1) + 2.0 / 3.0) <= 1e-6, "argmin y = " + num(m.point(1)) + " vs -2/3 (tol 1e-6)");
  v.check(lo >= -8 - 1e-12 && hi < -6, "slice image [" + num(lo) + ", " + num(hi) + "] in [-8,-6)");
}

void weierstrass_family(Verdict& v) {
  double prev = 1e300;
  bool decreasing = true;
  std::string list;
  double lo = 1e300, hi = -1e300;
  for (double b : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    const double s = weierstrass_scal_minimum(b).value;
    decreasing = decreasing && s < prev;
    prev = s;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    list += (list.empty() ? "" : ", ") + num(s);
  }
  v.check(decreasing, "s_min(b) = [" + list + "] strictly decreasing");
  v.check(lo > -8.7 && hi < -8.0, "all in (-8.7, -8.0)");
}

std::vector<std::pair<const CatalogEntry*, Vec>> random_catalog_points(int total, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<const CatalogEntry*> entries;
  for (const auto& e : catalog())
    if (e.hyperbolic) entries.push_back(&e);
  std::vector<std::pair<const CatalogEntry*, Vec>> pts;
  const int per = (total + static_cast<int>(entries.size()) - 1) / static_cast<int>(entries.size());
  for (const auto* e : entries)
    for (const Vec& p : cone_points(*e, rng, per)) {
      if (static_cast<int>(pts.size()) == total) break;
      pts.emplace_back(e, p);
    }
  return pts;
}

void redundancy(Verdict& v) {
  const auto pts = random_catalog_points(1000, 7);
  double ric = 0, sc = 0;
  for (const auto& [e, p] : pts) {
    const auto b = curvature_bundle(RMapContext(HomogeneousFunction(e->polynomial), p), false);
    ric = std::max(ric, b.ricci_mismatch());
    sc = std::max(sc, b.scal_mismatch() / std::max(1.0, std::abs(b.scal_theorem)));
  }
  v.check(pts.size() == 1000, std::to_string(pts.size()) + " cone points over all hyperbolic entries");
  v.check(ric < 1e-8, "Ricci contraction vs logdet rel " + num(ric) + " (tol 1e-8)");
  v.check(sc < 1e-8, "scal theorem vs corollary rel " + num(sc) + " (tol 1e-8)");

  // difference ladder on the level set, at the component samples and at
  // random points of moderate size
  double lg = 0, lc = 0, lr = 0;
  int rungs = 0;
  std::vector<std::pair<const CatalogEntry*, Vec>> ladder;
  for (const auto& e : catalog())
    if (e.hyperbolic)
      for (const auto& c : e.components) ladder.emplace_back(&e, c.sample);
  for (std::size_t i = 0; i < pts.size(); i += 25) ladder.push_back(pts[i]);
  for (const auto& [e, p] : ladder) {
    const HomogeneousFunction h(e->polynomial);
    const Vec q = p / std::cbrt(h(p));
    if (q.norm() > 5) continue;
    const RMapContext c(h, q);
    const Mat g = rmap_metric_only(c);
    lg = std::max(lg, (metric_from_potential_fd(h, q, 2e-4) - g).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff()));
    const Tensor3 ca = christoffel(c), cf = christoffel_fd(c);
    const Tensor4 ra = riemann(c), rf = riemann_fd(c);
    double sca = 1, sra = 1, dc = 0, dr = 0;
    for (std::size_t k = 0; k < ca.data().size(); ++k) {
      sca = std::max(sca, std::abs(ca.data()[k]));
      dc = std::max(dc, std::abs(ca.data()[k] - cf.data()[k]));
    }
    for (std::size_t k = 0; k < ra.data().size(); ++k) {
      sra = std::max(sra, std::abs(ra.data()[k]));
      dr = std::max(dr, std::abs(ra.data()[k] - rf.data()[k]));
    }
    lc = std::max(lc, dc / sca);
    lr = std::max(lr, dr / sra);
    ++rungs;
  }
  v.check(lg < 1e-6 && lc < 1e-6 && lr < 1e-6, "difference ladder at " + std::to_string(rungs) + " points: K->g " + num(lg) +
                                                    ", g->Gamma " + num(lc) + ", Gamma->R " + num(lr) + " (tol 1e-6)");
}

void inverse_metric(Verdict& v) {
  const auto pts = random_catalog_points(1000, 8);
  double worst = 0;
  for (const auto& [e, p] : pts) {
    const auto m = rmap_metric(RMapContext(HomogeneousFunction(e->polynomial), p));
    worst = std::max(worst, (m.g * m.g_inv_closed - Mat::Identity(3, 3)).cwiseAbs().maxCoeff());
  }
  v.check(pts.size() == 1000 && worst < 1e-10,
          "max|g g_inv - I| = " + num(worst) + " over " + std::to_string(pts.size()) + " points (tol 1e-10)");
}

void reductions(Verdict& v) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2), pa(0.5, 8), frac(-0.95, 0.95);
  double worst_n = 0, worst_r = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = pa(rng), b = frac(rng) * std::sqrt(a * a * a / 27.0);
    const auto n = weierstrass_normalize(a, b);
    const auto target = weierstrass_polynomial(3, n.b_tilde), original = weierstrass_polynomial(a, b);
    const Vec p = vec3(u(rng), u(rng), u(rng));
    worst_n = std::max(worst_n, std::abs(target(n.map * p) - original(p)));
  }
  for (int i = 0; i < 100; ++i) {
    const double b = frac(rng);
    const auto r = reduce_to_R_form(b);
    const Vec p = vec3(u(rng), u(rng), u(rng));
    worst_r = std::max(worst_r, std::abs(r.reduced()(r.map(p)) - weierstrass_polynomial(3, b)(p)));
  }
  v.check(worst_n <= 1e-10, "normalization max value error " + num(worst_n) + " (tol 1e-10)");
  v.check(worst_r <= 1e-10, "R-form max value error " + num(worst_r) + " (tol 1e-10)");
}

void completeness(Verdict& v) {
  std::vector<std::pair<std::string, CatalogEntry>> complete;
  for (const auto& e : complete_surfaces())
    if (e.id != "f") complete.emplace_back(e.id, e);
  for (double b : {-0.5, 0.0, 0.5}) complete.emplace_back("f(b=" + num(b) + ")", surface_f(b));
  for (const auto& [name, e] : complete) {
    const auto r = completeness_probe(HomogeneousFunction(e.polynomial), e.components[0].sample, 32, 50.0, workers());
    v.check(r.budget_reached == 32 && r.max_energy_drift < 1e-5,
            name + " " + std::to_string(r.budget_reached) + "/32 reach 50, drift " + num(r.max_energy_drift));
  }
  for (const char* id : {"3", "5", "6", "7"}) {
    const auto e = catalog_lookup(id);
    for (std::size_t k = 0; k < e.components.size(); ++k) {
      if (e.components[k].complete) continue;
      const auto r = completeness_probe(HomogeneousFunction(e.polynomial), e.components[k].sample, 32, 50.0, workers());
      double shortest = 50;
      for (const auto& s : r.shots)
        if (s.termination == Termination::boundary_hit) shortest = std::min(shortest, s.arclength);
      v.check(r.boundary_hits > 0 && shortest < 50.0, std::string("item ") + id + " component " + std::to_string(k) + ": " +
                                                          std::to_string(r.boundary_hits) + " boundary hits, shortest " +
                                                          num(shortest));
    }
  }
}

void determinant_identities(Verdict& v) {
  const std::pair<const char*, const char*> cases[] = {
      {"z*(x^2+y^2)", "-8*z*(x^2+y^2)"},
      {"x*(x^2+y^2+z^2)", "8*(4*x^3 - x*(x^2+y^2+z^2))"},
      {"z*(x^2+y^2-z^2)", "-8*(4*z^3 + z*(x^2+y^2-z^2))"},
      {"x*(y^2+z^2)+y^3", "8*(y*(y^2-3*z^2) - x*(y^2+z^2) - y^3)"},
      {"x*(y^2-z^2)+y^3", "8*(x*(y^2-z^2) + y^3 - y*(y^2+3*z^2))"},
      {"x*z^2+y^3", "-24*y*z^2"},
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  for (const auto& [poly, det] : cases) {
    const HomogeneousFunction h(parse_polynomial(poly));
    const auto rhs = parse_polynomial(det);
    for (int i = 0; i < 100; ++i) {
      const Vec p = vec3(u(rng), u(rng), u(rng));
      const double expected = rhs(p);
      worst = std::max(worst, std::abs(h.jet(p, 2).hess.determinant() - expected) / std::max(1.0, std::abs(expected)));
    }
  }
  v.check(worst <= 1e-10, "6 identities x 100 points, max rel error " + num(worst) + " (tol 1e-10)");
}

void rotational_criterion(Verdict& v) {
  const auto r = rotational_profile_case_d(1e6);
  const double lead = r.rho * r.rho * r.f1;
  v.check(std::abs(lead - 0.75) <= 0.0075, "rho^2 f1(1e6) = " + num(lead) + " vs 0.75 (1%)");
  const double oracle = std::sqrt(3.0) / 2 * std::log(2.0);
  for (double P : {1e4, 1e5}) {
    const double inc = case_d_tail_integral(P, 2 * P);
    v.check(std::abs(inc - oracle) <= 0.05 * oracle,
            "int_" + num(P) + "^" + num(2 * P) + " sqrt(f1) = " + num(inc) + " vs " + num(oracle) + " (5%)");
  }
}

void case_f_bound(Verdict& v) {
  double worst = 1e300;
  for (double R : {-5.0, 0.0, 5.0})
    for (int i = 0; i < 100; ++i)
      for (int k = 0; k < 100; ++k) {
        const double s = 0.01 + 9.99 * i / 99.0, t = -5 + 10.0 * k / 99.0;
        const auto m = weierstrass_st_metric(s, t, R);
        worst = std::min({worst, m.residual_E, m.residual_G});
      }
  v.check(worst >= -1e-9, "min residual " + num(worst) + " over 100x100x3 (s,t,R) grid (tol -1e-9)");
}

}  // namespace

int main() {
  const std::vector<Case> cases = {
      {1, "STU constants", 1, stu_constants},
      {2, "homogeneous x(xy-z^2)", 1, homogeneous_b},
      {3, "quantum STU range", 30, quantum_stu},
      {4, "example d range", 30, rotational_d},
      {5, "example e slice", 5, case_e},
      {6, "Weierstrass family minima", 120, weierstrass_family},
      {7, "formula redundancy", 60, redundancy},
      {8, "inverse metric identity", 5, inverse_metric},
      {9, "reductions", 5, reductions},
      {10, "completeness evidence", 300, completeness},
      {11, "determinant identities", 1, determinant_identities},
      {12, "rotational criterion", 1, rotational_criterion},
      {13, "case f lower bound", 10, case_f_bound},
  };
  int failed = 0;
  for (const auto& c : cases) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs <= c.budget_seconds, "time " + num(secs) + " s (budget " + num(c.budget_seconds) + " s)");
    if (!v.pass) ++failed;
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(cases.size()) - failed, cases.size());
  return failed == 0 ? 0 : 1;
}
