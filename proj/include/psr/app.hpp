#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "psr/catalog.hpp"
#include "psr/hyperbolicity.hpp"
#include "psr/psr_metric.hpp"
#include "psr/rmap_curvature.hpp"
#include "psr/scal_scan.hpp"
#include "psr/table.hpp"
#include "psr/weierstrass.hpp"

namespace psr {

inline constexpr int kReportSchemaVersion = 1;

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"classify",     "hyperbolic-scan", "geodesic-probe",  "curvature-at",
                                                 "scal-range",   "weierstrass-reduce", "reproduce-table"};
  return names;
}

struct RunConfig {
  std::string command;
  // polynomial source: exactly one where a polynomial is needed
  std::optional<std::string> poly;
  std::optional<std::string> catalog;
  std::optional<std::pair<double, double>> weierstrass;
  std::optional<double> rform;
  std::vector<std::string> variables = {"x", "y", "z"};

  std::optional<std::vector<double>> point;
  int component = 0;
  int grid = 101;
  double box = 3.0;
  int directions = 32;
  double lmax = 50.0;
  double tolerance = kCrossCheckTolerance;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out;
  bool json = false;
  bool csv = false;
};

/// Exit codes: 0 success, 2 invalid input, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

inline void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& n : command_names()) known = known || n == c.command;
  if (!known) fail(ErrorCode::invalid_argument, "unknown command '" + c.command + "'");
  if (!(c.tolerance > 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  if (c.workers < 1) fail(ErrorCode::invalid_argument, "worker count must be at least 1");
  if (c.grid < 2) fail(ErrorCode::invalid_argument, "grid must be at least 2");
  if (!(c.box > 0.0)) fail(ErrorCode::invalid_argument, "box must be positive");
  if (c.directions < 1) fail(ErrorCode::invalid_argument, "need at least one direction");
  if (!(c.lmax > 0.0)) fail(ErrorCode::invalid_argument, "lmax must be positive");
  if (c.catalog) catalog_lookup(*c.catalog);
}

namespace detail {

inline nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline nlohmann::json mat_json(const Mat& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) j.push_back(vec_json(m.row(i).transpose()));
  return j;
}

inline Vec to_vec(const std::vector<double>& xs) { return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size())); }

struct Source {
  HomogeneousPolynomial poly;
  std::string label;
  std::optional<CatalogEntry> entry;
};

inline Source resolve_source(const RunConfig& c) {
  const int given = static_cast<int>(c.poly.has_value()) + static_cast<int>(c.catalog.has_value()) +
                    static_cast<int>(c.weierstrass.has_value()) + static_cast<int>(c.rform.has_value());
  if (given != 1)
    fail(ErrorCode::invalid_argument, "give exactly one of --poly, --catalog, --weierstrass, --rform");
  Source s;
  if (c.poly) {
    s.poly = parse_polynomial(*c.poly, c.variables);
    s.label = *c.poly;
  } else if (c.catalog) {
    s.entry = catalog_lookup(*c.catalog);
    s.poly = s.entry->polynomial;
    s.label = "catalog " + *c.catalog;
  } else if (c.weierstrass) {
    s.poly = weierstrass_polynomial(c.weierstrass->first, c.weierstrass->second);
    s.label = "weierstrass";
  } else {
    s.poly = r_form_polynomial(*c.rform);
    s.label = "rform";
  }
  return s;
}

inline Vec require_point(const RunConfig& c, std::size_t n) {
  if (!c.point) fail(ErrorCode::invalid_argument, "this command needs --point");
  const Vec p = to_vec(*c.point);
  require_dim(p, n, "--point");
  return p;
}

inline nlohmann::json psr_report_json(const PsrPointReport& r) {
  return {{"point", vec_json(r.point)},
          {"h", r.h},
          {"d", r.d},
          {"neg_hessian_inertia", {r.neg_hessian.n_plus, r.neg_hessian.n_minus, r.neg_hessian.n_zero}},
          {"restricted_form", mat_json(r.restricted)},
          {"restricted_eigenvalues", r.restricted_signature.eigenvalues},
          {"verdict", to_string(r.verdict)}};
}

inline nlohmann::json inequality_json(const std::vector<Inequality>& qs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& q : qs) j.push_back(q.to_string());
  return j;
}

inline std::filesystem::path out_dir(const RunConfig& c) {
  std::filesystem::path p = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::filesystem::create_directories(p);
  return p;
}

template <class Writer>
void write_file(const RunConfig& c, const std::string& name, Writer&& w) {
  std::ofstream f(out_dir(c) / name);
  if (!f) fail(ErrorCode::invalid_argument, "cannot write " + (out_dir(c) / name).string());
  w(f);
}

// --- commands --------------------------------------------------------------

inline nlohmann::json cmd_classify(const RunConfig& c, std::ostream& text) {
  if (c.weierstrass && !c.poly && !c.catalog && !c.rform) {
    const auto [a, b] = *c.weierstrass;
    const auto cl = classify_weierstrass(a, b);
    nlohmann::json j;
    j["polynomial"] = weierstrass_polynomial(a, b).to_string();
    j["a"] = a;
    j["b"] = b;
    j["discriminant"] = cl.form.discriminant;
    j["j_invariant"] = cl.form.j ? nlohmann::json(*cl.form.j) : nlohmann::json(nullptr);
    j["roots"] = cl.form.roots;
    j["connected_components"] = cl.connected_components;
    j["has_psr_component"] = cl.has_psr_component;
    text << "h = " << j["polynomial"].get<std::string>() << "\n"
         << "discriminant = " << cl.form.discriminant << "\n"
         << "components of {h = 1}: " << cl.connected_components << "\n";
    if (cl.psr_component) {
      const HomogeneousFunction h(weierstrass_polynomial(a, b));
      j["b_tilde"] = weierstrass_normalize(a, b).b_tilde;
      j["psr_component"] = {{"predicate", inequality_json(cl.psr_component->predicate)},
                            {"sample", vec_json(cl.psr_component->sample)},
                            {"sample_report", psr_report_json(psr_point_test(h, cl.psr_component->sample))}};
      text << "PSR component: ";
      for (const auto& q : cl.psr_component->predicate) text << q.to_string() << "; ";
      text << "\n";
    } else {
      text << "no PSR component\n";
    }
    return j;
  }
  const Source s = resolve_source(c);
  const HomogeneousFunction h(s.poly);
  nlohmann::json j;
  if (s.entry) {
    j = to_json(*s.entry);
    j["component_reports"] = nlohmann::json::array();
    for (const auto& comp : s.entry->components) {
      const auto rep = psr_point_test(h, comp.sample);
      j["component_reports"].push_back(psr_report_json(rep));
    }
    text << s.entry->id << ": " << s.entry->polynomial.to_string() << ", hyperbolic = " << std::boolalpha
         << s.entry->hyperbolic << ", components = " << s.entry->components.size()
         << " (complete: " << s.entry->complete_components() << ")\n";
  } else {
    j["polynomial"] = s.poly.to_string();
  }
  j["degree"] = s.poly.degree();
  j["n_vars"] = s.poly.n_vars();
  j["hessian_determinant"] = h.hessian_determinant()->to_string();
  if (!s.entry) text << "h = " << s.poly.to_string() << "\ndet Hessian = " << h.hessian_determinant()->to_string() << "\n";
  if (c.point) {
    const auto rep = psr_point_test(h, require_point(c, s.poly.n_vars()));
    j["point_report"] = psr_report_json(rep);
    text << "verdict at point: " << to_string(rep.verdict) << "\n";
  }
  return j;
}

inline nlohmann::json cmd_hyperbolic_scan(const RunConfig& c, std::ostream& text) {
  const Source s = resolve_source(c);
  const HomogeneousFunction h(s.poly);
  const std::size_t n = s.poly.n_vars();
  const Vec lo = Vec::Constant(static_cast<Eigen::Index>(n), -c.box);
  const Vec hi = Vec::Constant(static_cast<Eigen::Index>(n), c.box);
  const auto scan = domain_scan(h, lo, hi, c.grid, c.workers);
  nlohmann::json j;
  j["polynomial"] = s.poly.to_string();
  j["box"] = {-c.box, c.box};
  j["grid"] = c.grid;
  j["grid_points"] = scan.grid_points;
  j["positive_points"] = scan.points.size();
  j["verdict_counts"] = scan.verdict_counts;
  j["components"] = nlohmann::json::array();
  for (const auto& comp : scan.components)
    j["components"].push_back({{"id", comp.id},
                               {"size", comp.size},
                               {"sample", vec_json(comp.sample)},
                               {"touches_degenerate", comp.touches_degenerate}});
  text << "PSR components found: " << scan.components.size() << "\n";
  for (const auto& comp : scan.components)
    text << "  #" << comp.id << " size " << comp.size << (comp.touches_degenerate ? " (touches degenerate locus)" : "")
         << "\n";
  if (c.csv) write_file(c, "scan.csv", [&](std::ostream& os) { write_scan_csv(os, scan); });
  return j;
}

inline nlohmann::json cmd_geodesic_probe(const RunConfig& c, std::ostream& text) {
  const Source s = resolve_source(c);
  const HomogeneousFunction h(s.poly);
  Vec start;
  if (c.point) {
    start = require_point(c, s.poly.n_vars());
    const double v = h(start);
    if (!(v > 0.0)) fail(ErrorCode::non_positive_h, "start point must have h > 0");
    start /= std::pow(v, 1.0 / h.degree());
  } else if (s.entry) {
    if (c.component < 0 || static_cast<std::size_t>(c.component) >= s.entry->components.size())
      fail(ErrorCode::out_of_range, "component index out of range");
    start = s.entry->components[static_cast<std::size_t>(c.component)].sample;
  } else if (c.weierstrass) {
    const auto cl = classify_weierstrass(c.weierstrass->first, c.weierstrass->second);
    if (!cl.psr_component) fail(ErrorCode::not_psr_point, "no PSR component for these parameters");
    start = cl.psr_component->sample;
  } else {
    fail(ErrorCode::invalid_argument, "give --point or a catalog entry");
  }
  const auto probe = completeness_probe(h, start, c.directions, c.lmax, c.workers);
  nlohmann::json j;
  j["polynomial"] = s.poly.to_string();
  j["start"] = vec_json(start);
  j["l_max"] = c.lmax;
  j["directions"] = c.directions;
  j["verdict"] = probe.verdict();
  j["min_arclength"] = probe.min_arclength;
  j["max_energy_drift"] = probe.max_energy_drift;
  j["shots"] = nlohmann::json::array();
  for (const auto& g : probe.shots)
    j["shots"].push_back({{"termination", to_string(g.termination)},
                          {"detail", g.detail},
                          {"arclength", g.arclength},
                          {"energy_drift", g.energy_drift},
                          {"max_level_residual", g.max_level_residual},
                          {"min_abs_d", g.min_abs_d},
                          {"end_point", vec_json(g.end_point)}});
  text << "verdict: " << probe.verdict() << ", min arclength " << probe.min_arclength << " of " << c.lmax
       << ", budget reached " << probe.budget_reached << "/" << c.directions << "\n";
  if (c.csv)
    for (std::size_t k = 0; k < probe.shots.size(); ++k)
      write_file(c, "geodesic_" + std::to_string(k) + ".csv",
                 [&](std::ostream& os) { write_geodesic_csv(os, probe.shots[k]); });
  return j;
}

inline nlohmann::json cmd_curvature_at(const RunConfig& c, std::ostream& text) {
  const Source s = resolve_source(c);
  const HomogeneousFunction h(s.poly);
  const RMapContext ctx(h, require_point(c, s.poly.n_vars()));
  const CurvatureBundle b = curvature_bundle(ctx, true, c.tolerance);
  nlohmann::json j;
  j["polynomial"] = s.poly.to_string();
  j["point"] = vec_json(b.point);
  j["h"] = b.h;
  j["d"] = b.d;
  j["g"] = mat_json(b.g);
  j["g_inv"] = mat_json(b.g_inv);
  j["ricci"] = mat_json(b.ricci_contraction);
  j["scal"] = b.scal_theorem;
  j["scal_corollary"] = b.scal_corollary;
  j["ricci_mismatch"] = b.ricci_mismatch();
  j["scal_mismatch"] = b.scal_mismatch();
  j["tolerance"] = c.tolerance;
  text << std::setprecision(12) << "scal = " << b.scal_theorem << " (corollary route " << b.scal_corollary << ")\n";
  return j;
}

inline nlohmann::json cmd_scal_range(const RunConfig& c, std::ostream& text) {
  std::string id;
  double b = 0.0;
  if (c.weierstrass) {
    b = weierstrass_normalize(c.weierstrass->first, c.weierstrass->second).b_tilde;
    id = "f";
  } else if (c.catalog) {
    id = *c.catalog;
  } else {
    fail(ErrorCode::invalid_argument, "scal-range needs --catalog a..f or --weierstrass a,b");
  }
  const ScalRangePreset p = scal_range_preset(id, b);
  const HomogeneousFunction h(p.polynomial);
  ScalScanOptions opt;
  opt.grid = c.grid;
  opt.workers = c.workers;
  const auto r = scal_scan(h, p.slice, p.probes, opt);
  nlohmann::json j = scal_summary_json(r);
  j["polynomial"] = p.polynomial.to_string();
  j["slice_region"] = inequality_json(p.slice.region);
  j["grid"] = c.grid;
  if (id == "f") {
    const auto m = weierstrass_scal_minimum(b);
    j["b"] = b;
    j["refined_min"] = m.value;
    j["refined_argmin"] = vec_json(m.point);
  }
  text << std::setprecision(10) << "scal range on grid: [" << r.min << ", " << r.max << "]";
  if (r.excluded) text << " (" << r.excluded << " points excluded)";
  text << "\n";
  for (const auto& lim : r.boundary_limits) text << "  limit toward " << lim.stratum << ": " << lim.value << "\n";
  if (c.csv) write_file(c, "scal.csv", [&](std::ostream& os) { write_scal_csv(os, r); });
  return j;
}

/// Max |to(M p) - from(p)| over random points.
inline double reduction_error(const HomogeneousPolynomial& from, const HomogeneousPolynomial& to, const Mat& m,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec p(3);
    p << u(rng), u(rng), u(rng);
    worst = std::max(worst, std::abs(to(m * p) - from(p)));
  }
  return worst;
}

inline nlohmann::json cmd_weierstrass_reduce(const RunConfig& c, std::ostream& text) {
  nlohmann::json j;
  double b;
  if (c.weierstrass) {
    const auto [a, bb] = *c.weierstrass;
    const auto n = weierstrass_normalize(a, bb);
    b = n.b_tilde;
    j["a"] = a;
    j["b"] = bb;
    j["b_tilde"] = b;
    j["normalization_map"] = mat_json(n.map);
    j["normalization_error"] =
        reduction_error(weierstrass_polynomial(a, bb), weierstrass_polynomial(3.0, b), n.map, c.seed);
    text << "b_tilde = " << b << "\n";
  } else if (c.rform) {
    // invert R = -3c / sqrt(1 - 3c^2)
    const double R = *c.rform;
    const double cc = -R / std::sqrt(9.0 + 3.0 * R * R);
    b = (cc * cc * cc - cc) * std::pow(3.0, 1.5) / 2.0;
    j["R"] = R;
    j["b_tilde"] = b;
  } else {
    fail(ErrorCode::invalid_argument, "weierstrass-reduce needs --weierstrass a,b or --rform R");
  }
  if (std::abs(b) < 1.0) {
    const auto r = reduce_to_R_form(b);
    j["c"] = r.c;
    j["R"] = r.R;
    j["newton_residual"] = r.residual;
    j["S"] = mat_json(r.S);
    j["shear"] = mat_json(r.shear);
    j["scale2"] = mat_json(r.scale2);
    j["composed"] = mat_json(r.composed);
    j["inverse"] = mat_json(r.inverse);
    j["r_form"] = r.reduced().to_string();
    j["r_form_error"] = reduction_error(weierstrass_polynomial(3.0, b), r.reduced(), r.inverse, c.seed);
    text << "R = " << r.R << ", h_R = y^2*z - x^3 + x*z^2 + R*x^2*z\n";
  } else {
    j["r_form"] = nullptr;
    text << "|b_tilde| >= 1: no R-form (the PSR component is not of type f)\n";
  }
  return j;
}

inline nlohmann::json cmd_reproduce_table(const RunConfig& c, std::ostream& text, bool& all_pass) {
  TableOptions opt;
  opt.seed = c.seed;
  opt.workers = c.workers;
  const Table t = reproduce_table(opt);
  all_pass = t.pass();
  text << std::left << std::setw(4) << "id" << std::setw(22) << "expected" << std::setw(16) << "min observed"
       << std::setw(16) << "max observed" << std::setw(20) << "completeness"
       << "result\n";
  text << std::setprecision(9);
  for (const auto& r : t.rows) {
    text << std::setw(4) << r.id << std::setw(22) << r.expected_range.substr(0, 21) << std::setw(16)
         << r.scal_min_observed << std::setw(16) << r.scal_max_observed << std::setw(20) << r.completeness_evidence
         << (r.pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& ck : r.checks)
      if (!ck.pass) text << "    failed: " << ck.name << " observed " << ck.observed << " expected " << ck.expected << "\n";
  }
  return to_json(t);
}

}  // namespace detail

/// Runs one command. The report goes to `out` (JSON with --json, text
/// otherwise) and, with --out, to DIR/report.json.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = c.command;
  std::ostringstream text;
  int status = kExitOk;
  try {
    validate(c);
    nlohmann::json result;
    if (c.command == "classify") result = detail::cmd_classify(c, text);
    else if (c.command == "hyperbolic-scan") result = detail::cmd_hyperbolic_scan(c, text);
    else if (c.command == "geodesic-probe") result = detail::cmd_geodesic_probe(c, text);
    else if (c.command == "curvature-at") result = detail::cmd_curvature_at(c, text);
    else if (c.command == "scal-range") result = detail::cmd_scal_range(c, text);
    else if (c.command == "weierstrass-reduce") result = detail::cmd_weierstrass_reduce(c, text);
    else {
      bool pass = true;
      result = detail::cmd_reproduce_table(c, text, pass);
      if (!pass) status = kExitNumerical;
    }
    report["result"] = std::move(result);
  } catch (const Error& e) {
    status = is_numerical(e.code()) ? kExitNumerical : kExitInvalid;
    report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    status = kExitInvalid;
    report["error"] = {{"code", "invalid_argument"}, {"message", e.what()}};
  }
  report["exit_status"] = status;
  if (c.json)
    out << report.dump(2) << "\n";
  else if (report.contains("error"))
    err << "error: " << report["error"]["message"].get<std::string>() << "\n";
  else
    out << text.str();
  if (!c.out.empty()) {
    try {
      detail::write_file(c, "report.json", [&](std::ostream& os) { os << report.dump(2) << "\n"; });
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      if (status == kExitOk) status = kExitInvalid;
    }
  }
  return status;
}

}  // namespace psr
