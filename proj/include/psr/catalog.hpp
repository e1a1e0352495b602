#pragma once

#include <json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "psr/hyperbolicity.hpp"
#include "psr/parse.hpp"
#include "psr/weierstrass.hpp"

namespace psr {

inline constexpr int kCatalogSchemaVersion = 1;

/// One connected component of {h = 1} with positive definite induced
/// metric, described by strict polynomial inequalities.
struct CatalogComponent {
  std::vector<Inequality> predicate;
  Vec sample;  // on {h = 1}
  bool complete = false;
};

struct CatalogEntry {
  std::string id;
  HomogeneousPolynomial polynomial;
  bool hyperbolic = false;
  std::optional<int> theorem_item;  // item of the completeness classification
  std::vector<CatalogComponent> components;

  int complete_components() const {
    int c = 0;
    for (const auto& comp : components) c += comp.complete;
    return c;
  }
};

inline bool satisfies(const Inequality& q, const Vec& p) {
  const double v = parse_polynomial(q.lhs)(p);
  if (q.op == "<") return v < q.rhs;
  if (q.op == ">") return v > q.rhs;
  fail(ErrorCode::invalid_argument, "unknown comparison '" + q.op + "'");
}

inline bool satisfies(const std::vector<Inequality>& qs, const Vec& p) {
  for (const auto& q : qs)
    if (!satisfies(q, p)) return false;
  return true;
}

namespace detail {

inline Vec raw3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline CatalogComponent component(const HomogeneousPolynomial& h, std::vector<Inequality> pred, Vec raw,
                                  bool complete) {
  const double value = h(raw);
  if (!(value > 0.0)) fail(ErrorCode::non_positive_h, "catalog seed has h <= 0");
  CatalogComponent c;
  c.predicate = std::move(pred);
  c.sample = raw / std::cbrt(value);
  c.complete = complete;
  return c;
}

inline CatalogEntry entry(std::string id, const std::string& poly, bool hyperbolic, std::optional<int> item = {}) {
  CatalogEntry e;
  e.id = std::move(id);
  e.polynomial = parse_polynomial(poly);
  e.hyperbolic = hyperbolic;
  e.theorem_item = item;
  return e;
}

inline std::vector<CatalogComponent> components_for(const std::string& key, const HomogeneousPolynomial& h) {
  const double edge = std::pow(4.0, -1.0 / 3.0);
  std::vector<CatalogComponent> c;
  if (key == "xyz") {
    c.push_back(component(h, {{"x", ">", 0}, {"y", ">", 0}}, raw3(1, 1, 1), true));
    c.push_back(component(h, {{"x", ">", 0}, {"y", "<", 0}}, raw3(1, -1, -1), true));
    c.push_back(component(h, {{"x", "<", 0}, {"y", ">", 0}}, raw3(-1, 1, -1), true));
    c.push_back(component(h, {{"x", "<", 0}, {"y", "<", 0}}, raw3(-1, -1, 1), true));
  } else if (key == "z(x2+y2-z2)") {
    c.push_back(component(h, {{"z", "<", 0}}, raw3(0, 0, -1), true));
  } else if (key == "x(x2+y2-z2)") {
    c.push_back(component(h, {{"x", "<", 0}, {"y + z", ">", 0}}, raw3(-1, -0.5, 1.5), true));
    c.push_back(component(h, {{"x", "<", 0}, {"y + z", "<", 0}}, raw3(-1, 0.5, -1.5), true));
    c.push_back(component(h, {{"x", ">", 0}, {"x", "<", edge}, {"y + z", ">", 0}}, raw3(0.5, 1.375, -0.375), false));
    c.push_back(component(h, {{"x", ">", 0}, {"x", "<", edge}, {"y + z", "<", 0}}, raw3(0.5, -1.375, 0.375), false));
  } else if (key == "(y+z)(x2+y2-z2)") {
    c.push_back(component(h, {{"y + z", "<", 0}}, raw3(1, 0.5, -1.5), true));
  } else if (key == "x(y2+z2)+y3") {
    const Inequality core{"y^3 - 3*y*z^2", ">", 1};
    c.push_back(component(h, {core, {"y", ">", 0}}, raw3(-1.75, 2, 0), false));
    c.push_back(component(h, {core, {"y", "<", 0}, {"z", ">", 0}}, raw3(1, -1, 1), false));
    c.push_back(component(h, {core, {"y", "<", 0}, {"z", "<", 0}}, raw3(1, -1, -1), false));
  } else if (key == "x(y2-z2)+y3") {
    const Inequality core{"y^3 + 3*y*z^2", "<", 1};
    c.push_back(component(h, {core, {"y", "<", 0}, {"y + z", "<", 0}, {"z - y", ">", 0}}, raw3(2, -1, 0), true));
    c.push_back(component(h, {core, {"y - z", ">", 0}, {"y + z", ">", 0}}, raw3(3.5, 0.5, 0), false));
    c.push_back(component(h, {core, {"z - y", ">", 0}, {"y + z", ">", 0}}, raw3(-1, 0, 1), false));
    c.push_back(component(h, {core, {"y - z", ">", 0}, {"y + z", "<", 0}}, raw3(-1, 0, -1), false));
  } else if (key == "xz2+y3") {
    c.push_back(component(h, {{"y", "<", 0}, {"z", ">", 0}}, raw3(2, -1, 1), false));
    c.push_back(component(h, {{"y", "<", 0}, {"z", "<", 0}}, raw3(2, -1, -1), false));
  }
  return c;
}

inline std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string id, const std::string& poly, bool hyperbolic, const std::string& key,
                 std::optional<int> item = {}) {
    CatalogEntry e = entry(std::move(id), poly, hyperbolic, item);
    e.components = components_for(key, e.polynomial);
    out.push_back(std::move(e));
  };
  // reducible cubics
  add("i", "x^3", false, "");
  add("ii", "x^2*y", false, "");
  add("iii", "x*y*(x+y)", false, "");
  add("iv", "x*y*z", true, "xyz", 1);
  add("v", "x*(x^2+y^2)", false, "");
  add("vi", "z*(x^2+y^2)", false, "");
  add("vii", "x*(x^2+y^2+z^2)", false, "");
  add("viii", "z*(x^2+y^2-z^2)", true, "z(x2+y2-z2)", 4);
  add("ix", "x*(x^2+y^2-z^2)", true, "x(x2+y2-z2)", 3);
  add("x", "(y+z)*(x^2+y^2-z^2)", true, "(y+z)(x2+y2-z2)", 2);
  // irreducible singular cubics
  add("xi", "x*(y^2+z^2)+y^3", true, "x(y2+z2)+y3", 6);
  add("xii", "x*(y^2-z^2)+y^3", true, "x(y2-z2)+y3", 5);
  add("xiii", "x*z^2+y^3", true, "xz2+y3", 7);
  // hyperbolic list
  add("1", "x*y*z", true, "xyz", 1);
  add("2", "z*(x^2+y^2-z^2)", true, "z(x2+y2-z2)", 4);
  add("3", "x*(x^2+y^2-z^2)", true, "x(x2+y2-z2)", 3);
  add("4", "(y+z)*(x^2+y^2-z^2)", true, "(y+z)(x2+y2-z2)", 2);
  add("5", "x*(y^2+z^2)+y^3", true, "x(y2+z2)+y3", 6);
  add("6", "x*(y^2-z^2)+y^3", true, "x(y2-z2)+y3", 5);
  add("7", "x*z^2+y^3", true, "xz2+y3", 7);
  return out;
}

}  // namespace detail

/// Complete surface f) for the Weierstrass parameter b in (-1, 1).
inline CatalogEntry surface_f(double b) {
  if (!(std::abs(b) < 1.0)) fail(ErrorCode::out_of_range, "surface f needs |b| < 1");
  CatalogEntry e;
  e.id = "f";
  e.polynomial = weierstrass_polynomial(3.0, b);
  e.hyperbolic = true;
  CatalogComponent c;
  c.predicate = {{"z", "<", 0}, {"2*x - z", ">", 0}};
  c.sample = detail::raw3(0.5, 0.0, -1.0) / std::cbrt(1.0 - b);
  c.complete = true;
  e.components.push_back(c);
  return e;
}

/// The complete surfaces a) to e) (f with b = 0).
inline std::vector<CatalogEntry> complete_surfaces() {
  using detail::component;
  using detail::raw3;
  std::vector<CatalogEntry> out;
  auto add = [&](const std::string& id, const std::string& poly, std::vector<Inequality> pred, Vec raw) {
    CatalogEntry e = detail::entry(id, poly, true);
    e.components.push_back(component(e.polynomial, std::move(pred), std::move(raw), true));
    out.push_back(std::move(e));
  };
  add("a", "x*y*z", {{"x", ">", 0}, {"y", ">", 0}}, raw3(1, 1, 1));
  add("b", "x*(x*y-z^2)", {{"x", ">", 0}}, raw3(1, 1, 0));
  add("c", "x*(y*z+x^2)", {{"x", "<", 0}, {"y", ">", 0}}, raw3(-1, 1, -2));
  add("d", "z*(x^2+y^2-z^2)", {{"z", "<", 0}}, raw3(0, 0, -1));
  add("e", "x*(y^2-z^2)+y^3", {{"y", "<", 0}, {"x", ">", 0}}, raw3(2, -1, 0));
  out.push_back(surface_f(0.0));
  return out;
}

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> all = [] {
    auto c = detail::build_catalog();
    for (auto& s : complete_surfaces()) c.push_back(std::move(s));
    return c;
  }();
  return all;
}

inline CatalogEntry catalog_lookup(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  fail(ErrorCode::unknown_id, "no catalog entry with id '" + id + "'");
}

inline nlohmann::json to_json(const CatalogEntry& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["polynomial"] = e.polynomial.to_string();
  j["degree"] = e.polynomial.degree();
  j["hyperbolic"] = e.hyperbolic;
  if (e.theorem_item) j["theorem_item"] = *e.theorem_item;
  j["complete_components"] = e.complete_components();
  j["components"] = nlohmann::json::array();
  for (const auto& c : e.components) {
    nlohmann::json jc;
    jc["predicate"] = nlohmann::json::array();
    for (const auto& q : c.predicate) jc["predicate"].push_back(q.to_string());
    jc["sample"] = std::vector<double>(c.sample.data(), c.sample.data() + c.sample.size());
    jc["complete"] = c.complete;
    j["components"].push_back(jc);
  }
  return j;
}

inline nlohmann::json catalog_json() {
  nlohmann::json j;
  j["schema_version"] = kCatalogSchemaVersion;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : catalog()) j["entries"].push_back(to_json(e));
  return j;
}

}  // namespace psr
