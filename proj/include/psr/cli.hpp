#pragma once

#include <CLI11.hpp>

#include <cctype>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "psr/app.hpp"

namespace psr {

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) fail(ErrorCode::invalid_argument, flag + ": '" + item + "' is not a number");
    xs.push_back(v);
  }
  if (xs.empty()) fail(ErrorCode::invalid_argument, flag + " needs a value");
  return xs;
}

}  // namespace detail

/// Command-line entry point. Precedence: flags > --config file > defaults.
/// The config file holds flat `key = value` lines named like the long flags.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Hessian and r-map geometry of homogeneous cubic level sets"};
  RunConfig cfg;
  std::string poly, catalog, weierstrass, point, vars;
  double rform = 0.0;

  std::string usage = "command: one of";
  for (const auto& n : command_names()) usage += " " + n;
  app.add_option("command", cfg.command, usage)->required()->check(CLI::IsMember(command_names()));
  app.add_option("--poly", poly, "homogeneous polynomial, e.g. \"x*y*z + x^3\"");
  app.add_option("--catalog", catalog, "catalog id (i..xiii, 1..7, a..f)");
  app.add_option("--weierstrass", weierstrass, "Weierstrass parameters a,b");
  auto* rform_opt = app.add_option("--rform", rform, "R-form parameter R");
  app.add_option("--vars", vars, "comma-separated variable names for --poly (default x,y,z)");
  app.add_option("--point", point, "comma-separated coordinates");
  app.add_option("--component", cfg.component, "catalog component index for geodesic-probe");
  app.add_option("--grid", cfg.grid, "grid points per axis");
  app.add_option("--box", cfg.box, "half-width of the hyperbolic-scan box");
  app.add_option("--directions", cfg.directions, "geodesic directions");
  app.add_option("--lmax", cfg.lmax, "geodesic length budget");
  app.add_option("--tol", cfg.tolerance, "cross-check tolerance");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--workers", cfg.workers, "worker threads");
  app.add_option("--out", cfg.out, "directory for report.json and CSV files");
  app.add_flag("--json", cfg.json, "print the JSON report");
  app.add_flag("--csv", cfg.csv, "write CSV output");
  app.set_config("--config", "", "flat key = value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (!poly.empty()) cfg.poly = poly;
    if (!catalog.empty()) cfg.catalog = catalog;
    if (!weierstrass.empty()) {
      const auto ab = detail::parse_list(weierstrass, "--weierstrass");
      if (ab.size() != 2) fail(ErrorCode::invalid_argument, "--weierstrass needs exactly a,b");
      cfg.weierstrass = std::make_pair(ab[0], ab[1]);
    }
    if (rform_opt->count() > 0) cfg.rform = rform;
    if (!point.empty()) cfg.point = detail::parse_list(point, "--point");
    if (!vars.empty()) {
      cfg.variables.clear();
      std::stringstream ss(vars);
      std::string v;
      while (std::getline(ss, v, ',')) cfg.variables.push_back(v);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return run(cfg, out, err);
}

}  // namespace psr
