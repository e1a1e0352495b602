// Full curvature stack of the r-map metric at one point.
#include <iomanip>
#include <iostream>

#include "psr/psr.hpp"

int main() {
  using namespace psr;
  const HomogeneousFunction h(parse_polynomial("x*y*z + x^3"));
  Vec x(3);
  x << -1.0, 2.0, -1.0;

  const RMapContext ctx(h, x);
  const CurvatureBundle b = curvature_bundle(ctx);

  std::cout << std::setprecision(12);
  std::cout << "h = " << h.polynomial()->to_string() << " at (" << x.transpose() << ")\n";
  std::cout << "g =\n" << b.g << "\n";
  std::cout << "Ric =\n" << b.ricci_contraction << "\n";
  std::cout << "scal (full contraction) = " << b.scal_theorem << "\n";
  std::cout << "scal (determinant form) = " << b.scal_corollary << "\n";
  std::cout << "|Ric_contraction - Ric_logdet| = " << b.ricci_mismatch() << "\n";

  // scal is homogeneous of degree 0
  std::cout << "scal at 10x = " << scalar_curvature(ctx.at(10.0 * x)) << "\n";
}
