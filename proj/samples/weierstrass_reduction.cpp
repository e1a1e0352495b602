// Normal form chain h^{(a,b)} -> h^{(3,b~)} -> y^2 z - x^3 + x z^2 + R x^2 z.
#include <iostream>

#include "psr/psr.hpp"

int main() {
  using namespace psr;
  const double a = 5.0, b = 1.2;

  const auto cl = classify_weierstrass(a, b);
  std::cout << "h = " << weierstrass_polynomial(a, b).to_string() << "\n";
  std::cout << "discriminant " << cl.form.discriminant << ", j = " << cl.form.j.value_or(0.0) << "\n";
  if (!cl.psr_component) return 0;
  std::cout << "PSR component:";
  for (const auto& q : cl.psr_component->predicate) std::cout << "  " << q.to_string();
  std::cout << "\n";

  const auto n = weierstrass_normalize(a, b);
  std::cout << "b~ = " << n.b_tilde << "\n";
  if (std::abs(n.b_tilde) >= 1.0) return 0;

  const auto r = reduce_to_R_form(n.b_tilde);
  std::cout << "R = " << r.R << ", h_R = " << r.reduced().to_string() << "\n";

  // carry the component sample all the way to the R-form
  const Vec p = cl.psr_component->sample;
  const Vec q = r.map(n.map * p);
  std::cout << "h(p) = " << weierstrass_polynomial(a, b)(p) << ", h_R(q) = " << r.reduced()(q) << "\n";
  std::cout << "graph z over (x, y) = (" << q(0) << ", " << q(1) << "): " << graph_z(q(0), q(1), r.R) << " vs " << q(2)
            << "\n";
}
