// Shoots a fan of unit-speed geodesics on a complete and on an incomplete
// component and prints how far each one gets.
#include <iostream>

#include "psr/psr.hpp"

namespace {

void fan(const std::string& id, int component) {
  using namespace psr;
  const CatalogEntry e = catalog_lookup(id);
  const HomogeneousFunction h(e.polynomial);
  const auto& comp = e.components.at(static_cast<std::size_t>(component));
  const auto probe = completeness_probe(h, comp.sample, 12, 30.0);
  std::cout << id << " = " << e.polynomial.to_string() << ", component " << component << " ("
            << (comp.complete ? "complete" : "incomplete") << "): " << probe.verdict() << "\n";
  for (const auto& g : probe.shots)
    std::cout << "  " << to_string(g.termination) << " at arclength " << g.arclength << "\n";
}

}  // namespace

int main() {
  fan("a", 0);
  fan("7", 0);
}
