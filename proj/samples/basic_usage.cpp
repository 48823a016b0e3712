// Fill the trefoil, read off H_1, and look for a finite quotient in which
// the meridian survives.
#include <iostream>

#include "knotfill.hpp"

int main() {
  using namespace knotfill;

  auto trefoil = torus_knot_group(2, 3);
  std::cout << "meridian:  " << trefoil.meridian() << "\n";
  std::cout << "longitude: " << trefoil.longitude() << "\n";

  for (auto r : {Slope(5, 1), Slope(0, 1), Slope(1, 1)}) {
    auto filling = build_filling(trefoil, r);
    std::cout << "H_1(K(" << to_string(r) << ")) = " << to_string(abelianization(filling)) << "\n";
  }

  auto poincare = build_filling(trefoil, Slope(1, 1));
  if (auto cert = certify_nontrivial(poincare, trefoil.meridian(), default_target_ladder())) {
    std::cout << "certificate: " << to_json(*cert).dump() << "\n";
    std::cout << "rechecked: " << std::boolalpha << verify_certificate(poincare, *cert) << "\n";
  }

  const Word g = commutator(parse_word("x"), parse_word("y"));
  auto report = scan(trefoil, g, {Slope(5, 1), Slope(7, 1), Slope(0, 1), Slope(6, 1)});
  for (const auto& [r, v] : report.verdicts) std::cout << to_string(r) << ": " << to_string(v.status) << "\n";
}
