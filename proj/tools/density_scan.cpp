// Finite-range scan of the rank-3 family: counts the m in [1, M] for which
// the three-squares test obstructs an isometry. A demo, not a proof of any
// limiting density.

#include <cstdlib>
#include <iostream>

#include "superlat/isosearch.hpp"

int main(int argc, char** argv) {
  const long limit = argc > 1 ? std::atol(argv[1]) : 6000;
  if (limit < 1) {
    std::cerr << "usage: superlat_density [M >= 1]\n";
    return 2;
  }
  long obstructed = 0;
  long next_report = 1;
  for (long m = 1; m <= limit; ++m) {
    auto cert = superlat::family_obstruction(superlat::Family::ThreeSquaresRank3,
                                             superlat::FamilyParams{m, 0, {}, {}, {}});
    if (cert.verdict == superlat::Verdict::ObstructionThreeSquares) ++obstructed;
    if (m == next_report || m == limit) {
      std::cout << "m <= " << m << ": " << obstructed << " obstructed (" << static_cast<double>(obstructed) / m
                << ")\n";
      next_report *= 10;
    }
  }
  return 0;
}
