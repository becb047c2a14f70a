// SPDX-License-Identifier: Apache-2.0
#include "qucc/mp2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qucc {

namespace {

double mp2_denominator(const Excitation& e, const Vector& eps) {
  double d = 0.0;
  for (int i : e.occupied) d += eps[i];
  for (int a : e.virtuals) d -= eps[a];
  if (std::abs(d) < 1e-10)
    throw std::runtime_error(
        "mp2: degenerate orbital denominator for excitation (" +
        std::to_string(e.occupied[0]) + "," + std::to_string(e.occupied[1]) +
        ") -> (" + std::to_string(e.virtuals[0]) + "," +
        std::to_string(e.virtuals[1]) + ")");
  return d;
}

}  // namespace

RankedFactors mp2_amplitudes(const IntegralSet& ints, Determinant reference) {
  const Vector eps = orbital_energies(ints, reference);
  RankedFactors ranked;
  for (const auto& e : enumerate_excitations(reference, ints.n_spatial(), 2)) {
    RankedFactor f;
    f.excitation = e;
    if (e.rank() == 2) {
      const double num = ints.antisymmetrized(e.virtuals[0], e.virtuals[1],
                                              e.occupied[0], e.occupied[1]);
      f.amplitude = num / mp2_denominator(e, eps);
      f.seed_angle = std::atan(f.amplitude);
    }
    ranked.entries.push_back(std::move(f));
  }
  std::stable_sort(ranked.entries.begin(), ranked.entries.end(),
                   [](const RankedFactor& l, const RankedFactor& r) {
                     const double la = std::abs(l.amplitude);
                     const double ra = std::abs(r.amplitude);
                     if (la != ra) return la > ra;
                     if (l.excitation.rank() != r.excitation.rank())
                       return l.excitation.rank() < r.excitation.rank();
                     if (l.excitation.occupied != r.excitation.occupied)
                       return l.excitation.occupied < r.excitation.occupied;
                     return l.excitation.virtuals < r.excitation.virtuals;
                   });
  return ranked;
}

double mp2_energy(const IntegralSet& ints, Determinant reference) {
  const Vector eps = orbital_energies(ints, reference);
  double e = 0.0;
  for (const auto& ex : enumerate_excitations(reference, ints.n_spatial(), 2)) {
    if (ex.rank() != 2) continue;
    const double num = ints.antisymmetrized(ex.virtuals[0], ex.virtuals[1],
                                            ex.occupied[0], ex.occupied[1]);
    if (num == 0.0) continue;
    e += num * num / mp2_denominator(ex, eps);
  }
  return e;
}

std::pair<FactorList, FactorList> partition(const RankedFactors& ranked,
                                            std::size_t L) {
  if (L > ranked.entries.size())
    throw std::out_of_range("partition: L exceeds factor count");
  FactorList large, small;
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const auto& f = ranked.entries[i];
    if (i < L)
      large.push_back({f.excitation, f.seed_angle});
    else
      small.push_back({f.excitation, 0.0});
  }
  return {std::move(large), std::move(small)};
}

}  // namespace qucc
