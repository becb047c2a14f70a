// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qucc/integrals.hpp"
#include "qucc/ucc.hpp"

namespace qucc {

struct RankedFactor {
  Excitation excitation;
  double amplitude = 0.0;   // MP2 t amplitude (0 for singles)
  double seed_angle = 0.0;  // arctan(amplitude)
};

/// All singles+doubles from the reference, sorted by descending |MP2
/// amplitude|; singles carry amplitude 0 and sort after every nonzero
/// double. Ties break by canonical excitation order.
struct RankedFactors {
  std::vector<RankedFactor> entries;
};

/// t_ij^ab = <ab||ij> / (eps_i + eps_j - eps_a - eps_b) for every
/// enumerated double. Throws on near-degenerate denominators.
RankedFactors mp2_amplitudes(const IntegralSet& ints, Determinant reference);

/// MP2 correlation energy (always <= 0 for a ground-state HF reference).
double mp2_energy(const IntegralSet& ints, Determinant reference);

/// Splits the ranking at L: the first L entries become the large set (seed
/// angles attached), the rest the small set (angles zero).
std::pair<FactorList, FactorList> partition(const RankedFactors& ranked,
                                            std::size_t L);

}  // namespace qucc
