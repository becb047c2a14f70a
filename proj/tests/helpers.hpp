// SPDX-License-Identifier: Apache-2.0
// Shared test utilities: fixture access and brute-force second-quantization
// oracles kept independent of the library's Slater-Condon dispatch.
#pragma once

#include <array>
#include <map>
#include <string>

#include "qucc/hamiltonian.hpp"
#include "qucc/integrals.hpp"

namespace qucc::test {

inline std::string fixture(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline IntegralSet load(const std::string& name) {
  return IntegralSet::from_file(fixture(name));
}

// physicists' <pq|rs> over spin orbitals, straight from the spatial store
inline double phys(const IntegralSet& ints, int p, int q, int r, int s) {
  const int M = ints.n_spatial();
  if (is_alpha(p, M) != is_alpha(r, M) || is_alpha(q, M) != is_alpha(s, M))
    return 0.0;
  return ints.two_body(spatial_of(p, M), spatial_of(r, M), spatial_of(q, M),
                       spatial_of(s, M));
}

// Brute-force H|d>: loops over every operator index tuple of
// H = sum h_pq a+p aq + 1/2 sum <pq|rs> a+p a+q as ar, using only
// apply_second_quantized. Independent oracle for the Slater-Condon path.
inline std::map<Determinant, double> brute_force_column(
    const IntegralSet& ints, Determinant d) {
  const int n = ints.n_spin();
  std::map<Determinant, double> col;
  col[d] = ints.core_energy();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double v = ints.one_body_spin(p, q);
      if (v == 0.0) continue;
      const std::array<int, 1> cre{p}, ann{q};
      if (auto res = apply_second_quantized(d, cre, ann, n))
        col[res->first] += v * res->second;
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = phys(ints, p, q, r, s);
          if (v == 0.0) continue;
          const std::array<int, 2> cre{p, q}, ann{s, r};
          if (auto res = apply_second_quantized(d, cre, ann, n))
            col[res->first] += 0.5 * v * res->second;
        }
  for (auto it = col.begin(); it != col.end();)
    it = it->second == 0.0 ? col.erase(it) : std::next(it);
  return col;
}

}  // namespace qucc::test
