// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "qucc/integrals.hpp"
#include "qucc/sparse_state.hpp"

namespace qucc {

/// Diagonal matrix element <d|H|d> (core + one-body + Coulomb/exchange).
double diagonal_element(Determinant d, const IntegralSet& ints);

/// Slater-Condon matrix element <d1|H|d2> for arbitrary determinants of the
/// same sector (zero when they differ in more than two orbitals).
double hamiltonian_element(Determinant d1, Determinant d2,
                           const IntegralSet& ints);

/// Visits every determinant connected to `d` through H (including `d`
/// itself), calling visit(det, element) for each nonzero Slater-Condon
/// element. Deterministic visiting order.
void for_each_connection(
    Determinant d, const IntegralSet& ints,
    const std::function<void(Determinant, double)>& visit);

/// Matrix-free H|psi>: per-determinant Slater-Condon expansion, no
/// many-body matrix is ever formed.
SparseState apply_hamiltonian(const SparseState& state,
                              const IntegralSet& ints);

/// <psi|H|psi> / <psi|psi>.
double expectation(const SparseState& state, const IntegralSet& ints);

}  // namespace qucc
