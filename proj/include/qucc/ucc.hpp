// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qucc/determinant.hpp"
#include "qucc/sparse_state.hpp"

namespace qucc {

/// One factorized unitary U = exp[theta (T - T+)] for a single excitation.
struct UccFactor {
  Excitation excitation;
  double angle = 0.0;
};

/// Ordered factor product; index 0 is applied to the reference first.
using FactorList = std::vector<UccFactor>;

/// Applies U(theta) in SU(2) closed form: determinants supporting the
/// excitation (or de-excitation) split into cos/sin branches, everything
/// else passes through unchanged.
SparseState apply_factor(const SparseState& state, const UccFactor& f,
                         int n_spin_orbitals);

/// Applies dU/dtheta: -sin on the projector branch, cos on the image, and
/// unsupported determinants are dropped.
SparseState apply_factor_derivative(const SparseState& state,
                                    const UccFactor& f, int n_spin_orbitals);

/// Applies d2U/dtheta2 (one more angle derivative of the factor).
SparseState apply_factor_second_derivative(const SparseState& state,
                                           const UccFactor& f,
                                           int n_spin_orbitals);

/// U_L ... U_1 |reference>, normalized. Empty list gives {reference: 1}.
SparseState build_state(Determinant reference, const FactorList& factors,
                        int n_spin_orbitals);

/// Same product with dU/dtheta at 1-based position k.
SparseState build_state_with_one_derivative(Determinant reference,
                                            const FactorList& factors,
                                            std::size_t k,
                                            int n_spin_orbitals);

/// Derivative factors at 1-based positions k and m (k == m applies the
/// second derivative of that factor).
SparseState build_state_with_two_derivatives(Determinant reference,
                                             const FactorList& factors,
                                             std::size_t k, std::size_t m,
                                             int n_spin_orbitals);

}  // namespace qucc
