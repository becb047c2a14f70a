// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "qucc/hamiltonian.hpp"
#include "qucc/types.hpp"

namespace qucc {

struct FciSolution {
  Vector energies;                  ///< ascending
  std::vector<SparseState> states;  ///< normalized eigenvectors
  Vector hf_overlaps;               ///< |<HF|psi_k>| per root
  std::size_t dimension = 0;        ///< C(M, n_alpha) * C(M, n_beta)
};

/// All determinants of the (n_alpha, n_beta) sector in canonical order.
std::vector<Determinant> sector_basis(int n_spatial, int n_alpha, int n_beta);

/// Lowest n_roots eigenpairs of H in the given sector. Dense
/// diagonalization up to `dense_cutoff` determinants, Davidson (diagonal
/// preconditioner, matrix-free H action) beyond it.
FciSolution fci_solve(const IntegralSet& ints, int n_alpha, int n_beta,
                      int n_roots, std::size_t dense_cutoff = 2000);

struct TrackResult {
  int index = 0;               ///< root maximizing |<HF|psi_k>|
  bool reference_lost = false; ///< every overlap below 0.1
};

/// Picks the eigenstate with maximal HF overlap (ties within 1e-9 break
/// toward lower energy).
TrackResult track_hf_state(const FciSolution& sol);

}  // namespace qucc
