// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qucc {

/// Slater determinant as an occupation bitmask over spin orbitals.
///
/// Spin orbitals are blocked: indices [0, M) are the alpha spin of spatial
/// orbitals 0..M-1, indices [M, 2M) the beta spin. Supports up to 64 spin
/// orbitals.
struct Determinant {
  std::uint64_t bits = 0;

  constexpr auto operator<=>(const Determinant&) const = default;

  constexpr bool occupied(int p) const noexcept {
    return (bits >> p) & std::uint64_t{1};
  }
  constexpr void set(int p) noexcept { bits |= std::uint64_t{1} << p; }
  constexpr void clear(int p) noexcept { bits &= ~(std::uint64_t{1} << p); }
  int popcount() const noexcept;

  /// Occupied orbitals strictly below p (the fermionic parity counter).
  int count_below(int p) const noexcept;

  std::vector<int> occupied_list(int n_spin_orbitals) const;

  /// Aufbau determinant: lowest n_alpha alpha and n_beta beta spin orbitals.
  static Determinant aufbau(int n_spatial, int n_alpha, int n_beta);
};

inline bool is_alpha(int spin_orbital, int n_spatial) {
  return spin_orbital < n_spatial;
}
inline int spatial_of(int spin_orbital, int n_spatial) {
  return spin_orbital < n_spatial ? spin_orbital : spin_orbital - n_spatial;
}

/// Particle-hole excitation: annihilate `occupied`, create `virtuals`.
/// Both index lists are strictly descending and disjoint.
struct Excitation {
  std::vector<int> occupied;
  std::vector<int> virtuals;

  int rank() const { return static_cast<int>(occupied.size()); }
  auto operator<=>(const Excitation&) const = default;
};

/// Applies the operator string a+_c1 a+_c2 ... a_a1 a_a2 ... to a basis
/// determinant (annihilators right-to-left first, then creators
/// right-to-left). Returns the resulting determinant and the accumulated
/// fermionic sign, or nullopt if the string annihilates the state.
std::optional<std::pair<Determinant, int>> apply_second_quantized(
    Determinant det, std::span<const int> creators,
    std::span<const int> annihilators, int n_spin_orbitals);

/// T|d> for the excitation operator T = a+_{a} a+_{b} a_{j} a_{i} with the
/// stored descending lists {i, j} / {a, b} (annihilators act largest-first,
/// creators smallest-first). Matches the ordering used in the Hamiltonian
/// expansion and the MP2 first-order wavefunction.
std::optional<std::pair<Determinant, int>> apply_excitation(
    Determinant det, const Excitation& e, int n_spin_orbitals);

/// T+|d>, the Hermitian conjugate of apply_excitation's operator string.
std::optional<std::pair<Determinant, int>> apply_deexcitation(
    Determinant det, const Excitation& e, int n_spin_orbitals);

/// popcount(d1 XOR d2) / 2: number of orbitals in which the determinants
/// differ (Slater-Condon case selector).
int excitation_degree(Determinant d1, Determinant d2);

/// All Sz-conserving excitations from `reference` up to max_rank, in
/// canonical order: rank ascending, then lexicographic on (occupied,
/// virtuals).
std::vector<Excitation> enumerate_excitations(Determinant reference,
                                              int n_spatial, int max_rank);

}  // namespace qucc
