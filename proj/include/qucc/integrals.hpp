// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qucc/determinant.hpp"
#include "qucc/types.hpp"

namespace qucc {

/// One- and two-electron integrals in the spatial-orbital MO basis, plus the
/// core (nuclear repulsion / frozen core) energy. Immutable after parsing.
///
/// Two-body integrals are chemists'-notation (pq|rs), stored with the full
/// 8-fold permutational symmetry. Spin-orbital matrix elements are
/// synthesized on the fly from the restricted spatial values.
class IntegralSet {
 public:
  /// Parses a Molpro-style FCIDUMP stream (1-based indices; `p q 0 0` rows
  /// are one-body, `0 0 0 0` is the core energy). Throws std::runtime_error
  /// with a line number on malformed input.
  static IntegralSet parse_fcidump(std::istream& in);
  static IntegralSet from_file(const std::string& path);

  /// Builds an empty (all-zero) set; used by tests for synthetic systems.
  IntegralSet(int n_spatial, int n_electrons, int ms2, double core_energy);

  int n_spatial() const { return n_spatial_; }
  int n_spin() const { return 2 * n_spatial_; }
  int n_electrons() const { return n_electrons_; }
  int ms2() const { return ms2_; }
  int n_alpha() const { return (n_electrons_ + ms2_) / 2; }
  int n_beta() const { return (n_electrons_ - ms2_) / 2; }
  double core_energy() const { return core_energy_; }

  /// Aufbau reference determinant for this system.
  Determinant reference() const {
    return Determinant::aufbau(n_spatial_, n_alpha(), n_beta());
  }

  double one_body(int p, int q) const { return one_body_(p, q); }
  /// Chemists' (pq|rs) over spatial orbitals, any index order.
  double two_body(int p, int q, int r, int s) const {
    return two_body_[two_body_index(p, q, r, s)];
  }

  /// Antisymmetrized physicists' <pq||rs> over spin orbitals.
  double antisymmetrized(int p, int q, int r, int s) const;

  /// Spin-orbital one-body element (zero across spin blocks).
  double one_body_spin(int p, int q) const;

  void set_one_body(int p, int q, double v);
  void set_two_body(int p, int q, int r, int s, double v);

  /// Distinct entries that were stored (by canonical index), for the
  /// integral-count diagnostics.
  std::size_t one_body_stored() const { return one_body_stored_; }
  std::size_t two_body_stored() const { return two_body_stored_; }

  /// Writes the set back out in FCIDUMP form (full numeric precision).
  std::string serialize() const;

  /// Canonical packed index honoring the full 8-fold symmetry.
  static std::size_t two_body_index(int p, int q, int r, int s) {
    const std::size_t pq = pair_index(std::max(p, q), std::min(p, q));
    const std::size_t rs = pair_index(std::max(r, s), std::min(r, s));
    return pair_index(std::max(pq, rs), std::min(pq, rs));
  }

 private:
  static std::size_t pair_index(std::size_t a, std::size_t b) {
    return a * (a + 1) / 2 + b;  // requires a >= b
  }

  int n_spatial_;
  int n_electrons_;
  int ms2_;
  double core_energy_;
  Matrix one_body_;
  std::vector<double> two_body_;  // packed K(K+1)/2, K = M(M+1)/2
  std::size_t one_body_stored_ = 0;
  std::size_t two_body_stored_ = 0;
};

/// Fock diagonal for the given reference: eps_p = h_pp + sum_i <pi||pi>.
/// One value per spin orbital (length 2M).
Vector orbital_energies(const IntegralSet& ints, Determinant reference);

/// E_HF = core + sum_i h_ii + 1/2 sum_ij <ij||ij> over occupied spin
/// orbitals of the reference.
double hf_energy(const IntegralSet& ints, Determinant reference);

}  // namespace qucc
