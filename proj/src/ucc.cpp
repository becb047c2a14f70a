// SPDX-License-Identifier: Apache-2.0
#include "qucc/ucc.hpp"

#include <cmath>
#include <stdexcept>

namespace qucc {

namespace {

enum class Branch { unsupported, excite, deexcite };

// A determinant supports the excitation iff all `occupied` are filled and
// all `virtuals` empty; the de-excitation iff the reverse. The two are
// mutually exclusive (the index lists are disjoint).
Branch classify(Determinant d, const Excitation& e) {
  bool exc = true, dex = true;
  for (int i : e.occupied) {
    if (!d.occupied(i)) exc = false;
    if (d.occupied(i)) dex = false;
  }
  for (int a : e.virtuals) {
    if (d.occupied(a)) exc = false;
    if (!d.occupied(a)) dex = false;
  }
  if (exc) return Branch::excite;
  if (dex) return Branch::deexcite;
  return Branch::unsupported;
}

// image determinant and fermionic phase for the supported branch
std::pair<Determinant, int> image_of(Determinant d, const Excitation& e,
                                     Branch br, int n_spin) {
  auto res = br == Branch::excite ? apply_excitation(d, e, n_spin)
                                  : apply_deexcitation(d, e, n_spin);
  if (!res) throw std::logic_error("ucc: classified branch must be applicable");
  return *res;
}

template <typename PerDet>
SparseState transform(const SparseState& state, const UccFactor& f,
                      int n_spin, PerDet per_det) {
  SparseState out;
  for (const auto& [d, c] : state) {
    const Branch br = classify(d, f.excitation);
    per_det(out, d, c, br);
  }
  out.prune(0.0);
  return out;
}

}  // namespace

SparseState apply_factor(const SparseState& state, const UccFactor& f,
                         int n_spin_orbitals) {
  const double cos_t = std::cos(f.angle), sin_t = std::sin(f.angle);
  return transform(state, f, n_spin_orbitals,
                   [&](SparseState& out, Determinant d, double c, Branch br) {
                     if (br == Branch::unsupported) {
                       out.add(d, c);
                       return;
                     }
                     auto [img, phase] =
                         image_of(d, f.excitation, br, n_spin_orbitals);
                     out.add(d, cos_t * c);
                     const double s = br == Branch::excite ? sin_t : -sin_t;
                     out.add(img, s * phase * c);
                   });
}

SparseState apply_factor_derivative(const SparseState& state,
                                    const UccFactor& f, int n_spin_orbitals) {
  const double cos_t = std::cos(f.angle), sin_t = std::sin(f.angle);
  return transform(state, f, n_spin_orbitals,
                   [&](SparseState& out, Determinant d, double c, Branch br) {
                     if (br == Branch::unsupported) return;
                     auto [img, phase] =
                         image_of(d, f.excitation, br, n_spin_orbitals);
                     out.add(d, -sin_t * c);
                     const double s = br == Branch::excite ? cos_t : -cos_t;
                     out.add(img, s * phase * c);
                   });
}

SparseState apply_factor_second_derivative(const SparseState& state,
                                           const UccFactor& f,
                                           int n_spin_orbitals) {
  const double cos_t = std::cos(f.angle), sin_t = std::sin(f.angle);
  return transform(state, f, n_spin_orbitals,
                   [&](SparseState& out, Determinant d, double c, Branch br) {
                     if (br == Branch::unsupported) return;
                     auto [img, phase] =
                         image_of(d, f.excitation, br, n_spin_orbitals);
                     out.add(d, -cos_t * c);
                     const double s = br == Branch::excite ? -sin_t : sin_t;
                     out.add(img, s * phase * c);
                   });
}

SparseState build_state(Determinant reference, const FactorList& factors,
                        int n_spin_orbitals) {
  SparseState psi(reference, 1.0);
  for (const auto& f : factors) psi = apply_factor(psi, f, n_spin_orbitals);
  const double n = psi.norm();
  if (n > 0.0) psi.scale(1.0 / n);
  return psi;
}

SparseState build_state_with_one_derivative(Determinant reference,
                                            const FactorList& factors,
                                            std::size_t k,
                                            int n_spin_orbitals) {
  if (k < 1 || k > factors.size())
    throw std::out_of_range("derivative index out of range");
  SparseState psi(reference, 1.0);
  for (std::size_t i = 0; i < factors.size(); ++i)
    psi = (i + 1 == k)
              ? apply_factor_derivative(psi, factors[i], n_spin_orbitals)
              : apply_factor(psi, factors[i], n_spin_orbitals);
  return psi;
}

SparseState build_state_with_two_derivatives(Determinant reference,
                                             const FactorList& factors,
                                             std::size_t k, std::size_t m,
                                             int n_spin_orbitals) {
  if (k < 1 || k > factors.size() || m < 1 || m > factors.size())
    throw std::out_of_range("derivative index out of range");
  SparseState psi(reference, 1.0);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const bool dk = (i + 1 == k), dm = (i + 1 == m);
    if (dk && dm)
      psi = apply_factor_second_derivative(psi, factors[i], n_spin_orbitals);
    else if (dk || dm)
      psi = apply_factor_derivative(psi, factors[i], n_spin_orbitals);
    else
      psi = apply_factor(psi, factors[i], n_spin_orbitals);
  }
  return psi;
}

}  // namespace qucc
