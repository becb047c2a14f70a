// SPDX-License-Identifier: Apache-2.0
#include "qucc/determinant.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qucc {

int Determinant::popcount() const noexcept { return std::popcount(bits); }

int Determinant::count_below(int p) const noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << p) - 1;
  return std::popcount(bits & mask);
}

std::vector<int> Determinant::occupied_list(int n_spin_orbitals) const {
  std::vector<int> occ;
  occ.reserve(static_cast<std::size_t>(popcount()));
  for (int p = 0; p < n_spin_orbitals; ++p)
    if (occupied(p)) occ.push_back(p);
  return occ;
}

Determinant Determinant::aufbau(int n_spatial, int n_alpha, int n_beta) {
  Determinant d;
  for (int i = 0; i < n_alpha; ++i) d.set(i);
  for (int i = 0; i < n_beta; ++i) d.set(n_spatial + i);
  return d;
}

std::optional<std::pair<Determinant, int>> apply_second_quantized(
    Determinant det, std::span<const int> creators,
    std::span<const int> annihilators, int n_spin_orbitals) {
  auto check = [n_spin_orbitals](int p) {
    if (p < 0 || p >= n_spin_orbitals)
      throw std::out_of_range("spin-orbital index out of range");
  };
  int sign = 1;
  // operator string a+_{c0} a+_{c1} ... a_{a0} a_{a1} ...: rightmost first
  for (auto it = annihilators.rbegin(); it != annihilators.rend(); ++it) {
    check(*it);
    if (!det.occupied(*it)) return std::nullopt;
    if (det.count_below(*it) % 2 != 0) sign = -sign;
    det.clear(*it);
  }
  for (auto it = creators.rbegin(); it != creators.rend(); ++it) {
    check(*it);
    if (det.occupied(*it)) return std::nullopt;
    if (det.count_below(*it) % 2 != 0) sign = -sign;
    det.set(*it);
  }
  return std::make_pair(det, sign);
}

std::optional<std::pair<Determinant, int>> apply_excitation(
    Determinant det, const Excitation& e, int n_spin_orbitals) {
  // stored lists are descending; annihilators must act largest-first, i.e.
  // sit rightmost in the operator string, so they go in ascending order
  const std::vector<int> ann(e.occupied.rbegin(), e.occupied.rend());
  return apply_second_quantized(det, e.virtuals, ann, n_spin_orbitals);
}

std::optional<std::pair<Determinant, int>> apply_deexcitation(
    Determinant det, const Excitation& e, int n_spin_orbitals) {
  const std::vector<int> ann(e.virtuals.rbegin(), e.virtuals.rend());
  return apply_second_quantized(det, e.occupied, ann, n_spin_orbitals);
}

int excitation_degree(Determinant d1, Determinant d2) {
  return std::popcount(d1.bits ^ d2.bits) / 2;
}

std::vector<Excitation> enumerate_excitations(Determinant reference,
                                              int n_spatial, int max_rank) {
  if (max_rank < 1 || max_rank > 2)
    throw std::invalid_argument("max_rank must be 1 or 2");
  const int n_spin = 2 * n_spatial;
  const auto occ = reference.occupied_list(n_spin);
  std::vector<int> vir;
  for (int p = 0; p < n_spin; ++p)
    if (!reference.occupied(p)) vir.push_back(p);

  std::vector<Excitation> out;
  for (int i : occ)
    for (int a : vir)
      if (is_alpha(i, n_spatial) == is_alpha(a, n_spatial))
        out.push_back({{i}, {a}});

  if (max_rank >= 2) {
    auto n_alpha_of = [&](int p, int q) {
      return (is_alpha(p, n_spatial) ? 1 : 0) + (is_alpha(q, n_spatial) ? 1 : 0);
    };
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y)
        for (std::size_t u = 0; u < vir.size(); ++u)
          for (std::size_t v = u + 1; v < vir.size(); ++v) {
            const int i = occ[y], j = occ[x];  // i > j
            const int a = vir[v], b = vir[u];  // a > b
            if (n_alpha_of(i, j) != n_alpha_of(a, b)) continue;
            out.push_back({{i, j}, {a, b}});
          }
  }

  std::sort(out.begin(), out.end(), [](const Excitation& l, const Excitation& r) {
    if (l.rank() != r.rank()) return l.rank() < r.rank();
    if (l.occupied != r.occupied) return l.occupied < r.occupied;
    return l.virtuals < r.virtuals;
  });
  return out;
}

}  // namespace qucc
