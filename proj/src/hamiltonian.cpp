// SPDX-License-Identifier: Apache-2.0
#include "qucc/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace qucc {

double diagonal_element(Determinant d, const IntegralSet& ints) {
  const auto occ = d.occupied_list(ints.n_spin());
  double e = ints.core_energy();
  for (int i : occ) e += ints.one_body_spin(i, i);
  for (int i : occ)
    for (int j : occ) e += 0.5 * ints.antisymmetrized(i, j, i, j);
  return e;
}

namespace {

// single-excitation element for i -> a on source determinant d, without phase
double single_element(int i, int a, Determinant d, const IntegralSet& ints) {
  double el = ints.one_body_spin(a, i);
  for (int j = 0; j < ints.n_spin(); ++j)
    if (d.occupied(j)) el += ints.antisymmetrized(a, j, i, j);
  return el;
}

}  // namespace

double hamiltonian_element(Determinant d1, Determinant d2,
                           const IntegralSet& ints) {
  const int degree = excitation_degree(d1, d2);
  if (degree == 0) return diagonal_element(d2, ints);
  if (degree > 2) return 0.0;

  const int n_spin = ints.n_spin();
  std::array<int, 2> ann{}, cre{};  // removed from d2 / added to get d1
  int na = 0, nc = 0;
  for (int p = n_spin - 1; p >= 0; --p) {
    const bool in1 = d1.occupied(p), in2 = d2.occupied(p);
    if (in2 && !in1) ann[na++] = p;  // descending
    if (in1 && !in2) cre[nc++] = p;
  }

  double el;
  if (degree == 1)
    el = single_element(ann[0], cre[0], d2, ints);
  else
    el = ints.antisymmetrized(cre[0], cre[1], ann[0], ann[1]);
  if (el == 0.0) return 0.0;

  // annihilators act largest-first: ascending list order
  std::reverse(ann.begin(), ann.begin() + na);
  auto res = apply_second_quantized(d2, std::span<const int>(cre.data(), nc),
                                    std::span<const int>(ann.data(), na),
                                    n_spin);
  return res ? el * res->second : 0.0;
}

void for_each_connection(
    Determinant d, const IntegralSet& ints,
    const std::function<void(Determinant, double)>& visit) {
  const int n_spin = ints.n_spin();
  const int M = ints.n_spatial();
  const auto occ = d.occupied_list(n_spin);
  std::vector<int> vir;
  vir.reserve(n_spin - occ.size());
  for (int p = 0; p < n_spin; ++p)
    if (!d.occupied(p)) vir.push_back(p);

  visit(d, diagonal_element(d, ints));

  for (int i : occ)
    for (int a : vir) {
      if (is_alpha(i, M) != is_alpha(a, M)) continue;
      const double el = single_element(i, a, d, ints);
      if (el == 0.0) continue;
      const std::array<int, 1> cre{a}, ann{i};
      auto res = apply_second_quantized(d, cre, ann, n_spin);
      visit(res->first, el * res->second);
    }

  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y)
      for (std::size_t u = 0; u < vir.size(); ++u)
        for (std::size_t v = u + 1; v < vir.size(); ++v) {
          const int i = occ[y], j = occ[x];  // i > j
          const int a = vir[v], b = vir[u];  // a > b
          const double el = ints.antisymmetrized(a, b, i, j);
          if (el == 0.0) continue;
          const std::array<int, 2> cre{a, b}, ann{j, i};  // a_i acts first
          auto res = apply_second_quantized(d, cre, ann, n_spin);
          visit(res->first, el * res->second);
        }
}

SparseState apply_hamiltonian(const SparseState& state,
                              const IntegralSet& ints) {
  if (state.empty())
    throw std::invalid_argument("apply_hamiltonian: empty state");
  SparseState out;
  for (const auto& [d, c] : state) {
    if (d.popcount() != ints.n_electrons())
      throw std::invalid_argument(
          "apply_hamiltonian: determinant outside the (n_e, Sz) sector");
    for_each_connection(
        d, ints, [&out, c = c](Determinant t, double el) { out.add(t, el * c); });
  }
  return out;
}

double expectation(const SparseState& state, const IntegralSet& ints) {
  const double n2 = state.norm_squared();
  if (n2 <= 0.0) throw std::invalid_argument("expectation: empty state");
  return inner(state, apply_hamiltonian(state, ints)) / n2;
}

}  // namespace qucc
