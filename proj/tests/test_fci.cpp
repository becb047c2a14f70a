// SPDX-License-Identifier: Apache-2.0
#include "qucc/fci.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

using namespace qucc;
using qucc::test::load;

TEST_CASE("sector_basis") {
  SUBCASE("H2 sector has four determinants in canonical order") {
    const auto basis = sector_basis(2, 1, 1);
    CHECK(basis.size() == 4);
    CHECK(std::is_sorted(basis.begin(), basis.end()));
    for (const auto& d : basis) {
      CHECK(d.popcount() == 2);
      int na = 0;
      for (int p = 0; p < 2; ++p)
        if (d.occupied(p)) ++na;
      CHECK(na == 1);
    }
  }
  SUBCASE("H6 sector dimension is C(6,3)^2 = 400") {
    CHECK(sector_basis(6, 3, 3).size() == 400);
  }
  SUBCASE("BeH2 sector dimension is C(7,3)^2 = 1225") {
    CHECK(sector_basis(7, 3, 3).size() == 1225);
  }
}

TEST_CASE("H2 ground state against a brute-force dense diagonalization") {
  auto ints = load("h2_0.7414.fcidump");
  const auto basis = sector_basis(2, 1, 1);
  const int n = static_cast<int>(basis.size());

  // independent oracle: assemble H from the second-quantized column builder
  Matrix H = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const auto col = qucc::test::brute_force_column(ints, basis[j]);
    for (int i = 0; i < n; ++i) {
      auto it = col.find(basis[i]);
      if (it != col.end()) H(i, j) = it->second;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);

  const auto sol = fci_solve(ints, 1, 1, 2);
  CHECK(sol.dimension == 4);
  CHECK(sol.energies[0] == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
  CHECK(sol.energies[1] == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-12));
  CHECK(sol.energies[0] < hf_energy(ints, ints.reference()));
}

TEST_CASE("dense and Davidson paths agree") {
  auto ints = load("h6_1.2.fcidump");
  const int n_roots = 3;
  const auto dense = fci_solve(ints, 3, 3, n_roots);           // 400 <= cutoff
  const auto david = fci_solve(ints, 3, 3, n_roots, 10);       // forced iterative
  REQUIRE(dense.dimension == 400);
  for (int k = 0; k < n_roots; ++k) {
    CHECK(david.energies[k] ==
          doctest::Approx(dense.energies[k]).epsilon(1e-9));
    CHECK(david.hf_overlaps[k] ==
          doctest::Approx(dense.hf_overlaps[k]).epsilon(1e-6));
  }
}

TEST_CASE("Davidson roots satisfy the eigenproblem") {
  auto ints = load("h6_0.8.fcidump");
  const int n_roots = 2;
  const auto sol = fci_solve(ints, 3, 3, n_roots, 10);
  for (int k = 0; k < n_roots; ++k) {
    const SparseState& psi = sol.states[k];
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    SparseState residual = apply_hamiltonian(psi, ints);
    for (const auto& [d, c] : psi)
      residual.add(d, -sol.energies[k] * c);
    CHECK(residual.norm() <= 1e-8);
  }
  // orthogonality across roots
  CHECK(std::abs(inner(sol.states[0], sol.states[1])) < 1e-8);
}

TEST_CASE("equilibrium ground state is HF dominated") {
  auto ints = load("h6_0.8.fcidump");
  const auto sol = fci_solve(ints, 3, 3, 1);
  CHECK(sol.hf_overlaps[0] > 0.9);
  const auto track = track_hf_state(sol);
  CHECK(track.index == 0);
  CHECK_FALSE(track.reference_lost);
}

TEST_CASE("track_hf_state on synthetic solutions") {
  FciSolution sol;
  sol.energies = Vector(3);
  sol.energies << -2.0, -1.5, -1.0;
  sol.hf_overlaps = Vector(3);

  SUBCASE("argmax regardless of energy rank") {
    sol.hf_overlaps << 0.2, 0.1, 0.8;
    const auto t = track_hf_state(sol);
    CHECK(t.index == 2);
    CHECK_FALSE(t.reference_lost);
  }
  SUBCASE("ties break toward the lower energy") {
    sol.hf_overlaps << 0.3, 0.7, 0.7 + 1e-12;
    CHECK(track_hf_state(sol).index == 1);
  }
  SUBCASE("reference lost when every overlap is small") {
    sol.hf_overlaps << 0.05, 0.02, 0.01;
    const auto t = track_hf_state(sol);
    CHECK(t.reference_lost);
  }
}

TEST_CASE("ground energy is invariant under FCIDUMP record order") {
  auto ints = load("h4_1.6.fcidump");
  const double e0 = fci_solve(ints, 2, 2, 1).energies[0];

  // reparse with the body records reversed
  const std::string text = ints.serialize();
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::reverse(lines.begin() + 2, lines.end());
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  std::istringstream in2(shuffled);
  auto back = IntegralSet::parse_fcidump(in2);
  CHECK(fci_solve(back, 2, 2, 1).energies[0] ==
        doctest::Approx(e0).epsilon(1e-12));
}
