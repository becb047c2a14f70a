// SPDX-License-Identifier: Apache-2.0
#include "qucc/determinant.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"

using namespace qucc;

TEST_CASE("apply_second_quantized identity") {
  Determinant d;
  d.set(0);
  d.set(3);
  auto res = apply_second_quantized(d, {}, {}, 8);
  REQUIRE(res.has_value());
  CHECK(res->first == d);
  CHECK(res->second == 1);
}

TEST_CASE("annihilating an empty orbital kills the state") {
  Determinant d;
  d.set(1);
  const std::array<int, 1> ann{0};
  CHECK_FALSE(apply_second_quantized(d, {}, ann, 4).has_value());
}

TEST_CASE("creating an occupied orbital kills the state") {
  Determinant d;
  d.set(2);
  const std::array<int, 1> cre{2};
  CHECK_FALSE(apply_second_quantized(d, cre, {}, 4).has_value());
}

TEST_CASE("parity convention: 0->2 on {0,1}") {
  Determinant d;
  d.set(0);
  d.set(1);
  const std::array<int, 1> cre{2}, ann{0};
  auto res = apply_second_quantized(d, cre, ann, 4);
  REQUIRE(res.has_value());
  Determinant expect;
  expect.set(1);
  expect.set(2);
  CHECK(res->first == expect);
  CHECK(res->second == -1);
}

TEST_CASE("index out of range is a contract violation") {
  Determinant d;
  d.set(0);
  const std::array<int, 1> bad{7};
  const std::array<int, 0> none{};
  CHECK_THROWS_AS(apply_second_quantized(d, bad, none, 4), std::out_of_range);
}

TEST_CASE("excitation_degree") {
  Determinant hf = Determinant::aufbau(3, 2, 2);
  CHECK(excitation_degree(hf, hf) == 0);
  Determinant single = hf;
  single.clear(0);
  single.set(2);
  CHECK(excitation_degree(hf, single) == 1);
  Determinant dbl = single;
  dbl.clear(3);
  dbl.set(5);
  CHECK(excitation_degree(hf, dbl) == 2);
}

namespace {

int count_rank(const std::vector<Excitation>& v, int rank) {
  int n = 0;
  for (const auto& e : v)
    if (e.rank() == rank) ++n;
  return n;
}

}  // namespace

TEST_CASE("excitation counts for the studied systems") {
  struct Case {
    int n_spatial, n_elec, singles, doubles;
  };
  for (const Case c : {Case{6, 6, 18, 99}, Case{8, 8, 32, 328},
                       Case{10, 10, 50, 825}, Case{7, 6, 24, 180}}) {
    const auto ref = Determinant::aufbau(c.n_spatial, c.n_elec / 2, c.n_elec / 2);
    const auto exc = enumerate_excitations(ref, c.n_spatial, 2);
    CHECK(count_rank(exc, 1) == c.singles);
    CHECK(count_rank(exc, 2) == c.doubles);
    CHECK(static_cast<int>(exc.size()) == c.singles + c.doubles);
  }
}

TEST_CASE("H2 enumeration matches a brute-force tuple scan") {
  // independent oracle: scan all (i, a) and ({i,j},{a,b}) index tuples and
  // keep the Sz-conserving ones
  const int M = 2, n_spin = 4;
  const auto ref = Determinant::aufbau(M, 1, 1);
  std::set<std::pair<std::vector<int>, std::vector<int>>> expected;
  auto n_alpha = [&](const std::vector<int>& idx) {
    int n = 0;
    for (int p : idx)
      if (p < M) ++n;
    return n;
  };
  for (int i = 0; i < n_spin; ++i)
    for (int a = 0; a < n_spin; ++a)
      if (ref.occupied(i) && !ref.occupied(a) &&
          n_alpha({i}) == n_alpha({a}))
        expected.insert({{i}, {a}});
  for (int i = 0; i < n_spin; ++i)
    for (int j = 0; j < i; ++j)
      for (int a = 0; a < n_spin; ++a)
        for (int b = 0; b < a; ++b)
          if (ref.occupied(i) && ref.occupied(j) && !ref.occupied(a) &&
              !ref.occupied(b) && n_alpha({i, j}) == n_alpha({a, b}))
            expected.insert({{i, j}, {a, b}});

  const auto exc = enumerate_excitations(ref, M, 2);
  CHECK(count_rank(exc, 1) == 2);
  CHECK(count_rank(exc, 2) == 1);
  std::set<std::pair<std::vector<int>, std::vector<int>>> got;
  for (const auto& e : exc) got.insert({e.occupied, e.virtuals});
  CHECK(got == expected);
}

TEST_CASE("enumerated excitations apply cleanly and preserve the sector") {
  const int M = 6, n_spin = 12;
  const auto ref = Determinant::aufbau(M, 3, 3);
  auto n_alpha_of = [&](Determinant d) {
    int n = 0;
    for (int p = 0; p < M; ++p)
      if (d.occupied(p)) ++n;
    return n;
  };
  for (const auto& e : enumerate_excitations(ref, M, 2)) {
    auto res = apply_second_quantized(ref, e.virtuals, e.occupied, n_spin);
    REQUIRE(res.has_value());
    CHECK(res->first.popcount() == ref.popcount());
    CHECK(n_alpha_of(res->first) == n_alpha_of(ref));
    // reverse application restores the original with sign product +1
    auto back =
        apply_second_quantized(res->first, e.occupied, e.virtuals, n_spin);
    REQUIRE(back.has_value());
    CHECK(back->first == ref);
    CHECK(res->second * back->second == 1);
  }
}

TEST_CASE("operator string then its reverse is the identity (random dets)") {
  std::mt19937 rng(1234);
  const int n_spin = 12;
  for (int trial = 0; trial < 200; ++trial) {
    Determinant d{rng() & ((std::uint64_t{1} << n_spin) - 1)};
    std::vector<int> occ, vir;
    for (int p = 0; p < n_spin; ++p) (d.occupied(p) ? occ : vir).push_back(p);
    if (occ.size() < 2 || vir.size() < 2) continue;
    std::shuffle(occ.begin(), occ.end(), rng);
    std::shuffle(vir.begin(), vir.end(), rng);
    std::vector<int> ann{occ[0], occ[1]}, cre{vir[0], vir[1]};
    std::sort(ann.rbegin(), ann.rend());
    std::sort(cre.rbegin(), cre.rend());
    auto fwd = apply_second_quantized(d, cre, ann, n_spin);
    REQUIRE(fwd.has_value());
    auto back = apply_second_quantized(fwd->first, ann, cre, n_spin);
    REQUIRE(back.has_value());
    CHECK(back->first == d);
    CHECK(fwd->second * back->second == 1);
  }
}
