// SPDX-License-Identifier: Apache-2.0
#include "qucc/ucc.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qucc/mp2.hpp"

using namespace qucc;
using qucc::test::load;

namespace {

// H2: unique double excitation (both electrons 0 -> 1)
const Excitation kH2Double{{2, 0}, {3, 1}};

SparseState random_state(int n_spatial, int n_elec, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  SparseState s;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (2 * n_spatial));
       ++bits) {
    Determinant d{bits};
    if (d.popcount() != n_elec) continue;
    int na = 0;
    for (int p = 0; p < n_spatial; ++p)
      if (d.occupied(p)) ++na;
    if (2 * na != n_elec) continue;
    s.set(d, gauss(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("zero angle is the identity") {
  const Determinant hf = Determinant::aufbau(2, 1, 1);
  SparseState s(hf, 0.8);
  const SparseState out = apply_factor(s, {kH2Double, 0.0}, 4);
  CHECK(out.size() == 1);
  CHECK(out.coeff(hf) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("single factor on HF splits into cos/sin branches") {
  const int n_spin = 4;
  const Determinant hf = Determinant::aufbau(2, 1, 1);
  const double theta = 0.3;
  const SparseState out =
      apply_factor(SparseState(hf, 1.0), {kH2Double, theta}, n_spin);
  auto img = apply_excitation(hf, kH2Double, n_spin);
  REQUIRE(img.has_value());
  CHECK(out.size() == 2);
  CHECK(out.coeff(hf) == doctest::Approx(std::cos(theta)).epsilon(1e-14));
  CHECK(out.coeff(img->first) ==
        doctest::Approx(std::sin(theta) * img->second).epsilon(1e-14));
}

TEST_CASE("applying the inverse angle restores the state") {
  std::mt19937 rng(3);
  const SparseState s = random_state(3, 4, rng);
  const Excitation e{{3, 0}, {5, 2}};
  const SparseState fwd = apply_factor(s, {e, 0.7}, 6);
  const SparseState back = apply_factor(fwd, {e, -0.7}, 6);
  for (const auto& [d, c] : s)
    CHECK(back.coeff(d) == doctest::Approx(c).epsilon(1e-14));
  CHECK(back.size() == s.size());
}

TEST_CASE("unitarity for random states and angles") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> angle(-2.0, 2.0);
  auto ints = load("h4_1.2.fcidump");
  const auto excitations =
      enumerate_excitations(ints.reference(), ints.n_spatial(), 2);
  std::uniform_int_distribution<std::size_t> pick(0, excitations.size() - 1);
  for (int t = 0; t < 30; ++t) {
    const SparseState s = random_state(4, 4, rng);
    const UccFactor f{excitations[pick(rng)], angle(rng)};
    const SparseState out = apply_factor(s, f, 8);
    CHECK(out.norm() == doctest::Approx(s.norm()).epsilon(1e-12));
  }
}

TEST_CASE("SU(2) closure: U(a)U(b) = U(a+b) for one excitation") {
  std::mt19937 rng(5);
  const SparseState s = random_state(3, 4, rng);
  const Excitation e{{3, 0}, {5, 2}};
  const SparseState two_step =
      apply_factor(apply_factor(s, {e, 0.4}, 6), {e, 0.25}, 6);
  const SparseState one_step = apply_factor(s, {e, 0.65}, 6);
  for (const auto& [d, c] : one_step)
    CHECK(two_step.coeff(d) == doctest::Approx(c).epsilon(1e-13));
}

TEST_CASE("factor derivative") {
  const int n_spin = 4;
  const Determinant hf = Determinant::aufbau(2, 1, 1);
  SUBCASE("theta = 0 on HF gives exactly the excited determinant") {
    const SparseState out =
        apply_factor_derivative(SparseState(hf, 1.0), {kH2Double, 0.0}, n_spin);
    auto img = apply_excitation(hf, kH2Double, n_spin);
    CHECK(out.size() == 1);
    CHECK(out.coeff(img->first) == doctest::Approx(img->second).epsilon(1e-15));
  }
  SUBCASE("unsupported determinants are dropped") {
    Determinant open;  // alpha 1, beta 0: supports neither branch
    open.set(1);
    open.set(2);
    const SparseState out = apply_factor_derivative(SparseState(open, 1.0),
                                                    {kH2Double, 0.2}, n_spin);
    CHECK(out.empty());
  }
  SUBCASE("matches a central finite difference") {
    std::mt19937 rng(17);
    const SparseState s = random_state(2, 2, rng);
    const double theta = 0.37, h = 1e-5;
    const SparseState d =
        apply_factor_derivative(s, {kH2Double, theta}, n_spin);
    const SparseState plus = apply_factor(s, {kH2Double, theta + h}, n_spin);
    const SparseState minus = apply_factor(s, {kH2Double, theta - h}, n_spin);
    for (const auto& [det, c] : plus) {
      const double fd = (c - minus.coeff(det)) / (2.0 * h);
      CHECK(d.coeff(det) == doctest::Approx(fd).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("build_state") {
  auto ints = load("h6_1.2.fcidump");
  const Determinant ref = ints.reference();
  SUBCASE("empty factor list") {
    const SparseState s = build_state(ref, {}, ints.n_spin());
    CHECK(s.size() == 1);
    CHECK(s.coeff(ref) == doctest::Approx(1.0));
  }
  SUBCASE("all angles zero") {
    FactorList factors;
    for (const auto& e : enumerate_excitations(ref, ints.n_spatial(), 2))
      factors.push_back({e, 0.0});
    const SparseState s = build_state(ref, factors, ints.n_spin());
    CHECK(s.size() == 1);
    CHECK(s.coeff(ref) == doctest::Approx(1.0));
  }
  SUBCASE("support bounded by 2^L and grows strictly slower for L >= 10") {
    const auto ranked = mp2_amplitudes(ints, ref);
    for (std::size_t L : {4, 10, 14}) {
      auto [large, small] = partition(ranked, L);
      const SparseState s = build_state(ref, large, ints.n_spin());
      CHECK(s.size() <= (std::size_t{1} << L));
      if (L >= 10) CHECK(s.size() < (std::size_t{1} << L));
    }
  }
  SUBCASE("sector preservation") {
    const auto ranked = mp2_amplitudes(ints, ref);
    auto [large, small] = partition(ranked, 20);
    const SparseState s = build_state(ref, large, ints.n_spin());
    for (const auto& [d, c] : s) {
      CHECK(d.popcount() == ref.popcount());
      int na = 0;
      for (int p = 0; p < ints.n_spatial(); ++p)
        if (d.occupied(p)) ++na;
      CHECK(2 * na == ints.n_electrons());
    }
  }
}

TEST_CASE("build_state_with_one_derivative") {
  auto ints = load("h4_1.2.fcidump");
  const Determinant ref = ints.reference();
  const auto ranked = mp2_amplitudes(ints, ref);
  auto [factors, rest] = partition(ranked, 6);

  SUBCASE("single factor at theta = 0") {
    const Excitation e = factors[0].excitation;
    const FactorList one{{e, 0.0}};
    const SparseState d =
        build_state_with_one_derivative(ref, one, 1, ints.n_spin());
    auto img = apply_excitation(ref, e, ints.n_spin());
    CHECK(d.size() == 1);
    CHECK(d.coeff(img->first) == doctest::Approx(img->second));
  }
  SUBCASE("k out of range") {
    CHECK_THROWS_AS(
        build_state_with_one_derivative(ref, factors, 0, ints.n_spin()),
        std::out_of_range);
    CHECK_THROWS_AS(
        build_state_with_one_derivative(ref, factors, 7, ints.n_spin()),
        std::out_of_range);
  }
  SUBCASE("orthogonal to the state (constant norm)") {
    const SparseState psi = build_state(ref, factors, ints.n_spin());
    for (std::size_t k = 1; k <= factors.size(); ++k) {
      const SparseState d =
          build_state_with_one_derivative(ref, factors, k, ints.n_spin());
      CHECK(inner(psi, d) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("matches finite differences of build_state") {
    const double h = 1e-5;
    for (std::size_t k = 1; k <= factors.size(); ++k) {
      const SparseState d =
          build_state_with_one_derivative(ref, factors, k, ints.n_spin());
      FactorList plus = factors, minus = factors;
      plus[k - 1].angle += h;
      minus[k - 1].angle -= h;
      const SparseState sp = build_state(ref, plus, ints.n_spin());
      const SparseState sm = build_state(ref, minus, ints.n_spin());
      for (const auto& [det, c] : sp) {
        const double fd = (c - sm.coeff(det)) / (2.0 * h);
        CHECK(d.coeff(det) == doctest::Approx(fd).epsilon(1e-8).scale(1.0));
      }
    }
  }
}

TEST_CASE("build_state_with_two_derivatives") {
  auto ints = load("h4_1.2.fcidump");
  const Determinant ref = ints.reference();
  const auto ranked = mp2_amplitudes(ints, ref);
  auto [factors, rest] = partition(ranked, 5);

  SUBCASE("k = m on a single factor at theta = 0 gives -|HF>") {
    const FactorList one{{factors[0].excitation, 0.0}};
    const SparseState d =
        build_state_with_two_derivatives(ref, one, 1, 1, ints.n_spin());
    CHECK(d.size() == 1);
    CHECK(d.coeff(ref) == doctest::Approx(-1.0));
  }
  SUBCASE("symmetric in (k, m)") {
    const SparseState a =
        build_state_with_two_derivatives(ref, factors, 2, 4, ints.n_spin());
    const SparseState b =
        build_state_with_two_derivatives(ref, factors, 4, 2, ints.n_spin());
    CHECK(a.size() == b.size());
    for (const auto& [det, c] : a)
      CHECK(b.coeff(det) == doctest::Approx(c).epsilon(1e-14));
  }
  SUBCASE("matches second finite differences") {
    const double h = 1e-4;
    for (const auto [k, m] : {std::pair<std::size_t, std::size_t>{1, 3},
                              {2, 2}, {5, 4}}) {
      const SparseState d =
          build_state_with_two_derivatives(ref, factors, k, m, ints.n_spin());
      auto shifted = [&](double dk, double dm) {
        FactorList f = factors;
        f[k - 1].angle += dk;
        f[m - 1].angle += dm;
        return build_state(ref, f, ints.n_spin());
      };
      if (k == m) {
        const SparseState sp = shifted(h, 0), sm = shifted(-h, 0);
        const SparseState s0 = build_state(ref, factors, ints.n_spin());
        for (const auto& [det, c] : sp) {
          const double fd =
              (c - 2.0 * s0.coeff(det) + sm.coeff(det)) / (h * h);
          CHECK(d.coeff(det) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
      } else {
        const SparseState pp = shifted(h, h), pm = shifted(h, -h);
        const SparseState mp = shifted(-h, h), mm = shifted(-h, -h);
        for (const auto& [det, c] : pp) {
          const double fd = (c - pm.coeff(det) - mp.coeff(det) +
                             mm.coeff(det)) /
                            (4.0 * h * h);
          CHECK(d.coeff(det) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
      }
    }
  }
}
