// SPDX-License-Identifier: Apache-2.0
#include "qucc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace qucc {

namespace {

SparseState raw_product(Determinant reference, const FactorList& factors,
                        int n_spin) {
  SparseState psi(reference, 1.0);
  for (const auto& f : factors) psi = apply_factor(psi, f, n_spin);
  return psi;
}

UccFactor inverted(const UccFactor& f) { return {f.excitation, -f.angle}; }

}  // namespace

std::pair<double, Vector> energy_and_gradient(const IntegralSet& ints,
                                              Determinant reference,
                                              const FactorList& factors) {
  const int n_spin = ints.n_spin();
  const std::size_t n = factors.size();

  // forward sweep, keeping every prefix state
  std::vector<SparseState> prefix(n + 1);
  prefix[0] = SparseState(reference, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    prefix[j + 1] = apply_factor(prefix[j], factors[j], n_spin);

  const SparseState& psi = prefix[n];
  const SparseState hpsi = apply_hamiltonian(psi, ints);
  const double energy = inner(psi, hpsi);

  // adjoint sweep: lambda_k = U_{k+1}^T ... U_N^T H psi
  Vector grad(n);
  SparseState lambda = hpsi;
  for (std::size_t k = n; k >= 1; --k) {
    grad[k - 1] = 2.0 * inner(lambda, apply_factor_derivative(
                                          prefix[k - 1], factors[k - 1], n_spin));
    lambda = apply_factor(lambda, inverted(factors[k - 1]), n_spin);
  }
  return {energy, grad};
}

Vector gradient(const IntegralSet& ints, Determinant reference,
                const FactorList& factors,
                const std::vector<std::size_t>& active) {
  const Vector full = energy_and_gradient(ints, reference, factors).second;
  Vector out(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i] < 1 || active[i] > factors.size())
      throw std::out_of_range("gradient: active index out of range");
    out[i] = full[active[i] - 1];
  }
  return out;
}

Matrix hessian(const IntegralSet& ints, Determinant reference,
               const FactorList& factors, double* max_asymmetry) {
  const int n_spin = ints.n_spin();
  const std::size_t n = factors.size();
  if (n == 0) {
    if (max_asymmetry) *max_asymmetry = 0.0;
    return Matrix::Zero(0, 0);
  }

  std::vector<SparseState> prefix(n + 1);
  prefix[0] = SparseState(reference, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    prefix[j + 1] = apply_factor(prefix[j], factors[j], n_spin);
  const SparseState hpsi = apply_hamiltonian(prefix[n], ints);

  // first derivative states and their H images
  std::vector<SparseState> dpsi(n), h_dpsi(n);
  for (std::size_t k = 0; k < n; ++k) {
    SparseState s = apply_factor_derivative(prefix[k], factors[k], n_spin);
    for (std::size_t j = k + 1; j < n; ++j)
      s = apply_factor(s, factors[j], n_spin);
    h_dpsi[k] = s.empty() ? SparseState() : apply_hamiltonian(s, ints);
    dpsi[k] = std::move(s);
  }

  // lambda_k = U_{k+1}^T ... U_N^T H psi, for k = n..0
  std::vector<SparseState> lambda(n + 1);
  lambda[n] = hpsi;
  for (std::size_t k = n; k >= 1; --k)
    lambda[k - 1] = apply_factor(lambda[k], inverted(factors[k - 1]), n_spin);

  Matrix A(n, n);
  // first term, both index orders (the two evaluation routes differ only
  // by floating-point noise; the difference is the asymmetry diagnostic)
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      A(k, m) = h_dpsi[k].empty() ? 0.0 : 2.0 * inner(dpsi[m], h_dpsi[k]);

  // second term: <H psi | d2_{km} psi>, identical expression for (k,m) and
  // (m,k)
  for (std::size_t m = 0; m < n; ++m) {
    const double diag =
        2.0 * inner(lambda[m + 1],
                    apply_factor_second_derivative(prefix[m], factors[m], n_spin));
    A(m, m) += diag;
    SparseState mu = apply_factor_derivative(prefix[m], factors[m], n_spin);
    for (std::size_t j = m + 1; j < n; ++j) {
      if (mu.empty()) break;
      const double off =
          2.0 * inner(lambda[j + 1],
                      apply_factor_derivative(mu, factors[j], n_spin));
      A(j, m) += off;
      A(m, j) += off;
      mu = apply_factor(mu, factors[j], n_spin);
    }
  }

  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (max_asymmetry) *max_asymmetry = asym;
  A = 0.5 * (A + A.transpose()).eval();
  return A;
}

namespace {

struct LinePoint {
  double alpha, f, df;
};

// cubic-interpolated zoom stage of the strong Wolfe search (Nocedal/Wright)
double zoom(const std::function<LinePoint(double)>& eval, LinePoint lo,
            LinePoint hi, double f0, double df0, double c1, double c2) {
  for (int it = 0; it < 40; ++it) {
    // cubic minimizer of the bracket, with bisection fallback
    double alpha;
    const double d1 = lo.df + hi.df - 3.0 * (lo.f - hi.f) / (lo.alpha - hi.alpha);
    const double disc = d1 * d1 - lo.df * hi.df;
    if (disc >= 0.0) {
      const double d2 = std::sqrt(disc) * (hi.alpha > lo.alpha ? 1.0 : -1.0);
      alpha = hi.alpha - (hi.alpha - lo.alpha) * (hi.df + d2 - d1) /
                             (hi.df - lo.df + 2.0 * d2);
      const double a = std::min(lo.alpha, hi.alpha);
      const double b = std::max(lo.alpha, hi.alpha);
      if (!(alpha > a + 0.1 * (b - a) && alpha < b - 0.1 * (b - a)))
        alpha = 0.5 * (lo.alpha + hi.alpha);
    } else {
      alpha = 0.5 * (lo.alpha + hi.alpha);
    }
    const LinePoint p = eval(alpha);
    if (p.f > f0 + c1 * alpha * df0 || p.f >= lo.f) {
      hi = p;
    } else {
      if (std::abs(p.df) <= -c2 * df0) return p.alpha;
      if (p.df * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = p;
    }
    if (std::abs(hi.alpha - lo.alpha) < 1e-14) break;
  }
  return lo.alpha;
}

double wolfe_line_search(const std::function<LinePoint(double)>& eval,
                         double f0, double df0) {
  const double c1 = 1e-4, c2 = 0.9;
  LinePoint prev{0.0, f0, df0};
  double alpha = 1.0;
  for (int it = 0; it < 30; ++it) {
    const LinePoint p = eval(alpha);
    if (p.f > f0 + c1 * alpha * df0 || (it > 0 && p.f >= prev.f))
      return zoom(eval, prev, p, f0, df0, c1, c2);
    if (std::abs(p.df) <= -c2 * df0) return p.alpha;
    if (p.df >= 0.0) return zoom(eval, p, prev, f0, df0, c1, c2);
    prev = p;
    alpha *= 2.0;
  }
  return alpha;
}

}  // namespace

FactorList optimize_large_angles(const IntegralSet& ints,
                                 Determinant reference, FactorList large,
                                 const QuccConfig& cfg) {
  const std::size_t n = large.size();
  if (n == 0) return large;

  auto angles_of = [&](const FactorList& f) {
    Vector x(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) x[i] = f[i].angle;
    return x;
  };
  auto with_angles = [&](const Vector& x) {
    FactorList f = large;
    for (std::size_t i = 0; i < f.size(); ++i) f[i].angle = x[i];
    return f;
  };
  auto fg = [&](const Vector& x) {
    return energy_and_gradient(ints, reference, with_angles(x));
  };

  Vector x = angles_of(large);
  auto [f, g] = fg(x);
  if (cfg.fd_validation) {
    const Vector fd = finite_difference_gradient(ints, reference, with_angles(x));
    if ((fd - g).cwiseAbs().maxCoeff() > 1e-5)
      throw std::runtime_error(
          "optimize_large_angles: analytic gradient failed the "
          "finite-difference check at the seed point");
  }

  Matrix Hinv = Matrix::Identity(n, n);
  bool first_update = true;
  bool restarted = false;
  for (int it = 0; it < cfg.max_optimizer_iterations; ++it) {
    if (g.cwiseAbs().maxCoeff() <= cfg.gradient_tolerance) return with_angles(x);

    Vector p = -(Hinv * g);
    double df0 = g.dot(p);
    if (df0 >= 0.0) {  // lost positive definiteness; restart from steepest descent
      Hinv = Matrix::Identity(n, n);
      p = -g;
      df0 = g.dot(p);
    }

    Vector x_trial;
    std::pair<double, Vector> fg_trial;
    auto eval = [&](double alpha) {
      x_trial = x + alpha * p;
      fg_trial = fg(x_trial);
      return LinePoint{alpha, fg_trial.first, fg_trial.second.dot(p)};
    };
    const double alpha = wolfe_line_search(eval, f, df0);
    bool progressed = false;
    if (alpha > 0.0) {
      eval(alpha);  // make sure trial matches the accepted step
      progressed = fg_trial.first < f;
    }
    if (!progressed) {
      // the line search found no representable energy decrease; try once
      // more from steepest descent before declaring stagnation
      if (!restarted) {
        Hinv = Matrix::Identity(n, n);
        first_update = true;
        restarted = true;
        continue;
      }
      break;
    }
    restarted = false;

    const Vector s = x_trial - x;
    const Vector y = fg_trial.second - g;
    const double sy = s.dot(y);
    x = x_trial;
    f = fg_trial.first;
    g = fg_trial.second;
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (first_update) {  // standard H0 scaling (Nocedal/Wright eq. 6.20)
        Hinv *= sy / y.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const Matrix I = Matrix::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv *
                 (I - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
  }
  const double gmax = g.cwiseAbs().maxCoeff();
  if (gmax <= cfg.gradient_tolerance) return with_angles(x);
  // The energy can no longer be decreased at double precision (both the BFGS
  // and the steepest-descent direction stagnated).  Accept the point when the
  // remaining gradient sits at the noise floor of the energy itself.
  const double noise_cap = 4.0 * std::sqrt(std::numeric_limits<double>::epsilon()) *
                           (1.0 + std::abs(f));
  if (gmax <= noise_cap) return with_angles(x);
  std::ostringstream msg;
  msg << "optimize_large_angles: no convergence within "
      << cfg.max_optimizer_iterations << " iterations (|g|_inf = "
      << std::scientific << g.cwiseAbs().maxCoeff() << ")";
  throw OptimizationError(msg.str(), with_angles(x), g.cwiseAbs().maxCoeff());
}

SolveReport solve_angle_update(const Matrix& A, const Vector& b,
                               const QuccConfig& cfg) {
  SolveReport rep;
  if (A.size() == 0) {
    rep.delta = Vector(0);
    return rep;
  }
  if (A.isZero(0.0)) {
    if (b.cwiseAbs().maxCoeff() > 0.0)
      throw std::runtime_error(
          "solve_angle_update: A is zero but b is nonzero (unsolvable)");
    rep.delta = Vector::Zero(b.size());
    return rep;
  }

  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  rep.condition = smin > 0.0 ? smax / smin
                             : std::numeric_limits<double>::infinity();

  if (rep.condition <= cfg.svd_condition_cutoff) {
    rep.delta = A.ldlt().solve(-b);
    rep.used_svd = false;
  } else {
    const double cut = smax * 1e-12;
    Vector inv_s = sv;
    for (Eigen::Index i = 0; i < inv_s.size(); ++i)
      inv_s[i] = sv[i] > cut ? 1.0 / sv[i] : 0.0;
    rep.delta = -(svd.matrixV() * inv_s.asDiagonal() *
                  (svd.matrixU().transpose() * b));
    rep.used_svd = true;
  }
  return rep;
}

double quadratic_energy(double e0, const Vector& b, const Matrix& A,
                        const Vector& delta) {
  return e0 + b.dot(delta) + 0.5 * delta.dot(A * delta);
}

QuccResult promote_and_iterate(const IntegralSet& ints, Determinant reference,
                               const RankedFactors& ranked,
                               const QuccConfig& cfg) {
  const std::size_t n_total = ranked.entries.size();
  if (cfg.large_count > n_total)
    throw std::out_of_range("promote_and_iterate: L exceeds factor count");

  QuccResult result;
  result.e_reference = hf_energy(ints, reference);

  // large set as positions into the ranked order, seeded from MP2
  std::vector<std::size_t> large_pos(cfg.large_count);
  for (std::size_t i = 0; i < cfg.large_count; ++i) large_pos[i] = i;
  FactorList large;
  for (std::size_t p : large_pos)
    large.push_back({ranked.entries[p].excitation,
                     ranked.entries[p].seed_angle});
  if (cfg.seed_largest_last) {
    std::reverse(large.begin(), large.end());
    std::reverse(large_pos.begin(), large_pos.end());
  }

  for (int round = 1;; ++round) {
    result.promotion_rounds = round;

    FactorList optimized;
    try {
      optimized = optimize_large_angles(ints, reference, large, cfg);
    } catch (const OptimizationError& e) {
      throw std::runtime_error("promotion round " + std::to_string(round) +
                               ": " + e.what());
    }

    // full ordering: optimized large set first, remaining ranked factors at 0
    std::vector<char> in_large(n_total, 0);
    for (std::size_t p : large_pos) in_large[p] = 1;
    FactorList full = optimized;
    std::vector<std::size_t> small_pos;
    for (std::size_t p = 0; p < n_total; ++p)
      if (!in_large[p]) {
        full.push_back({ranked.entries[p].excitation, 0.0});
        small_pos.push_back(p);
      }

    const SparseState psi0 =
        build_state(reference, optimized, ints.n_spin());
    const double e0 = expectation(psi0, ints);

    std::vector<std::size_t> all(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) all[i] = i + 1;
    const Vector b = gradient(ints, reference, full, all);
    double asym = 0.0;
    const Matrix A = hessian(ints, reference, full, &asym);

    if (cfg.fd_validation) {
      const Vector fd = finite_difference_gradient(ints, reference, full);
      if ((fd - b).cwiseAbs().maxCoeff() > 1e-5)
        throw std::runtime_error(
            "promote_and_iterate: b failed the finite-difference check");
    }

    SolveReport solve;
    try {
      solve = solve_angle_update(A, b, cfg);
    } catch (const std::exception& e) {
      throw std::runtime_error("promotion round " + std::to_string(round) +
                               ": " + e.what());
    }

    // promotion: small singles (optionally doubles) past the threshold
    std::vector<std::size_t> promote;
    for (std::size_t i = 0; i < small_pos.size(); ++i) {
      const std::size_t full_idx = optimized.size() + i;
      const auto& exc = ranked.entries[small_pos[i]].excitation;
      const bool candidate = exc.rank() == 1 || cfg.promote_doubles;
      if (candidate && std::abs(solve.delta[full_idx]) > cfg.promotion_threshold)
        promote.push_back(i);
    }

    if (promote.empty() || round >= cfg.max_promotion_rounds) {
      result.e_ucc_large = e0;
      result.e_qucc = quadratic_energy(e0, b, A, solve.delta);
      result.b_norm = b.norm();
      result.a_condition = solve.condition;
      result.used_svd = solve.used_svd;
      result.hessian_max_asymmetry = asym;
      for (std::size_t i = 0; i < optimized.size(); ++i)
        result.large_angles.emplace_back(i + 1, optimized[i].angle);
      for (std::size_t i = 0; i < small_pos.size(); ++i)
        result.small_angles.emplace_back(optimized.size() + i + 1,
                                         solve.delta[optimized.size() + i]);
      return result;
    }

    // warm start: keep optimized angles, append promoted factors at their
    // solved values
    large = optimized;
    for (std::size_t i : promote) {
      const std::size_t p = small_pos[i];
      const double theta = solve.delta[optimized.size() + i];
      large.push_back({ranked.entries[p].excitation, theta});
      large_pos.push_back(p);
      if (ranked.entries[p].excitation.rank() == 1)
        result.promoted_singles.push_back(ranked.entries[p].excitation);
    }
  }
}

Vector finite_difference_gradient(const IntegralSet& ints,
                                  Determinant reference,
                                  const FactorList& factors, double h) {
  auto energy_at = [&](FactorList f) {
    return expectation(build_state(reference, f, ints.n_spin()), ints);
  };
  Vector g(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    FactorList plus = factors, minus = factors;
    plus[k].angle += h;
    minus[k].angle -= h;
    g[k] = (energy_at(plus) - energy_at(minus)) / (2.0 * h);
  }
  return g;
}

Matrix finite_difference_hessian(const IntegralSet& ints,
                                 Determinant reference,
                                 const FactorList& factors, double h) {
  auto energy_at = [&](FactorList f) {
    return expectation(build_state(reference, f, ints.n_spin()), ints);
  };
  const std::size_t n = factors.size();
  const double e0 = energy_at(factors);
  Matrix A(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    FactorList p = factors, m = factors;
    p[k].angle += h;
    m[k].angle -= h;
    A(k, k) = (energy_at(p) - 2.0 * e0 + energy_at(m)) / (h * h);
    for (std::size_t l = k + 1; l < n; ++l) {
      FactorList pp = factors, pm = factors, mp = factors, mm = factors;
      pp[k].angle += h; pp[l].angle += h;
      pm[k].angle += h; pm[l].angle -= h;
      mp[k].angle -= h; mp[l].angle += h;
      mm[k].angle -= h; mm[l].angle -= h;
      const double v = (energy_at(pp) - energy_at(pm) - energy_at(mp) +
                        energy_at(mm)) /
                       (4.0 * h * h);
      A(k, l) = v;
      A(l, k) = v;
    }
  }
  return A;
}

}  // namespace qucc
