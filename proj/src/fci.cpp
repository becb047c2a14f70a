// SPDX-License-Identifier: Apache-2.0
#include "qucc/fci.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace qucc {

namespace {

void combinations(int n, int k, int offset, int start, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == k) {
    emit(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i + offset);
    combinations(n, k, offset, i + 1, cur, emit);
    cur.pop_back();
  }
}

struct DetHash {
  std::size_t operator()(const Determinant& d) const noexcept {
    return std::hash<std::uint64_t>{}(d.bits);
  }
};

}  // namespace

std::vector<Determinant> sector_basis(int n_spatial, int n_alpha, int n_beta) {
  std::vector<Determinant> alphas, betas;
  std::vector<int> cur;
  combinations(n_spatial, n_alpha, 0, 0, cur, [&](const std::vector<int>& occ) {
    Determinant d;
    for (int p : occ) d.set(p);
    alphas.push_back(d);
  });
  combinations(n_spatial, n_beta, n_spatial, 0, cur,
               [&](const std::vector<int>& occ) {
                 Determinant d;
                 for (int p : occ) d.set(p);
                 betas.push_back(d);
               });
  std::vector<Determinant> basis;
  basis.reserve(alphas.size() * betas.size());
  for (const auto& a : alphas)
    for (const auto& b : betas) basis.push_back({a.bits | b.bits});
  std::sort(basis.begin(), basis.end());
  return basis;
}

namespace {

FciSolution finish(const IntegralSet& ints,
                   const std::vector<Determinant>& basis,
                   const Vector& energies, const Matrix& vectors) {
  FciSolution sol;
  sol.dimension = basis.size();
  sol.energies = energies;
  const Determinant hf = ints.reference();
  sol.hf_overlaps = Vector(energies.size());
  for (Eigen::Index r = 0; r < energies.size(); ++r) {
    SparseState s;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (vectors(i, r) != 0.0) s.set(basis[i], vectors(i, r));
    sol.hf_overlaps[r] = std::abs(s.coeff(hf));
    sol.states.push_back(std::move(s));
  }
  return sol;
}

FciSolution dense_solve(const IntegralSet& ints,
                        const std::vector<Determinant>& basis, int n_roots) {
  const std::size_t dim = basis.size();
  Matrix H(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    H(i, i) = diagonal_element(basis[i], ints);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double v = excitation_degree(basis[i], basis[j]) <= 2
                           ? hamiltonian_element(basis[i], basis[j], ints)
                           : 0.0;
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  return finish(ints, basis, es.eigenvalues().head(n_roots),
                es.eigenvectors().leftCols(n_roots));
}

FciSolution davidson_solve(const IntegralSet& ints,
                           const std::vector<Determinant>& basis,
                           int n_roots) {
  const std::size_t dim = basis.size();
  std::unordered_map<Determinant, std::size_t, DetHash> index;
  index.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) index[basis[i]] = i;

  Vector diag(dim);
  for (std::size_t i = 0; i < dim; ++i)
    diag[i] = diagonal_element(basis[i], ints);

  auto h_apply = [&](const Vector& x) {
    Vector y = Vector::Zero(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double c = x[i];
      if (c == 0.0) continue;
      for_each_connection(basis[i], ints, [&](Determinant t, double el) {
        y[index.at(t)] += el * c;
      });
    }
    return y;
  };

  const int max_subspace = 12 * n_roots;
  const double res_tol = 1e-9;

  // deterministic start: unit vectors on the lowest-diagonal determinants
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  // One extra full-support vector: unit determinants carry a definite
  // point-group character, so a block of them can be exactly orthogonal to a
  // whole symmetry sector; a dense start vector overlaps every sector.
  const int n_start = n_roots + 1;
  Matrix B(dim, n_start);
  B.setZero();
  for (int r = 0; r < n_roots; ++r) B(order[r], r) = 1.0;
  {
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    Vector extra(dim);
    for (std::size_t i = 0; i < dim; ++i) extra[i] = gauss(rng);
    for (int pass = 0; pass < 2; ++pass)
      extra -= B.leftCols(n_roots) * (B.leftCols(n_roots).transpose() * extra);
    B.col(n_roots) = extra / extra.norm();
  }

  Matrix HB(dim, n_start);
  for (int r = 0; r < n_start; ++r) HB.col(r) = h_apply(B.col(r));

  std::vector<double> residual_history;
  for (int it = 0; it < 1000; ++it) {
    const Matrix T = B.transpose() * HB;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (T + T.transpose()));
    const Vector theta = es.eigenvalues().head(n_roots);
    const Matrix Y = es.eigenvectors().leftCols(n_roots);
    const Matrix X = B * Y;    // Ritz vectors
    const Matrix HX = HB * Y;

    Matrix R(dim, n_roots);
    double worst = 0.0;
    for (int r = 0; r < n_roots; ++r) {
      R.col(r) = HX.col(r) - theta[r] * X.col(r);
      worst = std::max(worst, R.col(r).norm());
    }
    residual_history.push_back(worst);
    if (worst <= res_tol) return finish(ints, basis, theta, X);

    if (B.cols() + n_roots > max_subspace) {  // restart from the Ritz vectors
      B = X;
      HB = HX;
    }

    for (int r = 0; r < n_roots; ++r) {
      if (R.col(r).norm() <= res_tol) continue;
      Vector t(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        const double den = theta[r] - diag[i];
        t[i] = R.col(r)[i] / (std::abs(den) > 1e-8 ? den : (den < 0 ? -1e-8 : 1e-8));
      }
      // orthogonalize against the current subspace (twice, for stability)
      for (int pass = 0; pass < 2; ++pass) t -= B * (B.transpose() * t);
      const double nrm = t.norm();
      if (nrm < 1e-10) continue;
      t /= nrm;
      B.conservativeResize(Eigen::NoChange, B.cols() + 1);
      B.col(B.cols() - 1) = t;
      HB.conservativeResize(Eigen::NoChange, HB.cols() + 1);
      HB.col(HB.cols() - 1) = h_apply(t);
    }
  }
  std::ostringstream msg;
  msg << "fci_solve: Davidson failed to reach " << res_tol
      << "; residual history:";
  for (double r : residual_history) msg << " " << r;
  throw std::runtime_error(msg.str());
}

}  // namespace

FciSolution fci_solve(const IntegralSet& ints, int n_alpha, int n_beta,
                      int n_roots, std::size_t dense_cutoff) {
  const auto basis = sector_basis(ints.n_spatial(), n_alpha, n_beta);
  if (basis.size() < static_cast<std::size_t>(n_roots))
    throw std::invalid_argument("fci_solve: more roots than determinants");
  return basis.size() <= dense_cutoff ? dense_solve(ints, basis, n_roots)
                                      : davidson_solve(ints, basis, n_roots);
}

TrackResult track_hf_state(const FciSolution& sol) {
  TrackResult res;
  double best = -1.0;
  for (Eigen::Index r = 0; r < sol.hf_overlaps.size(); ++r) {
    // ties within 1e-9 keep the earlier (lower-energy) root
    if (sol.hf_overlaps[r] > best + 1e-9) {
      best = sol.hf_overlaps[r];
      res.index = static_cast<int>(r);
    }
  }
  res.reference_lost = best < 0.1;
  return res;
}

}  // namespace qucc
