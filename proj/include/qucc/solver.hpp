// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qucc/hamiltonian.hpp"
#include "qucc/mp2.hpp"
#include "qucc/types.hpp"
#include "qucc/ucc.hpp"

namespace qucc {

struct QuccConfig {
  std::size_t large_count = 0;         ///< L, number of exactly treated factors
  double gradient_tolerance = 1e-8;    ///< inf-norm target for the optimizer
  int max_optimizer_iterations = 500;
  bool fd_validation = false;          ///< cross-check b/A by finite differences
  double promotion_threshold = 1e-4;   ///< |theta| above which a small factor is promoted
  double svd_condition_cutoff = 1e12;
  int max_promotion_rounds = 5;
  bool promote_doubles = false;        ///< singles are always promotion candidates
  bool seed_largest_last = false;      ///< flip the application order of the seeded large set
};

/// Thrown when the quasi-Newton optimizer runs out of iterations; carries
/// the best point seen so far.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(std::string msg, FactorList best, double grad_norm)
      : std::runtime_error(std::move(msg)),
        best_factors(std::move(best)),
        gradient_norm(grad_norm) {}
  FactorList best_factors;
  double gradient_norm;
};

struct SolveReport {
  Vector delta;
  bool used_svd = false;
  double condition = 0.0;
};

struct QuccResult {
  double e_reference = 0.0;  ///< <ref|H|ref>
  double e_ucc_large = 0.0;  ///< energy of the optimized L-factor state
  double e_qucc = 0.0;       ///< quadratic expansion at the solved angles
  /// (1-based index in the full factor ordering, angle)
  std::vector<std::pair<std::size_t, double>> large_angles;
  std::vector<std::pair<std::size_t, double>> small_angles;
  double b_norm = 0.0;
  double a_condition = 0.0;
  bool used_svd = false;
  double hessian_max_asymmetry = 0.0;
  std::vector<Excitation> promoted_singles;
  int promotion_rounds = 0;
};

/// <psi(theta)|H|psi(theta)> together with its full analytic gradient,
/// evaluated by one forward factor sweep and one adjoint sweep.
std::pair<double, Vector> energy_and_gradient(const IntegralSet& ints,
                                              Determinant reference,
                                              const FactorList& factors);

/// b_k = 2 <psi|H|d_k psi> for each 1-based index in `active`.
Vector gradient(const IntegralSet& ints, Determinant reference,
                const FactorList& factors,
                const std::vector<std::size_t>& active);

/// Full N x N Hessian A_km = 2<d_m psi|H|d_k psi> + 2<psi|H|d2_km psi>,
/// exactly symmetrized; max pre-symmetrization asymmetry via out-param.
Matrix hessian(const IntegralSet& ints, Determinant reference,
               const FactorList& factors, double* max_asymmetry = nullptr);

/// Quasi-Newton (BFGS) minimization of the UCC energy over the given
/// factors' angles, strong-Wolfe line search, analytic gradients.
FactorList optimize_large_angles(const IntegralSet& ints,
                                 Determinant reference, FactorList large,
                                 const QuccConfig& cfg);

/// Solves A * delta = -b directly (LDLT) or, past the condition cutoff,
/// through a truncated-SVD pseudoinverse.
SolveReport solve_angle_update(const Matrix& A, const Vector& b,
                               const QuccConfig& cfg);

/// e0 + b . delta + 1/2 delta^T A delta.
double quadratic_energy(double e0, const Vector& b, const Matrix& A,
                        const Vector& delta);

/// Full pipeline: partition at L, optimize the large set, assemble b and A
/// over all N angles, solve, promote large small-set angles, iterate.
QuccResult promote_and_iterate(const IntegralSet& ints, Determinant reference,
                               const RankedFactors& ranked,
                               const QuccConfig& cfg);

/// Central-difference oracles over the same energy functional (used by
/// --fd-check and as an independent route in the tests).
Vector finite_difference_gradient(const IntegralSet& ints,
                                  Determinant reference,
                                  const FactorList& factors, double h = 1e-5);
Matrix finite_difference_hessian(const IntegralSet& ints,
                                 Determinant reference,
                                 const FactorList& factors, double h = 1e-3);

}  // namespace qucc
