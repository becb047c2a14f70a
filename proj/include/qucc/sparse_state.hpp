// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>

#include "qucc/determinant.hpp"

namespace qucc {

/// Sparse wavefunction: map from determinants to real amplitudes.
///
/// std::map keeps determinants in canonical (integer) order, so iteration,
/// merging and reductions are deterministic regardless of insertion order.
class SparseState {
 public:
  using Map = std::map<Determinant, double>;

  SparseState() = default;
  SparseState(Determinant d, double c) { amps_[d] = c; }

  void add(Determinant d, double c) { amps_[d] += c; }
  void set(Determinant d, double c) { amps_[d] = c; }
  double coeff(Determinant d) const {
    auto it = amps_.find(d);
    return it == amps_.end() ? 0.0 : it->second;
  }

  bool empty() const { return amps_.empty(); }
  std::size_t size() const { return amps_.size(); }
  auto begin() const { return amps_.begin(); }
  auto end() const { return amps_.end(); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [d, c] : amps_) s += c * c;
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  void scale(double f) {
    for (auto& [d, c] : amps_) c *= f;
  }

  /// Drop amplitudes with |c| <= tol (tol = 0 removes exact zeros only).
  void prune(double tol = 0.0) {
    for (auto it = amps_.begin(); it != amps_.end();)
      it = std::abs(it->second) <= tol ? amps_.erase(it) : std::next(it);
  }

 private:
  Map amps_;
};

inline double inner(const SparseState& a, const SparseState& b) {
  // merge-walk over the shared canonical order
  double s = 0.0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first)
      ++ia;
    else if (ib->first < ia->first)
      ++ib;
    else {
      s += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

}  // namespace qucc
