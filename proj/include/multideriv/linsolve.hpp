#pragma once

// Exact Gaussian elimination with full pivoting over Q or Q(zeta_2h).

#include <multideriv/scalar.hpp>

#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace multideriv {

template <Scalar K>
struct LinSystem {
  std::size_t cols = 0;
  std::vector<std::vector<K>> matrix;  // each row has `cols` entries
  std::vector<K> rhs;
  K zero{};  // fixes the field when every entry is zero

  LinSystem() = default;
  LinSystem(std::size_t rows, std::size_t ncols, const K& zero_value)
      : cols(ncols), matrix(rows, std::vector<K>(ncols, zero_value)), rhs(rows, zero_value), zero(zero_value) {}

  std::size_t rows() const { return matrix.size(); }

  void add_row(std::vector<K> row, K b) {
    if (row.size() != cols) throw std::invalid_argument("LinSystem row has wrong length");
    matrix.push_back(std::move(row));
    rhs.push_back(std::move(b));
  }
};

enum class SolveStatus { Unique, NoSolution, Parametric };

template <Scalar K>
struct LinSolution {
  SolveStatus status = SolveStatus::NoSolution;
  std::size_t rank = 0;
  std::vector<K> particular;               // empty when there is no solution
  std::vector<std::vector<K>> nullspace;   // basis of the homogeneous solutions
};

/// Reduces [matrix | rhs] to reduced row echelon form. Among the remaining entries
/// the pivot is the one with the fewest nonzero field coordinates, then the fewest bits.
template <Scalar K>
LinSolution<K> solve_linear(const LinSystem<K>& sys) {
  const std::size_t m = sys.rows();
  const std::size_t n = sys.cols;
  if (sys.rhs.size() != m) throw std::invalid_argument("LinSystem rhs length differs from row count");

  K zero = sys.zero;
  bool have_proto = false;
  for (std::size_t i = 0; i < m && !have_proto; ++i) {
    for (const auto& x : sys.matrix[i]) {
      if (!x.is_zero()) { zero = zero_like(x); have_proto = true; break; }
    }
    if (!have_proto && !sys.rhs[i].is_zero()) { zero = zero_like(sys.rhs[i]); have_proto = true; }
  }

  std::vector<std::vector<K>> a(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (sys.matrix[i].size() != n) throw std::invalid_argument("LinSystem row has wrong length");
    a[i] = sys.matrix[i];
    a[i].push_back(sys.rhs[i]);
  }
  std::vector<std::size_t> perm(n);  // perm[k] = original column at position k
  std::iota(perm.begin(), perm.end(), 0);

  std::size_t rank = 0;
  while (rank < m && rank < n) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::pair<int, std::size_t> best_cost{0, 0};
    for (std::size_t i = rank; i < m; ++i) {
      for (std::size_t k = rank; k < n; ++k) {
        const K& v = a[i][perm[k]];
        if (v.is_zero()) continue;
        auto c = pivot_cost(v);
        if (!best || c < best_cost) { best = {i, k}; best_cost = c; }
      }
    }
    if (!best) break;
    auto [pi, pk] = *best;
    std::swap(a[rank], a[pi]);
    std::swap(perm[rank], perm[pk]);
    const std::size_t pc = perm[rank];

    K inv = a[rank][pc].inverse();
    for (auto& x : a[rank]) {
      if (!x.is_zero()) x = x * inv;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || a[i][pc].is_zero()) continue;
      K f = a[i][pc];
      for (std::size_t c = 0; c <= n; ++c) {
        if (!a[rank][c].is_zero()) a[i][c] = a[i][c] - f * a[rank][c];
      }
    }
    ++rank;
  }

  LinSolution<K> out;
  out.rank = rank;
  for (std::size_t i = rank; i < m; ++i) {
    if (!a[i][n].is_zero()) {
      out.status = SolveStatus::NoSolution;
      return out;
    }
  }
  out.particular.assign(n, zero);
  for (std::size_t i = 0; i < rank; ++i) out.particular[perm[i]] = a[i][n];
  for (std::size_t f = rank; f < n; ++f) {
    // free variable = 1, pivots follow from the reduced rows
    std::vector<K> v(n, zero);
    v[perm[f]] = one_like(zero);
    for (std::size_t i = 0; i < rank; ++i) v[perm[i]] = -a[i][perm[f]];
    out.nullspace.push_back(std::move(v));
  }
  out.status = rank == n ? SolveStatus::Unique : SolveStatus::Parametric;
  return out;
}

}  // namespace multideriv
