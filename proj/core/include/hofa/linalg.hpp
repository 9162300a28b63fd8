#pragma once

#include <vector>

namespace hofa {

/// Dense matrix over F_p stored row-major with entries in [0, p).
using FpMatrix = std::vector<std::vector<int>>;

/// Reduced row echelon form; `pivots` receives the pivot column of each
/// nonzero row when non-null. Zero rows are dropped.
FpMatrix rref_mod_p(FpMatrix a, int p, std::vector<int>* pivots = nullptr);

int rank_mod_p(const FpMatrix& a, int p);

/// A basis (as rows) of {x : A x = 0} for an m x cols matrix A.
FpMatrix nullspace_mod_p(const FpMatrix& a, int cols, int p);

/// Inverse of a square invertible matrix; throws InvalidParameter otherwise.
FpMatrix inverse_mod_p(const FpMatrix& a, int p);

/// All r x cols matrices of rank r in reduced row echelon form, ordered by
/// pivot set and then by free entries. Each represents one r-dimensional
/// subspace of F_p^cols.
std::vector<FpMatrix> enumerate_rref(int p, int r, int cols);

/// Number of r-dimensional subspaces of F_p^n.
double gaussian_binomial(int p, int n, int r);

/// Greedy independence tracker for vectors of F_p^n.
class IncrementalBasis {
 public:
  IncrementalBasis(int p, int n) : p_(p), n_(n) {}

  /// Adds v when it is independent of the current vectors; returns whether it was.
  bool add(const std::vector<int>& v);
  /// Independence test without modifying the basis.
  bool is_independent(const std::vector<int>& v) const;
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<int> reduce(std::vector<int> v) const;

  int p_;
  int n_;
  std::vector<std::vector<int>> rows_;
  std::vector<int> pivots_;
};

}  // namespace hofa
