#include "hofa/linalg.hpp"

#include <cmath>
#include <functional>

#include "hofa/errors.hpp"
#include "hofa/field.hpp"

namespace hofa {

FpMatrix rref_mod_p(FpMatrix a, int p, std::vector<int>* pivots) {
  if (pivots) pivots->clear();
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  for (auto& row : a) {
    if (static_cast<int>(row.size()) != cols) throw ShapeError("ragged matrix");
    for (auto& x : row) x = static_cast<int>(mod_floor(x, p));
  }
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i) {
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    const int inv = static_cast<int>(inverse_mod(a[r][c], p));
    for (auto& x : a[r]) x = (x * inv) % p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const int f = a[i][c];
      for (int j = 0; j < cols; ++j) a[i][j] = static_cast<int>(mod_floor(a[i][j] - f * a[r][j], p));
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  a.resize(r);
  return a;
}

int rank_mod_p(const FpMatrix& a, int p) { return static_cast<int>(rref_mod_p(a, p).size()); }

FpMatrix nullspace_mod_p(const FpMatrix& a, int cols, int p) {
  std::vector<int> pivots;
  const FpMatrix r = a.empty() ? FpMatrix{} : rref_mod_p(a, p, &pivots);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  FpMatrix basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<int> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      v[pivots[i]] = static_cast<int>(mod_floor(-r[i][free], p));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

FpMatrix inverse_mod_p(const FpMatrix& a, int p) {
  const int n = static_cast<int>(a.size());
  FpMatrix aug(n, std::vector<int>(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a[i].size()) != n) throw ShapeError("matrix is not square");
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<int> pivots;
  const FpMatrix r = rref_mod_p(aug, p, &pivots);
  if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1) {
    throw InvalidParameter("matrix is singular over F_" + std::to_string(p));
  }
  FpMatrix inv(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv[i][j] = r[i][n + j];
  }
  return inv;
}

std::vector<FpMatrix> enumerate_rref(int p, int r, int cols) {
  std::vector<FpMatrix> out;
  if (r == 0) {
    out.push_back({});
    return out;
  }
  if (r > cols) return out;
  std::vector<int> piv(r);
  std::function<void(int, int)> choose = [&](int idx, int start) {
    if (idx == r) {
      // Free positions: entries right of each pivot that are not pivot columns.
      std::vector<std::pair<int, int>> free;
      for (int i = 0; i < r; ++i) {
        for (int c = piv[i] + 1; c < cols; ++c) {
          bool pivot_col = false;
          for (int q : piv) pivot_col |= (q == c);
          if (!pivot_col) free.emplace_back(i, c);
        }
      }
      std::vector<int> digits(free.size(), 0);
      while (true) {
        FpMatrix m(r, std::vector<int>(cols, 0));
        for (int i = 0; i < r; ++i) m[i][piv[i]] = 1;
        for (std::size_t f = 0; f < free.size(); ++f) m[free[f].first][free[f].second] = digits[f];
        out.push_back(std::move(m));
        std::size_t pos = 0;
        while (pos < digits.size() && ++digits[pos] == p) digits[pos++] = 0;
        if (pos == digits.size()) break;
      }
      return;
    }
    for (int c = start; c <= cols - (r - idx); ++c) {
      piv[idx] = c;
      choose(idx + 1, c + 1);
    }
  };
  choose(0, 0);
  return out;
}

double gaussian_binomial(int p, int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double num = 1.0, den = 1.0;
  for (int i = 0; i < r; ++i) {
    num *= std::pow(p, n - i) - 1.0;
    den *= std::pow(p, i + 1) - 1.0;
  }
  return num / den;
}

std::vector<int> IncrementalBasis::reduce(std::vector<int> v) const {
  if (static_cast<int>(v.size()) != n_) throw ShapeError("vector has wrong length");
  for (auto& x : v) x = static_cast<int>(mod_floor(x, p_));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const int c = pivots_[i];
    if (v[c] == 0) continue;
    const int f = v[c];
    for (int j = 0; j < n_; ++j) v[j] = static_cast<int>(mod_floor(v[j] - f * rows_[i][j], p_));
  }
  return v;
}

bool IncrementalBasis::is_independent(const std::vector<int>& v) const {
  for (int x : reduce(v)) {
    if (x != 0) return true;
  }
  return false;
}

bool IncrementalBasis::add(const std::vector<int>& v) {
  std::vector<int> r = reduce(v);
  int c = -1;
  for (int j = 0; j < n_; ++j) {
    if (r[j] != 0) {
      c = j;
      break;
    }
  }
  if (c < 0) return false;
  const int inv = static_cast<int>(inverse_mod(r[c], p_));
  for (auto& x : r) x = (x * inv) % p_;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const int f = rows_[i][c];
    if (f == 0) continue;
    for (int j = 0; j < n_; ++j) rows_[i][j] = static_cast<int>(mod_floor(rows_[i][j] - f * r[j], p_));
  }
  rows_.push_back(std::move(r));
  pivots_.push_back(c);
  return true;
}

}  // namespace hofa
