#pragma once

// Exact linear algebra over Q and Z. Matrices are row-major and small; every
// routine favours clarity over asymptotics.

#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>

#include "corner/rational.hpp"

namespace corner {

inline std::size_t ncols(const Mat& m, std::size_t fallback = 0) { return m.empty() ? fallback : m[0].size(); }

inline Mat transpose(const Mat& m, std::size_t cols_if_empty = 0) {
  std::size_t r = m.size(), c = ncols(m, cols_if_empty);
  Mat t = zero_mat(c, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) t[j][i] = m[i][j];
  return t;
}

inline Mat mat_mul(const Mat& a, const Mat& b, std::size_t inner, std::size_t bcols) {
  Mat out = zero_mat(a.size(), bcols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < bcols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline Vec mat_vec(const Mat& a, const Vec& v) {
  Vec out(a.size(), Q(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k) out[i] += a[i][k] * v[k];
  return out;
}

inline Vec vsub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline Vec vadd(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline Vec vscale(const Vec& a, const Q& s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}
inline Q dot(const Vec& a, const Vec& b) {
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Mat to_q(const ZMat& m) {
  Mat out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i].reserve(m[i].size());
    for (auto& z : m[i]) out[i].push_back(Q(z));
  }
  return out;
}

struct Echelon {
  Mat rows;                 // nonzero rows of the reduced row echelon form
  std::vector<int> pivots;  // pivot column of each row, strictly increasing
};

// Reduced row echelon form; pivots are 1 and pivot columns are otherwise zero.
inline Echelon rref(Mat m, std::size_t cols) {
  std::size_t r = 0;
  std::vector<int> piv;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Q inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Q f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    piv.push_back(int(c));
    ++r;
  }
  m.resize(r);
  return {std::move(m), std::move(piv)};
}

inline int rank(const Mat& m, std::size_t cols) { return int(rref(m, cols).pivots.size()); }
inline int rank(const Mat& m) { return m.empty() ? 0 : rank(m, m[0].size()); }

inline Q det(Mat m) {
  std::size_t n = m.size();
  Q d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Q f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

inline int det_sign(const Mat& m) { return sgn(det(m)); }

// Some solution x of a x = b (a has `cols` columns), or nullopt if inconsistent.
inline std::optional<Vec> solve(const Mat& a, const Vec& b, std::size_t cols) {
  Mat aug(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aug[i] = a[i];
    aug[i].resize(cols);
    aug[i].push_back(b[i]);
  }
  Echelon e = rref(aug, cols + 1);
  Vec x(cols, Q(0));
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (e.pivots[i] == int(cols)) return std::nullopt;
    x[e.pivots[i]] = e.rows[i][cols];
  }
  return x;
}

// Basis of {x : a x = 0}, one vector per free column.
inline Mat nullspace(const Mat& a, std::size_t cols) {
  Echelon e = rref(a, cols);
  std::vector<bool> is_piv(cols, false);
  for (int p : e.pivots) is_piv[p] = true;
  Mat basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    Vec v(cols, Q(0));
    v[f] = 1;
    for (std::size_t i = 0; i < e.rows.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<Mat> inverse(const Mat& m) {
  std::size_t n = m.size();
  Mat aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = m[i];
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(Q(i == j ? 1 : 0));
  }
  Echelon e = rref(aug, 2 * n);
  if (e.pivots.size() < n || e.pivots[n - 1] != int(n - 1)) return std::nullopt;
  Mat inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = Vec(e.rows[i].begin() + long(n), e.rows[i].end());
  return inv;
}

// ---------------------------------------------------------------------------
// Integer lattices

inline ZMat zidentity(std::size_t n) {
  ZMat m(n, ZVec(n, Z(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Z floor_div(const Z& a, const Z& b) {
  Z q = a / b;
  if ((a % b != 0) && ((a.sign() < 0) != (b.sign() < 0))) q -= 1;
  return q;
}

// Smith form with transforms: u * n * v = d, u and v unimodular, d diagonal
// with d[i][i] > 0 dividing d[i+1][i+1] for i < s and zero beyond s.
struct Smith {
  ZMat u, v, d;
  int s = 0;
  std::vector<Z> factors() const {
    std::vector<Z> out;
    for (int i = 0; i < s; ++i) out.push_back(d[i][i]);
    return out;
  }
};

inline Smith smith(const ZMat& n, std::size_t rows, std::size_t cols) {
  Smith r;
  r.d = n;
  r.d.resize(rows);
  for (auto& row : r.d) row.resize(cols, Z(0));
  r.u = zidentity(rows);
  r.v = zidentity(cols);
  auto& d = r.d;
  auto row_op = [&](std::size_t i, std::size_t k, const Z& f) {  // row i -= f * row k
    for (std::size_t j = 0; j < cols; ++j) d[i][j] -= f * d[k][j];
    for (std::size_t j = 0; j < rows; ++j) r.u[i][j] -= f * r.u[k][j];
  };
  auto col_op = [&](std::size_t j, std::size_t k, const Z& f) {  // col j -= f * col k
    for (std::size_t i = 0; i < rows; ++i) d[i][j] -= f * d[i][k];
    for (std::size_t i = 0; i < cols; ++i) r.v[i][j] -= f * r.v[i][k];
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(d[a], d[b]);
    std::swap(r.u[a], r.u[b]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (auto& row : d) std::swap(row[a], row[b]);
    for (auto& row : r.v) std::swap(row[a], row[b]);
  };
  auto negate_row = [&](std::size_t a) {
    for (auto& x : d[a]) x = -x;
    for (auto& x : r.u[a]) x = -x;
  };

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pick the nonzero entry of least magnitude in the trailing block
    bool found = false;
    std::size_t pi = t, pj = t;
    Z best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (d[i][j] != 0 && (!found || abs(d[i][j]) < best)) {
          found = true;
          best = abs(d[i][j]);
          pi = i;
          pj = j;
        }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        row_op(i, t, floor_div(d[i][t], d[t][t]));
        if (d[i][t] != 0) {
          swap_rows(t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        col_op(j, t, floor_div(d[t][j], d[t][t]));
        if (d[t][j] != 0) {
          swap_cols(t, j);
          clean = false;
        }
      }
      if (clean) {
        // divisibility: fold any offending entry of the block into row t
        for (std::size_t i = t + 1; i < rows && clean; ++i)
          for (std::size_t j = t + 1; j < cols && clean; ++j)
            if (d[i][j] % d[t][t] != 0) {
              row_op(t, i, Z(-1));
              clean = false;
            }
      }
    }
    if (d[t][t] < 0) negate_row(t);
    ++t;
  }
  r.s = int(t);
  return r;
}

// Column Hermite form: a * m = h with m unimodular. Pivot rows strictly
// increase with the column index, pivots are positive, entries left of a
// pivot lie in [0, pivot), trailing columns past the rank are zero.
struct ColumnHermite {
  ZMat h, m;
  std::vector<int> pivot_rows;
};

inline ColumnHermite column_hermite(const ZMat& a, std::size_t rows, std::size_t cols) {
  ColumnHermite r;
  r.h = a;
  r.h.resize(rows);
  for (auto& row : r.h) row.resize(cols, Z(0));
  r.m = zidentity(cols);
  auto& h = r.h;
  auto col_op = [&](std::size_t j, std::size_t k, const Z& f) {  // col j -= f * col k
    for (std::size_t i = 0; i < rows; ++i) h[i][j] -= f * h[i][k];
    for (std::size_t i = 0; i < cols; ++i) r.m[i][j] -= f * r.m[i][k];
  };
  auto swap_cols = [&](std::size_t a2, std::size_t b) {
    for (auto& row : h) std::swap(row[a2], row[b]);
    for (auto& row : r.m) std::swap(row[a2], row[b]);
  };
  auto negate_col = [&](std::size_t j) {
    for (auto& row : h) row[j] = -row[j];
    for (auto& row : r.m) row[j] = -row[j];
  };
  std::size_t j = 0;
  for (std::size_t i = 0; i < rows && j < cols; ++i) {
    for (;;) {
      std::size_t best = cols;
      for (std::size_t k = j; k < cols; ++k)
        if (h[i][k] != 0 && (best == cols || abs(h[i][k]) < abs(h[i][best]))) best = k;
      if (best == cols) break;
      swap_cols(j, best);
      bool done = true;
      for (std::size_t k = j + 1; k < cols; ++k) {
        if (h[i][k] == 0) continue;
        col_op(k, j, floor_div(h[i][k], h[i][j]));
        if (h[i][k] != 0) done = false;
      }
      if (done) break;
    }
    if (h[i][j] == 0) continue;
    if (h[i][j] < 0) negate_col(j);
    for (std::size_t k = 0; k < j; ++k) col_op(k, j, floor_div(h[i][k], h[i][j]));
    r.pivot_rows.push_back(int(i));
    ++j;
  }
  return r;
}

inline Z zdet(const ZMat& m) {
  Mat q = to_q(m);
  return to_z(det(q));
}

// Canonical representative of v modulo the lattice generated by the columns
// of `gens` (rational, spanning a full-rank lattice in Q^k).
inline Vec reduce_mod_lattice(const Vec& v, const Mat& gens, std::size_t k) {
  if (k == 0) return v;
  std::size_t g = ncols(gens, 0);
  Z den = 1;
  for (auto& row : gens)
    for (auto& x : row) den = boost::multiprecision::lcm(den, Z(boost::multiprecision::denominator(x)));
  ZMat zg(k, ZVec(g, Z(0)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < g; ++j) zg[i][j] = to_z(gens[i][j] * den);
  ColumnHermite ch = column_hermite(zg, k, g);
  if (ch.pivot_rows.size() != k) throw PreconditionError("lattice is not of full rank");
  Vec w = vscale(v, Q(den));
  for (std::size_t j = 0; j < k; ++j) {
    Z f = floor_z(w[j] / Q(ch.h[j][j]));
    if (f == 0) continue;
    for (std::size_t i = j; i < k; ++i) w[i] -= Q(f * ch.h[i][j]);
  }
  return vscale(w, Q(1) / Q(den));
}

}  // namespace corner
