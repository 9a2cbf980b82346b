// Dense-matrix transcriptions of the staggered-grid operators, used as test
// oracles for the stencil kernels.  Periodic boundaries only.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nsstab/field.hpp"

namespace oracle {

struct Dense {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

// C(N): (a_i + a_{i+1}) / 2
inline Dense circ_c(int n) {
  Dense m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) += 0.5;
    m(i, wrap(i + 1, n)) += 0.5;
  }
  return m;
}

// D1(N, h): central difference
inline Dense circ_d1(int n, double h) {
  Dense m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, wrap(i + 1, n)) += 1.0 / (2 * h);
    m(i, wrap(i - 1, n)) -= 1.0 / (2 * h);
  }
  return m;
}

// D2(N, h): forward difference
inline Dense circ_d2(int n, double h) {
  Dense m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) -= 1.0 / h;
    m(i, wrap(i + 1, n)) += 1.0 / h;
  }
  return m;
}

// D3(N, h): second difference
inline Dense circ_d3(int n, double h) {
  Dense m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) -= 2.0 / (h * h);
    m(i, wrap(i + 1, n)) += 1.0 / (h * h);
    m(i, wrap(i - 1, n)) += 1.0 / (h * h);
  }
  return m;
}

inline Dense transpose(const Dense& m) {
  Dense t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline Dense mul(const Dense& x, const Dense& y) {
  Dense z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const double xik = x(i, k);
      for (int j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

inline Dense hadamard(const Dense& x, const Dense& y) {
  Dense z(x.rows, x.cols);
  for (std::size_t k = 0; k < z.a.size(); ++k) z.a[k] = x.a[k] * y.a[k];
  return z;
}

inline Dense add(const Dense& x, const Dense& y, double s = 1.0) {
  Dense z = x;
  for (std::size_t k = 0; k < z.a.size(); ++k) z.a[k] += s * y.a[k];
  return z;
}

inline Dense from_field(const nsstab::Field2D& f) {
  Dense m(f.nx(), f.ny());
  for (int i = 0; i < f.nx(); ++i)
    for (int j = 0; j < f.ny(); ++j) m(i, j) = f(i, j);
  return m;
}

inline double max_diff(const Dense& m, const nsstab::Field2D& f) {
  double d = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) d = std::max(d, std::abs(m(i, j) - f(i, j)));
  return d;
}

/// The x-matrices A1..A4 and y-matrices B1..B4 of one grid.
struct Matrices {
  Dense A1, A2, A3, A4, B1, B2, B3, B4;

  explicit Matrices(const nsstab::GridSpec& g)
      : A1(circ_c(g.nx())), A2(circ_d1(g.nx(), g.hx())), A3(circ_d2(g.nx(), g.hx())),
        A4(circ_d3(g.nx(), g.hx())), B1(circ_c(g.ny())), B2(circ_d1(g.ny(), g.hy())),
        B3(circ_d2(g.ny(), g.hy())), B4(circ_d3(g.ny(), g.hy())) {}

  // A3 U + V B3^T
  Dense divergence(const Dense& U, const Dense& V) const {
    return add(mul(A3, U), mul(V, transpose(B3)));
  }
  // [-A3^T P; -P B3]
  std::pair<Dense, Dense> gradient(const Dense& P) const {
    Dense gx = mul(transpose(A3), P);
    Dense gy = mul(P, B3);
    for (auto& x : gx.a) x = -x;
    for (auto& x : gy.a) x = -x;
    return {gx, gy};
  }
  // A4 W + W B4^T
  Dense laplacian(const Dense& W) const { return add(mul(A4, W), mul(W, transpose(B4))); }
  // U o (A2 U) - ((A1^T V) o (U B3)) B1^T
  Dense g1_numerator(const Dense& U, const Dense& V) const {
    return add(hadamard(U, mul(A2, U)),
               mul(hadamard(mul(transpose(A1), V), mul(U, B3)), transpose(B1)), -1.0);
  }
  // V o (V B2^T) - A1 ((A3^T V) o (U B1))
  Dense g2_numerator(const Dense& U, const Dense& V) const {
    return add(hadamard(V, mul(V, transpose(B2))),
               mul(A1, hadamard(mul(transpose(A3), V), mul(U, B1))), -1.0);
  }
};

/// Laplacian eigenvalue of mode k on n points of spacing h.
inline double laplace_eigenvalue(int k, int n, double h) {
  const double s = std::sin(std::numbers::pi * k / n);
  return -4.0 * s * s / (h * h);
}

inline nsstab::Field2D random_dense(int nx, int ny, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  nsstab::Field2D f(nx, ny);
  for (auto& x : f.values()) x = d(rng);
  return f;
}

/// Plain sum over hx*hy*a_ij*b_ij.
inline double dot_loop(const nsstab::Field2D& a, const nsstab::Field2D& b, double hx, double hy) {
  double s = 0.0;
  for (int i = 0; i < a.nx(); ++i)
    for (int j = 0; j < a.ny(); ++j) s += hx * hy * a(i, j) * b(i, j);
  return s;
}

}  // namespace oracle
