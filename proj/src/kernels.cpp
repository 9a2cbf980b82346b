#include "nsstab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nsstab {

AxisRules axis_rules(const GridSpec& grid, Staggered space) {
  switch (grid.bc().type) {
    case BoundaryType::PeriodicXY:
      return {AxisRule::Periodic, AxisRule::Periodic};
    case BoundaryType::DirichletXY:
      switch (space) {
        case Staggered::EW: return {AxisRule::WallNormal, AxisRule::GhostOdd};
        case Staggered::NS: return {AxisRule::GhostOdd, AxisRule::WallNormal};
        case Staggered::C:
        case Staggered::Corner: return {AxisRule::GhostEven, AxisRule::GhostEven};
      }
      break;
    case BoundaryType::PeriodicXSlipY:
      switch (space) {
        case Staggered::EW: return {AxisRule::Periodic, AxisRule::GhostEven};
        case Staggered::NS: return {AxisRule::Periodic, AxisRule::WallNormal};
        case Staggered::C:
        case Staggered::Corner: return {AxisRule::Periodic, AxisRule::GhostEven};
      }
      break;
  }
  return {};
}

namespace kernels {

bool resolve(AxisRule rule, int i, int n, int& index, double& sign) {
  sign = 1.0;
  index = i;
  if (i >= 0 && i < n) {
    return !(rule == AxisRule::WallNormal && i == 0);
  }
  switch (rule) {
    case AxisRule::Periodic:
      index = (i < 0) ? i + n : i - n;
      return true;
    case AxisRule::WallNormal:
      if (i == n) return false;
      index = 1;  // odd reflection about the wall at index 0
      sign = -1.0;
      return true;
    case AxisRule::GhostOdd:
      index = (i < 0) ? 0 : n - 1;
      sign = -1.0;
      return true;
    case AxisRule::GhostEven:
      index = (i < 0) ? 0 : n - 1;
      return true;
  }
  return false;
}

double fetch(const Field2D& a, const AxisRules& rules, int i, int j) {
  int ii = 0;
  int jj = 0;
  double sx = 1.0;
  double sy = 1.0;
  if (!resolve(rules.x, i, a.nx(), ii, sx)) return 0.0;
  if (!resolve(rules.y, j, a.ny(), jj, sy)) return 0.0;
  return sx * sy * a(ii, jj);
}

Field2D pad(const Field2D& a, const AxisRules& rules) {
  const int nx = a.nx();
  const int ny = a.ny();
  Field2D p(nx + 2, ny + 2);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const double* src = a.data() + static_cast<std::size_t>(i) * ny;
    double* dst = p.data() + static_cast<std::size_t>(i + 1) * (ny + 2) + 1;
    std::copy(src, src + ny, dst);
  }
  if (rules.x == AxisRule::WallNormal) {
    for (int j = 0; j < ny; ++j) p(1, j + 1) = 0.0;
  }
  if (rules.y == AxisRule::WallNormal) {
    for (int i = 0; i < nx; ++i) p(i + 1, 1) = 0.0;
  }
  for (int i = -1; i <= nx; ++i) {
    p(i + 1, 0) = fetch(a, rules, i, -1);
    p(i + 1, ny + 1) = fetch(a, rules, i, ny);
  }
  for (int j = 0; j < ny; ++j) {
    p(0, j + 1) = fetch(a, rules, -1, j);
    p(nx + 1, j + 1) = fetch(a, rules, nx, j);
  }
  return p;
}

void apply_mask(Field2D& a, const AxisRules& rules) {
  if (rules.x == AxisRule::WallNormal) {
    for (int j = 0; j < a.ny(); ++j) a(0, j) = 0.0;
  }
  if (rules.y == AxisRule::WallNormal) {
    for (int i = 0; i < a.nx(); ++i) a(i, 0) = 0.0;
  }
}

void scale(double s, std::span<double> x) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) x[k] *= s;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] += s * x[k];
}

double dot(std::span<const double> a, std::span<const double> b, int row_length) {
  const auto len = static_cast<std::size_t>(row_length);
  const int rows = static_cast<int>(a.size() / len);
  std::vector<double> partial(rows);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    const double* pa = a.data() + i * len;
    const double* pb = b.data() + i * len;
    double s = 0.0;
    for (std::size_t j = 0; j < len; ++j) s += pa[j] * pb[j];
    partial[i] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

double dot_ones(std::span<const double> a, int row_length) {
  const auto len = static_cast<std::size_t>(row_length);
  const int rows = static_cast<int>(a.size() / len);
  std::vector<double> partial(rows);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    const double* pa = a.data() + i * len;
    double s = 0.0;
    for (std::size_t j = 0; j < len; ++j) s += pa[j];
    partial[i] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

double max_abs(std::span<const double> a) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

Field2D laplacian(const Field2D& a, const AxisRules& rules, Spacing h) {
  const int nx = a.nx();
  const int ny = a.ny();
  const Field2D p = pad(a, rules);
  const int w = ny + 2;
  const double cx = 1.0 / (h.hx * h.hx);
  const double cy = 1.0 / (h.hy * h.hy);
  Field2D out(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const double* c = p.data() + static_cast<std::size_t>(i + 1) * w + 1;
    const double* l = c - w;
    const double* r = c + w;
    double* o = out.data() + static_cast<std::size_t>(i) * ny;
    for (int j = 0; j < ny; ++j) {
      // difference of forward differences, the same rounding as div(grad)
      o[j] = ((r[j] - c[j]) - (c[j] - l[j])) * cx + ((c[j + 1] - c[j]) - (c[j] - c[j - 1])) * cy;
    }
  }
  apply_mask(out, rules);
  return out;
}

Field2D divergence(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                   Spacing h) {
  const int nx = u.nx();
  const int ny = u.ny();
  const Field2D pu = pad(u, ru);
  const Field2D pv = pad(v, rv);
  const int w = ny + 2;
  const double ix = 1.0 / h.hx;
  const double iy = 1.0 / h.hy;
  Field2D out(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const double* uc = pu.data() + static_cast<std::size_t>(i + 1) * w + 1;
    const double* ur = uc + w;
    const double* vc = pv.data() + static_cast<std::size_t>(i + 1) * w + 1;
    double* o = out.data() + static_cast<std::size_t>(i) * ny;
    for (int j = 0; j < ny; ++j) {
      o[j] = (ur[j] - uc[j]) * ix + (vc[j + 1] - vc[j]) * iy;
    }
  }
  return out;
}

void gradient(const Field2D& p, const AxisRules& rp, const AxisRules& ru, const AxisRules& rv,
              Spacing h, Field2D& gx, Field2D& gy) {
  const int nx = p.nx();
  const int ny = p.ny();
  const Field2D pp = pad(p, rp);
  const int w = ny + 2;
  const double ix = 1.0 / h.hx;
  const double iy = 1.0 / h.hy;
  gx = Field2D(nx, ny);
  gy = Field2D(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const double* c = pp.data() + static_cast<std::size_t>(i + 1) * w + 1;
    const double* l = c - w;
    double* ox = gx.data() + static_cast<std::size_t>(i) * ny;
    double* oy = gy.data() + static_cast<std::size_t>(i) * ny;
    for (int j = 0; j < ny; ++j) {
      ox[j] = (c[j] - l[j]) * ix;
      oy[j] = (c[j] - c[j - 1]) * iy;
    }
  }
  apply_mask(gx, ru);
  apply_mask(gy, rv);
}

void convection(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                Spacing h, Field2D& n1, Field2D& n2) {
  const int nx = u.nx();
  const int ny = u.ny();
  const Field2D pu = pad(u, ru);
  const Field2D pv = pad(v, rv);
  const int w = ny + 2;
  // Padded accessors: P(i, j) holds fetch(i, j) for i in [-1, nx], j in [-1, ny].
  auto U = [&](int i, int j) { return pu.data()[static_cast<std::size_t>(i + 1) * w + (j + 1)]; };
  auto V = [&](int i, int j) { return pv.data()[static_cast<std::size_t>(i + 1) * w + (j + 1)]; };
  const double half_ix = 0.5 / h.hx;
  const double half_iy = 0.5 / h.hy;
  const double ix = 1.0 / h.hx;
  const double iy = 1.0 / h.hy;
  n1 = Field2D(nx, ny);
  n2 = Field2D(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      // corner products: q ~ (avg v) * (-du/dy), r ~ (-dv/dx) * (avg u)
      const double q0 = 0.5 * (V(i - 1, j) + V(i, j)) * (U(i, j - 1) - U(i, j)) * iy;
      const double q1 = 0.5 * (V(i - 1, j + 1) + V(i, j + 1)) * (U(i, j) - U(i, j + 1)) * iy;
      n1(i, j) = U(i, j) * (U(i + 1, j) - U(i - 1, j)) * half_ix - 0.5 * (q0 + q1);
      const double r0 = (V(i - 1, j) - V(i, j)) * ix * 0.5 * (U(i, j - 1) + U(i, j));
      const double r1 = (V(i, j) - V(i + 1, j)) * ix * 0.5 * (U(i + 1, j - 1) + U(i + 1, j));
      n2(i, j) = V(i, j) * (V(i, j + 1) - V(i, j - 1)) * half_iy - 0.5 * (r0 + r1);
    }
  }
  apply_mask(n1, ru);
  apply_mask(n2, rv);
}

Field2D vorticity(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                  Spacing h) {
  const int nx = u.nx();
  const int ny = u.ny();
  const Field2D pu = pad(u, ru);
  const Field2D pv = pad(v, rv);
  const int w = ny + 2;
  const double ix = 1.0 / h.hx;
  const double iy = 1.0 / h.hy;
  Field2D out(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const double* uc = pu.data() + static_cast<std::size_t>(i + 1) * w + 1;
    const double* vc = pv.data() + static_cast<std::size_t>(i + 1) * w + 1;
    const double* vl = vc - w;
    double* o = out.data() + static_cast<std::size_t>(i) * ny;
    for (int j = 0; j < ny; ++j) {
      o[j] = (vc[j] - vl[j]) * ix - (uc[j] - uc[j - 1]) * iy;
    }
  }
  return out;
}

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

Field2D laplacian(const Field2D& a, const AxisRules& rules, Spacing h) {
  const double cx = 1.0 / (h.hx * h.hx);
  const double cy = 1.0 / (h.hy * h.hy);
  Field2D out(a.nx(), a.ny());
  for (int i = 0; i < a.nx(); ++i) {
    for (int j = 0; j < a.ny(); ++j) {
      if (rules.masked(i, j)) continue;
      const double c = fetch(a, rules, i, j);
      out(i, j) = ((fetch(a, rules, i + 1, j) - c) - (c - fetch(a, rules, i - 1, j))) * cx +
                  ((fetch(a, rules, i, j + 1) - c) - (c - fetch(a, rules, i, j - 1))) * cy;
    }
  }
  return out;
}

Field2D divergence(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                   Spacing h) {
  const double ix = 1.0 / h.hx;
  const double iy = 1.0 / h.hy;
  Field2D out(u.nx(), u.ny());
  for (int i = 0; i < u.nx(); ++i) {
    for (int j = 0; j < u.ny(); ++j) {
      out(i, j) = (fetch(u, ru, i + 1, j) - fetch(u, ru, i, j)) * ix +
                  (fetch(v, rv, i, j + 1) - fetch(v, rv, i, j)) * iy;
    }
  }
  return out;
}

void gradient(const Field2D& p, const AxisRules& rp, const AxisRules& ru, const AxisRules& rv,
              Spacing h, Field2D& gx, Field2D& gy) {
  const double ix = 1.0 / h.hx;
  const double iy = 1.0 / h.hy;
  gx = Field2D(p.nx(), p.ny());
  gy = Field2D(p.nx(), p.ny());
  for (int i = 0; i < p.nx(); ++i) {
    for (int j = 0; j < p.ny(); ++j) {
      const double c = fetch(p, rp, i, j);
      if (!ru.masked(i, j)) gx(i, j) = (c - fetch(p, rp, i - 1, j)) * ix;
      if (!rv.masked(i, j)) gy(i, j) = (c - fetch(p, rp, i, j - 1)) * iy;
    }
  }
}

void convection(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                Spacing h, Field2D& n1, Field2D& n2) {
  auto U = [&](int i, int j) { return fetch(u, ru, i, j); };
  auto V = [&](int i, int j) { return fetch(v, rv, i, j); };
  // q at corner (i, j): (A1^T V) . (U B3); r at corner (i, j): (A3^T V) . (U B1)
  auto q = [&](int i, int j) { return 0.5 * (V(i - 1, j) + V(i, j)) * (U(i, j - 1) - U(i, j)) / h.hy; };
  auto r = [&](int i, int j) { return (V(i - 1, j) - V(i, j)) / h.hx * 0.5 * (U(i, j - 1) + U(i, j)); };
  n1 = Field2D(u.nx(), u.ny());
  n2 = Field2D(u.nx(), u.ny());
  for (int i = 0; i < u.nx(); ++i) {
    for (int j = 0; j < u.ny(); ++j) {
      if (!ru.masked(i, j)) {
        n1(i, j) = U(i, j) * (U(i + 1, j) - U(i - 1, j)) / (2.0 * h.hx) -
                   0.5 * (q(i, j) + q(i, j + 1));
      }
      if (!rv.masked(i, j)) {
        n2(i, j) = V(i, j) * (V(i, j + 1) - V(i, j - 1)) / (2.0 * h.hy) -
                   0.5 * (r(i, j) + r(i + 1, j));
      }
    }
  }
}

Field2D vorticity(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                  Spacing h) {
  Field2D out(u.nx(), u.ny());
  for (int i = 0; i < u.nx(); ++i) {
    for (int j = 0; j < u.ny(); ++j) {
      out(i, j) = (fetch(v, rv, i, j) - fetch(v, rv, i - 1, j)) / h.hx -
                  (fetch(u, ru, i, j) - fetch(u, ru, i, j - 1)) / h.hy;
    }
  }
  return out;
}

}  // namespace serial
}  // namespace kernels
}  // namespace nsstab
