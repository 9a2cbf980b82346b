/// @file kernels.hpp
/// @brief Low-level stencil kernels on staggered arrays.
///
/// Two implementations of every stencil live here:
///   - the default kernels pad the input with one ghost layer and sweep the
///     interior with OpenMP-parallel loops over x-rows;
///   - kernels::serial resolves every neighbour access through the boundary
///     rule directly.  It is single-threaded and kept as the reference the
///     parallel kernels are tested and benchmarked against.
/// Both resolve ghosts through the same AxisRule semantics.
#pragma once

#include <span>

#include "nsstab/field.hpp"

namespace nsstab {

/// How an array is continued past its ends along one axis.
enum class AxisRule {
  Periodic,    ///< wrap-around
  WallNormal,  ///< index 0 lies on a wall; the wall value and index N are zero
  GhostOdd,    ///< cell-centred, zero value on the wall: ghost = -inside
  GhostEven,   ///< cell-centred, zero gradient at the wall: ghost = inside
};

struct AxisRules {
  AxisRule x = AxisRule::Periodic;
  AxisRule y = AxisRule::Periodic;

  bool masked(int i, int j) const {
    return (x == AxisRule::WallNormal && i == 0) || (y == AxisRule::WallNormal && j == 0);
  }
};

/// Rules for the array living on `space` under the grid's boundary kind.
AxisRules axis_rules(const GridSpec& grid, Staggered space);

namespace kernels {

/// Index resolution for i in [-1, n]: writes the in-range index and a sign
/// (+1, -1) or returns false when the value is identically zero.
bool resolve(AxisRule rule, int i, int n, int& index, double& sign);

/// Value of `a` at (i, j) in [-1, nx] x [-1, ny] after applying the rules.
double fetch(const Field2D& a, const AxisRules& rules, int i, int j);

/// (nx+2) x (ny+2) copy with ghosts filled; entry (i+1, j+1) holds fetch(i, j).
Field2D pad(const Field2D& a, const AxisRules& rules);
/// Zeroes wall-collocated entries.
void apply_mask(Field2D& a, const AxisRules& rules);

// Vector primitives.  Reductions sum per-row partials in row order.
void scale(double s, std::span<double> x);
void axpy(double s, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b, int row_length);
double dot_ones(std::span<const double> a, int row_length);
double max_abs(std::span<const double> a);

struct Spacing {
  double hx;
  double hy;
};

Field2D laplacian(const Field2D& a, const AxisRules& rules, Spacing h);
Field2D divergence(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                   Spacing h);
/// Writes the x- and y- components of the gradient of p.
void gradient(const Field2D& p, const AxisRules& rp, const AxisRules& ru, const AxisRules& rv,
              Spacing h, Field2D& gx, Field2D& gy);
/// Numerators of the discrete convection pair (u.grad u, u.grad v).
void convection(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                Spacing h, Field2D& n1, Field2D& n2);
/// Corner vorticity dv/dx - du/dy.
Field2D vorticity(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                  Spacing h);

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
Field2D laplacian(const Field2D& a, const AxisRules& rules, Spacing h);
Field2D divergence(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                   Spacing h);
void gradient(const Field2D& p, const AxisRules& rp, const AxisRules& ru, const AxisRules& rv,
              Spacing h, Field2D& gx, Field2D& gy);
void convection(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                Spacing h, Field2D& n1, Field2D& n2);
Field2D vorticity(const Field2D& u, const AxisRules& ru, const Field2D& v, const AxisRules& rv,
                  Spacing h);

}  // namespace serial
}  // namespace kernels
}  // namespace nsstab
