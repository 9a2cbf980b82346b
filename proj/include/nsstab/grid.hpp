/// @file grid.hpp
/// @brief Staggered (MAC) grid geometry and boundary description.
///
/// Index convention: every scalar array is Nx x Ny with the first index along
/// x.  With 0-based indices the point sets are
///   EW (u):     (i*hx,       (j+1/2)*hy)
///   NS (v):     ((i+1/2)*hx, j*hy)
///   C  (p):     ((i+1/2)*hx, (j+1/2)*hy)
///   Corner (w): (i*hx,       j*hy)
/// so EW column i sits on the face between cells i-1 and i.
#pragma once

#include <stdexcept>
#include <string>

namespace nsstab {

/// Thrown for precondition and shape violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a linear solve or factorization cannot be completed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryType { PeriodicXY, DirichletXY, PeriodicXSlipY };

struct BoundaryKind {
  BoundaryType type = BoundaryType::PeriodicXY;
  /// Tangential velocity of the top wall (DirichletXY only).
  double lid_speed = 0.0;

  static constexpr BoundaryKind periodic() { return {BoundaryType::PeriodicXY, 0.0}; }
  static constexpr BoundaryKind dirichlet(double lid = 0.0) {
    return {BoundaryType::DirichletXY, lid};
  }
  static constexpr BoundaryKind periodic_x_slip_y() {
    return {BoundaryType::PeriodicXSlipY, 0.0};
  }

  bool operator==(const BoundaryKind&) const = default;
};

std::string to_string(BoundaryType type);

enum class Staggered { EW, NS, C, Corner };

std::string to_string(Staggered space);

class GridSpec {
 public:
  GridSpec(double lx, double ly, int nx, int ny, BoundaryKind bc);

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  const BoundaryKind& bc() const { return bc_; }
  bool periodic_x() const { return bc_.type != BoundaryType::DirichletXY; }
  bool periodic_y() const { return bc_.type == BoundaryType::PeriodicXY; }

  /// Physical coordinate of index i along x for the given point set.
  double x(Staggered space, int i) const;
  double y(Staggered space, int j) const;

  bool operator==(const GridSpec&) const = default;

 private:
  double lx_;
  double ly_;
  int nx_;
  int ny_;
  double hx_;
  double hy_;
  BoundaryKind bc_;
};

/// Validating factory; rejects non-positive lengths and fewer than 3 cells.
GridSpec build_grid(double lx, double ly, int nx, int ny, BoundaryKind bc);

}  // namespace nsstab
