/// @file stokes.hpp
/// @brief Generalized Stokes solves (c - nu Delta_h) U + grad P = M, div U = 0.
///
/// Backends by boundary kind:
///   PeriodicXY      2D real DFT, every operator is diagonal
///   PeriodicXSlipY  DFT along x, one coupled sparse system in (u, v, p) per wavenumber
///   DirichletXY     one global sparse saddle-point factorization
/// Pressure is returned with zero discrete mean.
#pragma once

#include <memory>
#include <vector>

#include "nsstab/operators.hpp"

namespace nsstab {

struct StokesSolution {
  VelocityField u;
  Field2D p;
};

enum class StokesBackend { Spectral, Wavenumber, Saddle };

std::string to_string(StokesBackend b);

class StokesPlan {
 public:
  /// Uses the backend matching the grid's boundary kind.
  StokesPlan(const GridSpec& grid, double c, double nu);
  /// Forces a backend; Saddle works for every boundary kind, Spectral needs
  /// PeriodicXY, Wavenumber needs PeriodicXSlipY.
  StokesPlan(const GridSpec& grid, double c, double nu, StokesBackend backend);
  ~StokesPlan();
  StokesPlan(StokesPlan&&) noexcept;
  StokesPlan& operator=(StokesPlan&&) noexcept;

  const GridSpec& grid() const;
  double c() const;
  double nu() const;
  StokesBackend backend() const;
  const StencilBank& bank() const;

  /// lambda_x[k] = -4 sin^2(pi k / Nx) / hx^2 (and likewise in y); empty when
  /// the axis is not periodic.
  const std::vector<double>& lambda_x() const;
  const std::vector<double>& lambda_y() const;

  StokesSolution solve(const VelocityField& m) const;
  /// Same as solve() on each right-hand side; the saddle backend does one
  /// multi-column substitution.
  std::vector<StokesSolution> solve_batch(const std::vector<VelocityField>& ms) const;

  /// (c - nu Delta_h) X = rhs for X on EW or NS.
  Field2D helmholtz(const Field2D& rhs, Staggered space) const;
  /// Delta_h P = rhs on C with (P,1)_h = 0; rhs must have zero mean.
  Field2D poisson(const Field2D& rhs) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

StokesPlan plan_solver(const GridSpec& grid, double c, double nu);
Field2D solve_poisson(const StokesPlan& plan, const Field2D& rhs);
Field2D solve_helmholtz(const StokesPlan& plan, const Field2D& rhs,
                        Staggered space = Staggered::EW);
StokesSolution solve_stokes(const StokesPlan& plan, const VelocityField& m);

}  // namespace nsstab
