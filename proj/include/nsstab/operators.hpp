/// @file operators.hpp
/// @brief Discrete divergence, gradient, Laplacian, and the convection pair F/G.
#pragma once

#include "nsstab/kernels.hpp"

namespace nsstab {

/// 3-point stencils of the differentiation matrices along one axis.
enum class Stencil {
  Average,  ///< C:  (a_i + a_{i+1}) / 2
  Central,  ///< D1: (a_{i+1} - a_{i-1}) / (2h)
  Forward,  ///< D2: (a_{i+1} - a_i) / h
  Second,   ///< D3: (a_{i-1} - 2a_i + a_{i+1}) / h^2
};

/// Per-grid boundary rules and spacings shared by all operators.
class StencilBank {
 public:
  explicit StencilBank(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  const AxisRules& rules(Staggered space) const;
  kernels::Spacing spacing() const { return {grid_.hx(), grid_.hy()}; }

  /// Periodic wrap-around action of a stencil along x (left multiplication)
  /// or along y (right multiplication by the transpose).
  Field2D apply_x(Stencil s, const Field2D& a, bool transpose = false) const;
  Field2D apply_y(Stencil s, const Field2D& a, bool transpose = false) const;

 private:
  void check(const Field2D& a) const;

  GridSpec grid_;
  AxisRules ew_;
  AxisRules ns_;
  AxisRules c_;
};

Field2D divergence(const VelocityField& w, const StencilBank& bank);
VelocityField gradient(const Field2D& p, const StencilBank& bank);
Field2D laplacian(const Field2D& a, Staggered space, const StencilBank& bank);
VelocityField laplacian(const VelocityField& w, const StencilBank& bank);
Field2D vorticity(const VelocityField& w, const StencilBank& bank);

/// Homogeneous-boundary operators plus this lift reproduce the lid data:
/// Delta_h(U with lid) = Delta_h(U) + lift / nu.
VelocityField boundary_lift(const StencilBank& bank, double nu);

/// Default guard for (U,U)_h: 1e-14 * Lx * Ly.
double default_eps_den(const GridSpec& grid);

struct ConvectionParts {
  VelocityField F;  ///< F(U) = U
  VelocityField G;  ///< G(U) = N(U) / (U,U)_h, zero when the denominator is guarded
  double denom = 0.0;
};

ConvectionParts convection_parts(const VelocityField& u, const StencilBank& bank,
                                 double eps_den);
ConvectionParts convection_parts(const VelocityField& u, const StencilBank& bank);

/// B(Ubar, V) = (F,V)_h G - (G,V)_h F.
VelocityField b_apply(const ConvectionParts& parts, const VelocityField& v,
                      const GridSpec& grid);
VelocityField b_apply(const VelocityField& ubar, const VelocityField& v,
                      const StencilBank& bank);

}  // namespace nsstab
