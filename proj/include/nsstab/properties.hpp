/// @file properties.hpp
/// @brief Randomized operator-identity suite behind `nsstab properties`.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nsstab/operators.hpp"

namespace nsstab {

struct PropertyResult {
  std::string name;
  BoundaryType bc = BoundaryType::PeriodicXY;
  long trials = 0;
  double defect = 0.0;  ///< worst case over the trials
  double tol = 0.0;
  bool pass = false;
};

struct PropertyOptions {
  long trials = 1000;
  std::uint64_t seed = 12345;
  /// Grids cycled through by the trials (Nx, Ny), unit square.
  std::vector<std::pair<int, int>> grids = {{4, 4}, {6, 6}, {5, 7}, {32, 32}};
  std::vector<BoundaryType> kinds = {BoundaryType::PeriodicXY, BoundaryType::DirichletXY,
                                     BoundaryType::PeriodicXSlipY};
};

/// Entries uniform in [-1, 1], wall entries zeroed.
Field2D random_field(const GridSpec& grid, Staggered space, std::mt19937_64& rng);
VelocityField random_velocity(const GridSpec& grid, std::mt19937_64& rng);

/// Per boundary kind:
///   b_antisymmetry  |(B(U,V),V)_h| / ||V||_h^2        <= 1e-13
///   adjointness     |(grad P, W)_h + (P, div W)_h|     <= 1e-13
///   div_grad        ||div grad P - Delta_h P||_inf     <= 1e-12
std::vector<PropertyResult> run_property_suite(const PropertyOptions& opts = {});

}  // namespace nsstab
