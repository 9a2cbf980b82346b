#include "nsstab/grid.hpp"

#include <cmath>
#include <sstream>

namespace nsstab {

std::string to_string(BoundaryType type) {
  switch (type) {
    case BoundaryType::PeriodicXY: return "periodic_xy";
    case BoundaryType::DirichletXY: return "dirichlet_xy";
    case BoundaryType::PeriodicXSlipY: return "periodic_x_slip_y";
  }
  return "unknown";
}

std::string to_string(Staggered space) {
  switch (space) {
    case Staggered::EW: return "ew";
    case Staggered::NS: return "ns";
    case Staggered::C: return "c";
    case Staggered::Corner: return "corner";
  }
  return "unknown";
}

GridSpec::GridSpec(double lx, double ly, int nx, int ny, BoundaryKind bc)
    : lx_(lx), ly_(ly), nx_(nx), ny_(ny), hx_(0.0), hy_(0.0), bc_(bc) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    std::ostringstream msg;
    msg << "grid lengths must be positive and finite (Lx=" << lx << ", Ly=" << ly << ")";
    throw ValidationError(msg.str());
  }
  if (nx < 3 || ny < 3) {
    std::ostringstream msg;
    msg << "grid needs at least 3 cells per direction (Nx=" << nx << ", Ny=" << ny << ")";
    throw ValidationError(msg.str());
  }
  if (bc.type != BoundaryType::DirichletXY && bc.lid_speed != 0.0) {
    throw ValidationError("lid_speed is only meaningful for dirichlet_xy boundaries");
  }
  hx_ = lx / nx;
  hy_ = ly / ny;
}

double GridSpec::x(Staggered space, int i) const {
  switch (space) {
    case Staggered::EW:
    case Staggered::Corner: return i * hx_;
    case Staggered::NS:
    case Staggered::C: return (i + 0.5) * hx_;
  }
  return 0.0;
}

double GridSpec::y(Staggered space, int j) const {
  switch (space) {
    case Staggered::NS:
    case Staggered::Corner: return j * hy_;
    case Staggered::EW:
    case Staggered::C: return (j + 0.5) * hy_;
  }
  return 0.0;
}

GridSpec build_grid(double lx, double ly, int nx, int ny, BoundaryKind bc) {
  return GridSpec(lx, ly, nx, ny, bc);
}

}  // namespace nsstab
