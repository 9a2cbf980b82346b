#include "nsstab/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsstab/kernels.hpp"

namespace nsstab {

namespace {

void require_same_shape(const Field2D& a, const Field2D& b, const char* what) {
  if (!a.same_shape(b)) {
    std::ostringstream msg;
    msg << what << ": shape mismatch (" << a.nx() << "x" << a.ny() << " vs " << b.nx() << "x"
        << b.ny() << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

void Field2D::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Field2D::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Field2D& Field2D::operator+=(const Field2D& rhs) { return add_scaled(1.0, rhs); }

Field2D& Field2D::operator-=(const Field2D& rhs) { return add_scaled(-1.0, rhs); }

Field2D& Field2D::operator*=(double s) {
  kernels::scale(s, data_);
  return *this;
}

Field2D& Field2D::add_scaled(double s, const Field2D& x) {
  require_same_shape(*this, x, "add_scaled");
  kernels::axpy(s, x.values(), data_);
  return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double s, Field2D a) { return a *= s; }
Field2D operator-(Field2D a) { return a *= -1.0; }

VelocityField::VelocityField(Field2D u_in, Field2D v_in) : u(std::move(u_in)), v(std::move(v_in)) {
  require_same_shape(u, v, "VelocityField");
}

VelocityField& VelocityField::operator+=(const VelocityField& rhs) { return add_scaled(1.0, rhs); }
VelocityField& VelocityField::operator-=(const VelocityField& rhs) { return add_scaled(-1.0, rhs); }

VelocityField& VelocityField::operator*=(double s) {
  u *= s;
  v *= s;
  return *this;
}

VelocityField& VelocityField::add_scaled(double s, const VelocityField& x) {
  u.add_scaled(s, x.u);
  v.add_scaled(s, x.v);
  return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

double inner_product(const Field2D& a, const Field2D& b, const GridSpec& grid) {
  require_same_shape(a, b, "inner_product");
  return grid.hx() * grid.hy() * kernels::dot(a.values(), b.values(), a.ny());
}

double inner_product(const VelocityField& a, const VelocityField& b, const GridSpec& grid) {
  return inner_product(a.u, b.u, grid) + inner_product(a.v, b.v, grid);
}

Norms norms(const Field2D& a, const GridSpec& grid) {
  if (!a.all_finite()) throw ValidationError("norms: field has non-finite entries");
  return {std::sqrt(inner_product(a, a, grid)), max_abs(a)};
}

Norms norms(const VelocityField& a, const GridSpec& grid) {
  if (!a.all_finite()) throw ValidationError("norms: field has non-finite entries");
  return {std::sqrt(inner_product(a, a, grid)), max_abs(a)};
}

double max_abs(const Field2D& a) { return kernels::max_abs(a.values()); }

double max_abs(const VelocityField& a) { return std::max(max_abs(a.u), max_abs(a.v)); }

double mean(const Field2D& a) {
  if (a.size() == 0) return 0.0;
  return kernels::dot_ones(a.values(), a.ny()) / static_cast<double>(a.size());
}

Field2D sample_function(const GridSpec& grid, Staggered space, const SpaceTimeFunction& f,
                        double t) {
  Field2D out(grid);
  for (int i = 0; i < grid.nx(); ++i) {
    const double x = grid.x(space, i);
    for (int j = 0; j < grid.ny(); ++j) {
      const double y = grid.y(space, j);
      const double value = f(x, y, t);
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "sample_function: non-finite value at " << to_string(space) << " point (" << i
            << ", " << j << ") = (" << x << ", " << y << "), t = " << t;
        throw ValidationError(msg.str());
      }
      out(i, j) = value;
    }
  }
  return out;
}

}  // namespace nsstab
