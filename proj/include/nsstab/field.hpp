/// @file field.hpp
/// @brief Dense Nx x Ny scalar arrays, velocity pairs, discrete inner products.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nsstab/grid.hpp"

namespace nsstab {

/// Row-major Nx x Ny array; entry (i, j) has i along x.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int nx, int ny, double value = 0.0)
      : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * ny, value) {}
  explicit Field2D(const GridSpec& grid, double value = 0.0)
      : Field2D(grid.nx(), grid.ny(), value) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Field2D& other) const { return nx_ == other.nx_ && ny_ == other.ny_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * ny_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * ny_ + j]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double value);
  bool all_finite() const;

  Field2D& operator+=(const Field2D& rhs);
  Field2D& operator-=(const Field2D& rhs);
  Field2D& operator*=(double s);
  /// this += s * x
  Field2D& add_scaled(double s, const Field2D& x);

  bool operator==(const Field2D&) const = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> data_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double s, Field2D a);
Field2D operator-(Field2D a);

using PressureField = Field2D;

/// U on the EW points, V on the NS points.
struct VelocityField {
  Field2D u;
  Field2D v;

  VelocityField() = default;
  VelocityField(Field2D u_in, Field2D v_in);
  explicit VelocityField(const GridSpec& grid, double value = 0.0)
      : u(grid, value), v(grid, value) {}

  bool same_shape(const VelocityField& o) const { return u.same_shape(o.u) && v.same_shape(o.v); }
  bool all_finite() const { return u.all_finite() && v.all_finite(); }

  VelocityField& operator+=(const VelocityField& rhs);
  VelocityField& operator-=(const VelocityField& rhs);
  VelocityField& operator*=(double s);
  VelocityField& add_scaled(double s, const VelocityField& x);

  bool operator==(const VelocityField&) const = default;
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// (A,B)_h = hx*hy*sum_ij A_ij B_ij.  Rows are reduced in a fixed order, so the
/// result does not depend on the thread count.
double inner_product(const Field2D& a, const Field2D& b, const GridSpec& grid);
double inner_product(const VelocityField& a, const VelocityField& b, const GridSpec& grid);

struct Norms {
  double l2 = 0.0;
  double linf = 0.0;
};

Norms norms(const Field2D& a, const GridSpec& grid);
Norms norms(const VelocityField& a, const GridSpec& grid);
double max_abs(const Field2D& a);
double max_abs(const VelocityField& a);
double mean(const Field2D& a);

using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// Evaluates f at the staggered coordinates of `space`; throws
/// ValidationError naming the first point where f is not finite.
Field2D sample_function(const GridSpec& grid, Staggered space, const SpaceTimeFunction& f,
                        double t = 0.0);

}  // namespace nsstab
