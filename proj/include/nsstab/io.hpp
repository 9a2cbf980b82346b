/// @file io.hpp
/// @brief On-disk formats: timeseries.csv and field snapshots (v1).
///
/// timeseries.csv
///   # nsstab-timeseries v1
///   n,t,tau,E,E_hat,dissipation,identity_residual,div_inf,det_A
/// Optional columns are left empty.  Floats use 17 significant digits.
///
/// Snapshot v1
///   # nsstab-field v1
///   # nx <Nx> ny <Ny> hx <hx> hy <hy> t <t>
///   u
///   <Nx lines of Ny values>
///   v
///   ...
///   p
///   ...
#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "nsstab/diagnostics.hpp"

namespace nsstab {

inline constexpr const char* timeseries_magic = "# nsstab-timeseries v1";
inline constexpr const char* timeseries_header =
    "n,t,tau,E,E_hat,dissipation,identity_residual,div_inf,det_A";
inline constexpr const char* snapshot_magic = "# nsstab-field v1";

/// %.17g
std::string format_double(double x);

class TimeseriesWriter {
 public:
  explicit TimeseriesWriter(const std::filesystem::path& path);
  ~TimeseriesWriter();
  TimeseriesWriter(const TimeseriesWriter&) = delete;
  TimeseriesWriter& operator=(const TimeseriesWriter&) = delete;

  void write(const EnergyRecord& r);
  void flush();

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

/// Parses a timeseries file back into records.
std::vector<EnergyRecord> read_timeseries(const std::filesystem::path& path);

struct Snapshot {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double t = 0.0;
  VelocityField u;
  Field2D p;
};

void write_snapshot(const VelocityField& u, const Field2D& p, const GridSpec& grid, double t,
                    const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace nsstab
