#include "nsstab/io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nsstab {

namespace {

std::runtime_error io_error(const std::string& what, const std::filesystem::path& path) {
  return std::runtime_error(what + " " + path.string() + ": " + std::strerror(errno));
}

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

void write_block(std::string& out, const char* label, const Field2D& a) {
  out += label;
  out += '\n';
  for (int i = 0; i < a.nx(); ++i) {
    for (int j = 0; j < a.ny(); ++j) {
      if (j) out += ' ';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TimeseriesWriter::TimeseriesWriter(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "w");
  if (!file_) throw io_error("cannot open", path);
  std::fprintf(file_, "%s\n%s\n", timeseries_magic, timeseries_header);
}

TimeseriesWriter::~TimeseriesWriter() {
  if (file_) std::fclose(file_);
}

void TimeseriesWriter::write(const EnergyRecord& r) {
  const std::string line = std::to_string(r.n) + "," + format_double(r.t) + "," +
                           format_double(r.tau) + "," + format_double(r.E) + "," + opt(r.E_hat) +
                           "," + format_double(r.dissipation) + "," + opt(r.identity_residual) +
                           "," + format_double(r.div_inf) + "," + opt(r.det_A) + "\n";
  if (std::fputs(line.c_str(), file_) < 0) throw io_error("write failed for", path_);
}

void TimeseriesWriter::flush() { std::fflush(file_); }

std::vector<EnergyRecord> read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open", path);
  std::string line;
  if (!std::getline(in, line) || line != timeseries_magic) {
    throw std::runtime_error(path.string() + ": not an nsstab timeseries v1 file");
  }
  if (!std::getline(in, line) || line != timeseries_header) {
    throw std::runtime_error(path.string() + ": unexpected timeseries header");
  }
  std::vector<EnergyRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    while (f.size() < 9) f.emplace_back();
    EnergyRecord r;
    r.n = std::stol(f[0]);
    r.t = std::stod(f[1]);
    r.tau = std::stod(f[2]);
    r.E = std::stod(f[3]);
    r.E_hat = parse_opt(f[4]);
    r.dissipation = std::stod(f[5]);
    r.identity_residual = parse_opt(f[6]);
    r.div_inf = std::stod(f[7]);
    r.det_A = parse_opt(f[8]);
    rows.push_back(r);
  }
  return rows;
}

void write_snapshot(const VelocityField& u, const Field2D& p, const GridSpec& grid, double t,
                    const std::filesystem::path& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.nx()) * grid.ny() * 3 * 24 + 256);
  out += snapshot_magic;
  out += "\n# nx " + std::to_string(grid.nx()) + " ny " + std::to_string(grid.ny()) + " hx " +
         format_double(grid.hx()) + " hy " + format_double(grid.hy()) + " t " + format_double(t) +
         "\n";
  write_block(out, "u", u.u);
  write_block(out, "v", u.v);
  write_block(out, "p", p);
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open", path);
  const bool ok = std::fwrite(out.data(), 1, out.size(), f) == out.size();
  if (std::fclose(f) != 0 || !ok) throw io_error("write failed for", path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open", path);
  std::string line;
  if (!std::getline(in, line) || line != snapshot_magic) {
    throw std::runtime_error(path.string() + ": not an nsstab field v1 file");
  }
  Snapshot s;
  {
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
    std::istringstream hs(line);
    std::string hash, k1, k2, k3, k4, k5;
    hs >> hash >> k1 >> s.nx >> k2 >> s.ny >> k3 >> s.hx >> k4 >> s.hy >> k5 >> s.t;
    if (!hs || hash != "#" || k1 != "nx" || k2 != "ny" || k3 != "hx" || k4 != "hy" || k5 != "t" ||
        s.nx <= 0 || s.ny <= 0) {
      throw std::runtime_error(path.string() + ": malformed header line");
    }
  }
  auto read_block = [&](const char* label) {
    if (!std::getline(in, line) || line != label) {
      throw std::runtime_error(path.string() + ": missing block '" + label + "'");
    }
    Field2D a(s.nx, s.ny);
    for (int i = 0; i < s.nx; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": truncated block " + label);
      std::istringstream ls(line);
      for (int j = 0; j < s.ny; ++j) {
        std::string tok;
        if (!(ls >> tok)) throw std::runtime_error(path.string() + ": short row in block " + label);
        a(i, j) = std::strtod(tok.c_str(), nullptr);
      }
    }
    return a;
  };
  Field2D u = read_block("u");
  Field2D v = read_block("v");
  s.p = read_block("p");
  s.u = VelocityField(std::move(u), std::move(v));
  return s;
}

}  // namespace nsstab
