#include "nsstab/stokes.hpp"

#include <fftw3.h>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace nsstab {

using cplx = std::complex<double>;

std::string to_string(StokesBackend b) {
  switch (b) {
    case StokesBackend::Spectral: return "spectral";
    case StokesBackend::Wavenumber: return "wavenumber";
    case StokesBackend::Saddle: return "saddle";
  }
  return "unknown";
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> eigenvalues(int n, double h) {
  std::vector<double> lam(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * k / n);
    lam[k] = -4.0 * s * s / (h * h);
  }
  return lam;
}

template <class T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (ptr == nullptr) throw SolverError("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* ptr;
};

// Owns a forward/backward real transform pair; execution uses the new-array
// interface so one pair serves concurrent callers.
class RealTransform {
 public:
  // full2d: 2D transform of an nx x ny array; otherwise nx-point transforms
  // along the first index of every column.
  RealTransform(int nx, int ny, bool full2d) : nx_(nx), ny_(ny), full2d_(full2d) {
    FftwBuffer<double> r(real_size());
    FftwBuffer<fftw_complex> c(complex_size());
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (full2d_) {
      fwd_ = fftw_plan_dft_r2c_2d(nx, ny, r.ptr, c.ptr, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_c2r_2d(nx, ny, c.ptr, r.ptr, FFTW_ESTIMATE);
    } else {
      int n[] = {nx};
      fwd_ = fftw_plan_many_dft_r2c(1, n, ny, r.ptr, nullptr, ny, 1, c.ptr, nullptr, ny, 1,
                                    FFTW_ESTIMATE);
      bwd_ = fftw_plan_many_dft_c2r(1, n, ny, c.ptr, nullptr, ny, 1, r.ptr, nullptr, ny, 1,
                                    FFTW_ESTIMATE);
    }
    if (fwd_ == nullptr || bwd_ == nullptr) throw SolverError("FFTW planning failed");
  }
  ~RealTransform() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  RealTransform(const RealTransform&) = delete;
  RealTransform& operator=(const RealTransform&) = delete;

  std::size_t real_size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t complex_size() const {
    return full2d_ ? static_cast<std::size_t>(nx_) * (ny_ / 2 + 1)
                   : static_cast<std::size_t>(nx_ / 2 + 1) * ny_;
  }

  std::vector<cplx> forward(const Field2D& a) const {
    FftwBuffer<double> r(real_size());
    FftwBuffer<fftw_complex> c(complex_size());
    std::copy(a.data(), a.data() + real_size(), r.ptr);
    fftw_execute_dft_r2c(fwd_, r.ptr, c.ptr);
    std::vector<cplx> out(complex_size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {c.ptr[k][0], c.ptr[k][1]};
    return out;
  }

  Field2D backward(const std::vector<cplx>& spec) const {
    FftwBuffer<double> r(real_size());
    FftwBuffer<fftw_complex> c(complex_size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      c.ptr[k][0] = spec[k].real();
      c.ptr[k][1] = spec[k].imag();
    }
    fftw_execute_dft_c2r(bwd_, c.ptr, r.ptr);
    const double scale = full2d_ ? 1.0 / (static_cast<double>(nx_) * ny_) : 1.0 / nx_;
    Field2D out(nx_, ny_);
    for (std::size_t k = 0; k < real_size(); ++k) out.data()[k] = r.ptr[k] * scale;
    return out;
  }

 private:
  int nx_;
  int ny_;
  bool full2d_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// Symbols of the forward difference, backward difference and second
// difference for wavenumber k of n points.
struct Symbols {
  cplx fwd;
  cplx bwd;
  double lap;
};

Symbols symbols(int k, int n, double h, double lam) {
  const double theta = 2.0 * std::numbers::pi * k / n;
  const cplx e(std::cos(theta), std::sin(theta));
  return {(e - 1.0) / h, (1.0 - std::conj(e)) / h, lam};
}

// Global degree-of-freedom numbering: masked (wall) entries get -1.
struct DofMap {
  std::vector<int> id;
  int count = 0;
  int nx = 0;
  int ny = 0;

  DofMap(int nx_in, int ny_in, const AxisRules& rules) : nx(nx_in), ny(ny_in) {
    id.assign(static_cast<std::size_t>(nx) * ny, -1);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        if (!rules.masked(i, j)) id[static_cast<std::size_t>(i) * ny + j] = count++;
      }
    }
  }
  int operator()(int i, int j) const { return id[static_cast<std::size_t>(i) * ny + j]; }
};

using Triplets = std::vector<Eigen::Triplet<double>>;

// Adds coef * a(i, j) (after boundary resolution) to row `row`.
void add_fetch(Triplets& t, int row, const AxisRules& rules, const DofMap& dofs, int offset,
               int i, int j, double coef) {
  int ii = 0;
  int jj = 0;
  double sx = 1.0;
  double sy = 1.0;
  if (!kernels::resolve(rules.x, i, dofs.nx, ii, sx)) return;
  if (!kernels::resolve(rules.y, j, dofs.ny, jj, sy)) return;
  const int col = dofs(ii, jj);
  if (col < 0) return;
  t.emplace_back(row, offset + col, sx * sy * coef);
}

void add_helmholtz_row(Triplets& t, int row, const AxisRules& rules, const DofMap& dofs,
                       int offset, int i, int j, double c, double nu, double hx, double hy) {
  const double ax = nu / (hx * hx);
  const double ay = nu / (hy * hy);
  add_fetch(t, row, rules, dofs, offset, i, j, c + 2.0 * ax + 2.0 * ay);
  add_fetch(t, row, rules, dofs, offset, i - 1, j, -ax);
  add_fetch(t, row, rules, dofs, offset, i + 1, j, -ax);
  add_fetch(t, row, rules, dofs, offset, i, j - 1, -ay);
  add_fetch(t, row, rules, dofs, offset, i, j + 1, -ay);
}

template <class Solver>
void factorize(Solver& lu, const Eigen::SparseMatrix<typename Solver::Scalar>& a,
               const std::string& what) {
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw SolverError("factorization failed (" + what + "): " + lu.lastErrorMessage());
  }
}

using RealLU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;
using ComplexLU = Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>>;
// Keeps a reference to the factorized matrix, which must outlive it.
using SaddleLU = Eigen::UmfPackLU<Eigen::SparseMatrix<double>>;

void remove_mean(Field2D& p) {
  const double m = mean(p);
  for (double& x : p.values()) x -= m;
}

void check_compatible(const Field2D& rhs, const GridSpec& grid) {
  const double total = std::abs(grid.hx() * grid.hy() * kernels::dot_ones(rhs.values(), rhs.ny()));
  const double scale = norms(rhs, grid).l2;
  if (total > 1e-10 * scale) {
    throw ValidationError("poisson: right-hand side violates the compatibility condition (rhs,1)_h = 0 (|(rhs,1)_h| = " +
                          std::to_string(total) + ")");
  }
}

}  // namespace

struct StokesPlan::Impl {
  GridSpec grid;
  double c;
  double nu;
  StokesBackend backend;
  StencilBank bank;
  std::vector<double> lam_x;
  std::vector<double> lam_y;

  std::unique_ptr<RealTransform> fft;

  // wavenumber backend
  std::vector<std::unique_ptr<ComplexLU>> mode_lu;

  // saddle backend
  std::unique_ptr<DofMap> udofs;
  std::unique_ptr<DofMap> vdofs;
  Eigen::SparseMatrix<double> saddle_matrix;
  std::unique_ptr<SaddleLU> saddle_lu;
  int saddle_size = 0;

  // lazily built standalone factorizations for non-spectral plans
  mutable std::mutex lazy_mutex;
  mutable std::unique_ptr<RealLU> helm_lu[2];
  mutable std::unique_ptr<RealLU> poisson_lu;

  Impl(const GridSpec& g, double c_in, double nu_in, StokesBackend b)
      : grid(g), c(c_in), nu(nu_in), backend(b), bank(g) {
    if (grid.periodic_x()) lam_x = eigenvalues(grid.nx(), grid.hx());
    if (grid.periodic_y()) lam_y = eigenvalues(grid.ny(), grid.hy());
    switch (backend) {
      case StokesBackend::Spectral:
        fft = std::make_unique<RealTransform>(grid.nx(), grid.ny(), true);
        break;
      case StokesBackend::Wavenumber:
        fft = std::make_unique<RealTransform>(grid.nx(), grid.ny(), false);
        build_modes();
        break;
      case StokesBackend::Saddle:
        build_saddle();
        break;
    }
  }

  // ---- wavenumber backend ----
  int mode_size(int k) const { return 3 * grid.ny() - 1 + (k == 0 ? 1 : 0); }
  int u_index(int j) const { return j; }
  int v_index(int j) const { return grid.ny() + j - 1; }
  int p_index(int j) const { return 2 * grid.ny() - 1 + j; }

  void build_modes() {
    const int ny = grid.ny();
    const double hy = grid.hy();
    const AxisRules& ru = bank.rules(Staggered::EW);
    const AxisRules& rv = bank.rules(Staggered::NS);
    const AxisRules& rp = bank.rules(Staggered::C);
    const int nk = grid.nx() / 2 + 1;
    mode_lu.resize(nk);
    for (int k = 0; k < nk; ++k) {
      const Symbols sx = symbols(k, grid.nx(), grid.hx(), lam_x[k]);
      std::vector<Eigen::Triplet<cplx>> t;
      const double ay = nu / (hy * hy);
      // 1D fetch along y for one axis rule
      auto add_y = [&](int row, AxisRule rule, int j, cplx coef, auto index_of, bool skip0) {
        int jj = 0;
        double s = 1.0;
        if (!kernels::resolve(rule, j, ny, jj, s)) return;
        if (skip0 && jj == 0) return;
        t.emplace_back(row, index_of(jj), s * coef);
      };
      auto ui = [&](int j) { return u_index(j); };
      auto vi = [&](int j) { return v_index(j); };
      auto pi = [&](int j) { return p_index(j); };
      const bool vmask = rv.y == AxisRule::WallNormal;
      for (int j = 0; j < ny; ++j) {
        int row = u_index(j);
        add_y(row, ru.y, j, c - nu * sx.lap + 2.0 * ay, ui, false);
        add_y(row, ru.y, j - 1, -ay, ui, false);
        add_y(row, ru.y, j + 1, -ay, ui, false);
        add_y(row, rp.y, j, sx.bwd, pi, false);
        if (j >= 1) {
          row = v_index(j);
          add_y(row, rv.y, j, c - nu * sx.lap + 2.0 * ay, vi, vmask);
          add_y(row, rv.y, j - 1, -ay, vi, vmask);
          add_y(row, rv.y, j + 1, -ay, vi, vmask);
          add_y(row, rp.y, j, 1.0 / hy, pi, false);
          add_y(row, rp.y, j - 1, -1.0 / hy, pi, false);
        }
        row = p_index(j);
        add_y(row, ru.y, j, -sx.fwd, ui, false);
        add_y(row, rv.y, j + 1, -1.0 / hy, vi, vmask);
        add_y(row, rv.y, j, 1.0 / hy, vi, vmask);
        if (k == 0) {
          t.emplace_back(row, 3 * ny - 1, 1.0);
          t.emplace_back(3 * ny - 1, row, 1.0);
        }
      }
      Eigen::SparseMatrix<cplx> a(mode_size(k), mode_size(k));
      a.setFromTriplets(t.begin(), t.end());
      mode_lu[k] = std::make_unique<ComplexLU>();
      factorize(*mode_lu[k], a, "periodic-x/slip-y wavenumber " + std::to_string(k));
    }
  }

  StokesSolution solve_modes(const VelocityField& m) const {
    const int ny = grid.ny();
    const int nk = grid.nx() / 2 + 1;
    const std::vector<cplx> mu = fft->forward(m.u);
    const std::vector<cplx> mv = fft->forward(m.v);
    std::vector<cplx> su(mu.size());
    std::vector<cplx> sv(mu.size());
    std::vector<cplx> sp(mu.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nk; ++k) {
      Eigen::VectorXcd b = Eigen::VectorXcd::Zero(mode_size(k));
      const std::size_t base = static_cast<std::size_t>(k) * ny;
      for (int j = 0; j < ny; ++j) {
        b[u_index(j)] = mu[base + j];
        if (j >= 1) b[v_index(j)] = mv[base + j];
      }
      const Eigen::VectorXcd x = mode_lu[k]->solve(b);
      for (int j = 0; j < ny; ++j) {
        su[base + j] = x[u_index(j)];
        sv[base + j] = j >= 1 ? x[v_index(j)] : cplx(0.0);
        sp[base + j] = x[p_index(j)];
      }
    }
    StokesSolution out{{fft->backward(su), fft->backward(sv)}, fft->backward(sp)};
    kernels::apply_mask(out.u.v, bank.rules(Staggered::NS));
    remove_mean(out.p);
    return out;
  }

  // ---- saddle backend ----
  void build_saddle() {
    const int nx = grid.nx();
    const int ny = grid.ny();
    const double hx = grid.hx();
    const double hy = grid.hy();
    const AxisRules& ru = bank.rules(Staggered::EW);
    const AxisRules& rv = bank.rules(Staggered::NS);
    const AxisRules& rp = bank.rules(Staggered::C);
    udofs = std::make_unique<DofMap>(nx, ny, ru);
    vdofs = std::make_unique<DofMap>(nx, ny, rv);
    const DofMap pdofs(nx, ny, rp);
    const int ou = 0;
    const int ov = udofs->count;
    const int op = ov + vdofs->count;
    const int omu = op + pdofs.count;
    saddle_size = omu + 1;
    Triplets t;
    t.reserve(static_cast<std::size_t>(saddle_size) * 9);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        if (const int r = (*udofs)(i, j); r >= 0) {
          add_helmholtz_row(t, ou + r, ru, *udofs, ou, i, j, c, nu, hx, hy);
          add_fetch(t, ou + r, rp, pdofs, op, i, j, 1.0 / hx);
          add_fetch(t, ou + r, rp, pdofs, op, i - 1, j, -1.0 / hx);
        }
        if (const int r = (*vdofs)(i, j); r >= 0) {
          add_helmholtz_row(t, ov + r, rv, *vdofs, ov, i, j, c, nu, hx, hy);
          add_fetch(t, ov + r, rp, pdofs, op, i, j, 1.0 / hy);
          add_fetch(t, ov + r, rp, pdofs, op, i, j - 1, -1.0 / hy);
        }
        const int r = op + pdofs(i, j);
        add_fetch(t, r, ru, *udofs, ou, i + 1, j, -1.0 / hx);
        add_fetch(t, r, ru, *udofs, ou, i, j, 1.0 / hx);
        add_fetch(t, r, rv, *vdofs, ov, i, j + 1, -1.0 / hy);
        add_fetch(t, r, rv, *vdofs, ov, i, j, 1.0 / hy);
        t.emplace_back(r, omu, 1.0);
        t.emplace_back(omu, r, 1.0);
      }
    }
    saddle_matrix.resize(saddle_size, saddle_size);
    saddle_matrix.setFromTriplets(t.begin(), t.end());
    saddle_lu = std::make_unique<SaddleLU>();
    saddle_lu->compute(saddle_matrix);
    if (saddle_lu->info() != Eigen::Success) {
      throw SolverError("factorization failed (saddle point, " + to_string(grid.bc().type) + ")");
    }
  }

  std::vector<StokesSolution> solve_saddle(const std::vector<VelocityField>& ms) const {
    const int nx = grid.nx();
    const int ny = grid.ny();
    const int ov = udofs->count;
    const int op = ov + vdofs->count;
    const int cols = static_cast<int>(ms.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(saddle_size, cols);
    for (int k = 0; k < cols; ++k) {
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
          if (const int r = (*udofs)(i, j); r >= 0) b(r, k) = ms[k].u(i, j);
          if (const int r = (*vdofs)(i, j); r >= 0) b(ov + r, k) = ms[k].v(i, j);
        }
      }
    }
    const Eigen::MatrixXd x = saddle_lu->solve(b);
    std::vector<StokesSolution> out(cols);
    for (int k = 0; k < cols; ++k) {
      out[k].u = VelocityField(grid);
      out[k].p = Field2D(grid);
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
          if (const int r = (*udofs)(i, j); r >= 0) out[k].u.u(i, j) = x(r, k);
          if (const int r = (*vdofs)(i, j); r >= 0) out[k].u.v(i, j) = x(ov + r, k);
          out[k].p(i, j) = x(op + i * ny + j, k);
        }
      }
      remove_mean(out[k].p);
    }
    return out;
  }

  // ---- spectral backend ----
  StokesSolution solve_spectral(const VelocityField& m) const {
    const int nx = grid.nx();
    const int ny = grid.ny();
    const int nyh = ny / 2 + 1;
    const std::vector<cplx> mu = fft->forward(m.u);
    const std::vector<cplx> mv = fft->forward(m.v);
    std::vector<cplx> su(mu.size());
    std::vector<cplx> sv(mu.size());
    std::vector<cplx> sp(mu.size());
    for (int k = 0; k < nx; ++k) {
      const Symbols sx = symbols(k, nx, grid.hx(), lam_x[k]);
      for (int q = 0; q < nyh; ++q) {
        const Symbols sy = symbols(q, ny, grid.hy(), lam_y[q]);
        const std::size_t idx = static_cast<std::size_t>(k) * nyh + q;
        const double lam = sx.lap + sy.lap;
        const double helm = c - nu * lam;
        const cplx p = (k == 0 && q == 0) ? cplx(0.0) : (sx.fwd * mu[idx] + sy.fwd * mv[idx]) / lam;
        sp[idx] = p;
        su[idx] = (mu[idx] - sx.bwd * p) / helm;
        sv[idx] = (mv[idx] - sy.bwd * p) / helm;
      }
    }
    return {{fft->backward(su), fft->backward(sv)}, fft->backward(sp)};
  }

  Field2D helmholtz_spectral(const Field2D& rhs) const {
    const int nyh = grid.ny() / 2 + 1;
    std::vector<cplx> s = fft->forward(rhs);
    for (int k = 0; k < grid.nx(); ++k) {
      for (int q = 0; q < nyh; ++q) s[static_cast<std::size_t>(k) * nyh + q] /= c - nu * (lam_x[k] + lam_y[q]);
    }
    return fft->backward(s);
  }

  Field2D poisson_spectral(const Field2D& rhs) const {
    const int nyh = grid.ny() / 2 + 1;
    std::vector<cplx> s = fft->forward(rhs);
    for (int k = 0; k < grid.nx(); ++k) {
      for (int q = 0; q < nyh; ++q) {
        const std::size_t idx = static_cast<std::size_t>(k) * nyh + q;
        s[idx] = (k == 0 && q == 0) ? cplx(0.0) : s[idx] / (lam_x[k] + lam_y[q]);
      }
    }
    return fft->backward(s);
  }

  // ---- standalone sparse solves ----
  Field2D helmholtz_sparse(const Field2D& rhs, Staggered space) const {
    const AxisRules& rules = bank.rules(space);
    const DofMap dofs(grid.nx(), grid.ny(), rules);
    const int slot = space == Staggered::EW ? 0 : 1;
    {
      std::lock_guard<std::mutex> lock(lazy_mutex);
      if (!helm_lu[slot]) {
        Triplets t;
        for (int i = 0; i < grid.nx(); ++i) {
          for (int j = 0; j < grid.ny(); ++j) {
            if (const int r = dofs(i, j); r >= 0) {
              add_helmholtz_row(t, r, rules, dofs, 0, i, j, c, nu, grid.hx(), grid.hy());
            }
          }
        }
        Eigen::SparseMatrix<double> a(dofs.count, dofs.count);
        a.setFromTriplets(t.begin(), t.end());
        auto lu = std::make_unique<RealLU>();
        factorize(*lu, a, "helmholtz " + to_string(space));
        helm_lu[slot] = std::move(lu);
      }
    }
    Eigen::VectorXd b(dofs.count);
    for (int i = 0; i < grid.nx(); ++i) {
      for (int j = 0; j < grid.ny(); ++j) {
        if (const int r = dofs(i, j); r >= 0) b[r] = rhs(i, j);
      }
    }
    const Eigen::VectorXd x = helm_lu[slot]->solve(b);
    Field2D out(grid);
    for (int i = 0; i < grid.nx(); ++i) {
      for (int j = 0; j < grid.ny(); ++j) {
        const int r = dofs(i, j);
        out(i, j) = r >= 0 ? x[r] : rhs(i, j) / c;
      }
    }
    return out;
  }

  Field2D poisson_sparse(const Field2D& rhs) const {
    const AxisRules& rules = bank.rules(Staggered::C);
    const DofMap dofs(grid.nx(), grid.ny(), rules);
    const int n = dofs.count;
    {
      std::lock_guard<std::mutex> lock(lazy_mutex);
      if (!poisson_lu) {
        Triplets t;
        const double ax = 1.0 / (grid.hx() * grid.hx());
        const double ay = 1.0 / (grid.hy() * grid.hy());
        for (int i = 0; i < grid.nx(); ++i) {
          for (int j = 0; j < grid.ny(); ++j) {
            const int r = dofs(i, j);
            add_fetch(t, r, rules, dofs, 0, i, j, -2.0 * ax - 2.0 * ay);
            add_fetch(t, r, rules, dofs, 0, i - 1, j, ax);
            add_fetch(t, r, rules, dofs, 0, i + 1, j, ax);
            add_fetch(t, r, rules, dofs, 0, i, j - 1, ay);
            add_fetch(t, r, rules, dofs, 0, i, j + 1, ay);
            t.emplace_back(r, n, 1.0);
            t.emplace_back(n, r, 1.0);
          }
        }
        Eigen::SparseMatrix<double> a(n + 1, n + 1);
        a.setFromTriplets(t.begin(), t.end());
        auto lu = std::make_unique<RealLU>();
        factorize(*lu, a, "poisson");
        poisson_lu = std::move(lu);
      }
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    for (int k = 0; k < n; ++k) b[k] = rhs.data()[k];
    const Eigen::VectorXd x = poisson_lu->solve(b);
    Field2D out(grid);
    for (int k = 0; k < n; ++k) out.data()[k] = x[k];
    remove_mean(out);
    return out;
  }
};

namespace {

StokesBackend default_backend(const GridSpec& grid) {
  switch (grid.bc().type) {
    case BoundaryType::PeriodicXY: return StokesBackend::Spectral;
    case BoundaryType::PeriodicXSlipY: return StokesBackend::Wavenumber;
    case BoundaryType::DirichletXY: return StokesBackend::Saddle;
  }
  return StokesBackend::Saddle;
}

}  // namespace

StokesPlan::StokesPlan(const GridSpec& grid, double c, double nu)
    : StokesPlan(grid, c, nu, default_backend(grid)) {}

StokesPlan::StokesPlan(const GridSpec& grid, double c, double nu, StokesBackend backend) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("stokes plan: c must be positive");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ValidationError("stokes plan: nu must be positive");
  if (backend == StokesBackend::Spectral && grid.bc().type != BoundaryType::PeriodicXY) {
    throw ValidationError("spectral backend requires a periodic grid, got " +
                          to_string(grid.bc().type));
  }
  if (backend == StokesBackend::Wavenumber && grid.bc().type != BoundaryType::PeriodicXSlipY) {
    throw ValidationError("wavenumber backend requires a periodic-x/slip-y grid, got " +
                          to_string(grid.bc().type));
  }
  impl_ = std::make_unique<Impl>(grid, c, nu, backend);
}

StokesPlan::~StokesPlan() = default;
StokesPlan::StokesPlan(StokesPlan&&) noexcept = default;
StokesPlan& StokesPlan::operator=(StokesPlan&&) noexcept = default;

const GridSpec& StokesPlan::grid() const { return impl_->grid; }
double StokesPlan::c() const { return impl_->c; }
double StokesPlan::nu() const { return impl_->nu; }
StokesBackend StokesPlan::backend() const { return impl_->backend; }
const StencilBank& StokesPlan::bank() const { return impl_->bank; }
const std::vector<double>& StokesPlan::lambda_x() const { return impl_->lam_x; }
const std::vector<double>& StokesPlan::lambda_y() const { return impl_->lam_y; }

namespace {

void check_shape(const Field2D& a, const GridSpec& grid, const char* what) {
  if (a.nx() != grid.nx() || a.ny() != grid.ny()) {
    throw ValidationError(std::string(what) + ": right-hand side shape does not match the plan's grid");
  }
}

}  // namespace

StokesSolution StokesPlan::solve(const VelocityField& m) const {
  check_shape(m.u, impl_->grid, "stokes");
  check_shape(m.v, impl_->grid, "stokes");
  if (!m.all_finite()) throw SolverError("stokes: right-hand side is not finite");
  switch (impl_->backend) {
    case StokesBackend::Spectral: return impl_->solve_spectral(m);
    case StokesBackend::Wavenumber: return impl_->solve_modes(m);
    case StokesBackend::Saddle: return std::move(impl_->solve_saddle({m}).front());
  }
  return {};
}

std::vector<StokesSolution> StokesPlan::solve_batch(const std::vector<VelocityField>& ms) const {
  for (const auto& m : ms) {
    check_shape(m.u, impl_->grid, "stokes");
    check_shape(m.v, impl_->grid, "stokes");
    if (!m.all_finite()) throw SolverError("stokes: right-hand side is not finite");
  }
  if (impl_->backend == StokesBackend::Saddle) return impl_->solve_saddle(ms);
  std::vector<StokesSolution> out(ms.size());
  const int n = static_cast<int>(ms.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    out[k] = impl_->backend == StokesBackend::Spectral ? impl_->solve_spectral(ms[k])
                                                       : impl_->solve_modes(ms[k]);
  }
  return out;
}

Field2D StokesPlan::helmholtz(const Field2D& rhs, Staggered space) const {
  check_shape(rhs, impl_->grid, "helmholtz");
  if (space != Staggered::EW && space != Staggered::NS) {
    throw ValidationError("helmholtz: space must be EW or NS");
  }
  if (impl_->backend == StokesBackend::Spectral) return impl_->helmholtz_spectral(rhs);
  return impl_->helmholtz_sparse(rhs, space);
}

Field2D StokesPlan::poisson(const Field2D& rhs) const {
  check_shape(rhs, impl_->grid, "poisson");
  check_compatible(rhs, impl_->grid);
  if (impl_->backend == StokesBackend::Spectral) return impl_->poisson_spectral(rhs);
  return impl_->poisson_sparse(rhs);
}

StokesPlan plan_solver(const GridSpec& grid, double c, double nu) { return {grid, c, nu}; }

Field2D solve_poisson(const StokesPlan& plan, const Field2D& rhs) { return plan.poisson(rhs); }

Field2D solve_helmholtz(const StokesPlan& plan, const Field2D& rhs, Staggered space) {
  return plan.helmholtz(rhs, space);
}

StokesSolution solve_stokes(const StokesPlan& plan, const VelocityField& m) {
  return plan.solve(m);
}

}  // namespace nsstab
