#include "ghost/kernels.hpp"

#include <fftw3.h>
#include <omp.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace ghost::kernels {

namespace {
// plan creation/destruction is not thread-safe in FFTW; execution is
std::mutex g_planner_mutex;
}  // namespace

struct SpectralPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::vector<fftw_complex*> scratch;  // one buffer per thread

  ~Impl() {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    for (auto* s : scratch) fftw_free(s);
  }
};

SpectralPlan::SpectralPlan(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("SpectralPlan: need n >= 2");
  impl_ = new Impl;
  const int threads = std::max(1, omp_get_max_threads());
  impl_->scratch.resize(threads, nullptr);
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  for (int t = 0; t < threads; ++t)
    impl_->scratch[t] = fftw_alloc_complex(static_cast<std::size_t>(n));
  // in-place plans on scratch; executed on any same-aligned buffer
  impl_->fwd = fftw_plan_dft_1d(n, impl_->scratch[0], impl_->scratch[0],
                                FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_1d(n, impl_->scratch[0], impl_->scratch[0],
                                FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralPlan::~SpectralPlan() { delete impl_; }

namespace {

inline fftw_complex* thread_scratch(const SpectralPlan::Impl* impl) {
  return impl->scratch[omp_get_thread_num() % impl->scratch.size()];
}

}  // namespace

void SpectralPlan::forward_line(std::span<cplx> line) const {
  fftw_complex* s = thread_scratch(impl_);
  std::memcpy(s, line.data(), sizeof(cplx) * n_);
  fftw_execute_dft(impl_->fwd, s, s);
  std::memcpy(static_cast<void*>(line.data()), s, sizeof(cplx) * n_);
}

void SpectralPlan::inverse_line(std::span<cplx> line) const {
  fftw_complex* s = thread_scratch(impl_);
  std::memcpy(s, line.data(), sizeof(cplx) * n_);
  fftw_execute_dft(impl_->bwd, s, s);
  const double inv = 1.0 / n_;
  auto* out = line.data();
  auto* in = reinterpret_cast<cplx*>(s);
  for (int i = 0; i < n_; ++i) out[i] = in[i] * inv;
}

namespace {

enum class Dir { fwd, bwd };

void transform_rows(const SpectralPlan::Impl* impl, fftw_plan plan, Grid2D& g,
                    Dir dir, Exec exec) {
  const int n = g.n;
  const double inv = 1.0 / n;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    fftw_complex* s = thread_scratch(impl);
    cplx* r = g.row(i);
    std::memcpy(s, r, sizeof(cplx) * n);
    fftw_execute_dft(plan, s, s);
    const cplx* out = reinterpret_cast<cplx*>(s);
    if (dir == Dir::bwd)
      for (int j = 0; j < n; ++j) r[j] = out[j] * inv;
    else
      std::memcpy(r, out, sizeof(cplx) * n);
  }
}

void transform_cols(const SpectralPlan::Impl* impl, fftw_plan plan, Grid2D& g,
                    Dir dir, Exec exec) {
  const int n = g.n;
  const double inv = 1.0 / n;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int j = 0; j < n; ++j) {
    fftw_complex* s = thread_scratch(impl);
    cplx* buf = reinterpret_cast<cplx*>(s);
    for (int i = 0; i < n; ++i) buf[i] = g.at(i, j);
    fftw_execute_dft(plan, s, s);
    if (dir == Dir::bwd)
      for (int i = 0; i < n; ++i) g.at(i, j) = buf[i] * inv;
    else
      for (int i = 0; i < n; ++i) g.at(i, j) = buf[i];
  }
}

}  // namespace

void SpectralPlan::forward_rows(Grid2D& g, Exec exec) const {
  transform_rows(impl_, impl_->fwd, g, Dir::fwd, exec);
}
void SpectralPlan::inverse_rows(Grid2D& g, Exec exec) const {
  transform_rows(impl_, impl_->bwd, g, Dir::bwd, exec);
}
void SpectralPlan::forward_cols(Grid2D& g, Exec exec) const {
  transform_cols(impl_, impl_->fwd, g, Dir::fwd, exec);
}
void SpectralPlan::inverse_cols(Grid2D& g, Exec exec) const {
  transform_cols(impl_, impl_->bwd, g, Dir::bwd, exec);
}

void apply_dispersion(Grid2D& g, std::span<const double> k, double tau, Exec exec) {
  const int n = g.n;
  std::vector<cplx> phase(n);
  for (int i = 0; i < n; ++i)
    phase[i] = std::exp(cplx(0.0, -0.5 * k[i] * k[i] * tau));
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    cplx* r = g.row(i);
    const cplx pi_ = phase[i];
    for (int j = 0; j < n; ++j) r[j] *= pi_ * phase[j];
  }
}

void apply_dispersion_line(std::span<cplx> line, std::span<const double> k,
                           double tau, Exec exec) {
  const int n = static_cast<int>(line.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i)
    line[i] *= std::exp(cplx(0.0, -0.5 * k[i] * k[i] * tau));
}

void multiply_rows(Grid2D& g, std::span<const cplx> w, Exec exec) {
  const int n = g.n;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    cplx* r = g.row(i);
    const cplx wi = w[i];
    for (int j = 0; j < n; ++j) r[j] *= wi;
  }
}

void apply_window(Grid2D& g, std::span<const double> w, Exec exec) {
  const int n = g.n;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    cplx* r = g.row(i);
    const double wi = w[i];
    for (int j = 0; j < n; ++j) r[j] *= wi * w[j];
  }
}

double squared_norm(const Grid2D& g, double cell, Exec exec) {
  const int n = g.n;
  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total) \
    if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    const cplx* r = g.row(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::norm(r[j]);
    total += s;
  }
  return total * cell;
}

double squared_norm_line(std::span<const cplx> line, double dz, Exec exec) {
  const int n = static_cast<int>(line.size());
  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total) \
    if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) total += std::norm(line[i]);
  return total * dz;
}

cplx inner_product(const Grid2D& a, const Grid2D& b, double cell, Exec exec) {
  const int n = a.n;
  double re = 0.0, im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im) \
    if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    const cplx* ra = a.row(i);
    const cplx* rb = b.row(i);
    cplx s{0.0, 0.0};
    for (int j = 0; j < n; ++j) s += std::conj(ra[j]) * rb[j];
    re += s.real();
    im += s.imag();
  }
  return cplx(re, im) * cell;
}

cplx inner_product_line(std::span<const cplx> a, std::span<const cplx> b,
                        double dz, Exec exec) {
  const int n = static_cast<int>(a.size());
  double re = 0.0, im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im) \
    if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    const cplx s = std::conj(a[i]) * b[i];
    re += s.real();
    im += s.imag();
  }
  return cplx(re, im) * dz;
}

void contract_rows(const Grid2D& g, std::span<const double> phi, double dz,
                   std::span<cplx> out, Exec exec) {
  const int n = g.n;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int j = 0; j < n; ++j) {
    cplx s{0.0, 0.0};
    for (int i = 0; i < n; ++i) s += phi[i] * g.at(i, j);
    out[j] = s * dz;
  }
}

std::vector<double> wavenumbers(int n, double dz) {
  std::vector<double> k(n);
  const double dk = 2.0 * kPi / (n * dz);
  for (int i = 0; i < n; ++i) k[i] = dk * (i < n / 2 ? i : i - n);
  return k;
}

}  // namespace ghost::kernels
