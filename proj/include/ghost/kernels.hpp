#pragma once

// Grid kernels used by the brute-force propagation path.  Every kernel has a
// serial and an OpenMP variant selected by Exec; the serial one is the
// reference the tests compare against and the benchmark tool times both.

#include <span>
#include <vector>

#include "ghost/common.hpp"

namespace ghost::kernels {

enum class Exec { serial, parallel };

// Row-major complex field, v[i*n + j] = field(z1_i, z2_j).
struct Grid2D {
  int n = 0;
  std::vector<cplx> v;

  Grid2D() = default;
  explicit Grid2D(int points) : n(points), v(static_cast<std::size_t>(points) * points) {}
  cplx& at(int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; }
  const cplx& at(int i, int j) const { return v[static_cast<std::size_t>(i) * n + j]; }
  cplx* row(int i) { return v.data() + static_cast<std::size_t>(i) * n; }
  const cplx* row(int i) const { return v.data() + static_cast<std::size_t>(i) * n; }
};

// Cached 1D FFT plans for one transform length, applied along rows or columns
// through per-thread scratch buffers.  Plan creation is serialized; execution
// is thread-safe.
class SpectralPlan {
 public:
  explicit SpectralPlan(int n);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  int size() const { return n_; }

  void forward_rows(Grid2D& g, Exec exec) const;
  void inverse_rows(Grid2D& g, Exec exec) const;  // includes the 1/n factor
  void forward_cols(Grid2D& g, Exec exec) const;
  void inverse_cols(Grid2D& g, Exec exec) const;

  void forward_line(std::span<cplx> line) const;
  void inverse_line(std::span<cplx> line) const;

  struct Impl;

 private:
  Impl* impl_;
  int n_;
};

// Multiply by the free-evolution phase exp(-i (k1^2 + k2^2) tau / 2) in the
// spectral domain; k holds the per-index wavenumbers (FFT ordering).
void apply_dispersion(Grid2D& g, std::span<const double> k, double tau, Exec exec);

// 1D variant for line propagation.
void apply_dispersion_line(std::span<cplx> line, std::span<const double> k,
                           double tau, Exec exec);

// Per-row scalar multiply: row i scaled by w[i] (slit windows act on z1).
void multiply_rows(Grid2D& g, std::span<const cplx> w, Exec exec);

// Separable window w(z1) w(z2), used as the absorbing boundary taper.
void apply_window(Grid2D& g, std::span<const double> w, Exec exec);

// sum |v|^2 * cell (discrete L2 norm squared)
double squared_norm(const Grid2D& g, double cell, Exec exec);
double squared_norm_line(std::span<const cplx> line, double dz, Exec exec);

// sum conj(a) b * cell
cplx inner_product(const Grid2D& a, const Grid2D& b, double cell, Exec exec);
cplx inner_product_line(std::span<const cplx> a, std::span<const cplx> b,
                        double dz, Exec exec);

// Contraction of phi against the z1 axis: out[j] = sum_i phi[i] g(i,j) dz.
void contract_rows(const Grid2D& g, std::span<const double> phi, double dz,
                   std::span<cplx> out, Exec exec);

// FFT-ordered wavenumbers for n points spaced dz apart.
std::vector<double> wavenumbers(int n, double dz);

}  // namespace ghost::kernels
