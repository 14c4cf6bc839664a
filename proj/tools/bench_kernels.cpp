// Times the grid kernels with the serial reference against the OpenMP
// variants on a propagation-sized workload.
//
//   bench_kernels [points] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "ghost/grid_oracle.hpp"

using namespace ghost;
namespace kn = ghost::kernels;

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int repeats, const auto& fn) {
  fn();  // warm-up
  const auto t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-22s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 2048;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  const double dz = 12.8 / n;

  std::printf("grid %dx%d, %d repeats, %d threads\n", n, n, repeats,
              omp_get_max_threads());
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  kn::Grid2D g(n);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : g.v) v = cplx(u(rng), u(rng));
  const auto k = kn::wavenumbers(n, dz);
  kn::SpectralPlan plan(n);
  std::vector<double> w(n, 1.0);
  for (int i = 0; i < n / 8; ++i) w[i] = w[n - 1 - i] = 0.5;
  std::vector<cplx> rowscale(n, cplx(0.999, 0.01));
  std::vector<double> prof(n, 0.1);
  std::vector<cplx> contracted(n);

  report("fft rows+cols",
         time_ms(repeats,
                 [&] {
                   plan.forward_rows(g, kn::Exec::serial);
                   plan.forward_cols(g, kn::Exec::serial);
                 }),
         time_ms(repeats, [&] {
           plan.forward_rows(g, kn::Exec::parallel);
           plan.forward_cols(g, kn::Exec::parallel);
         }));
  report("dispersion phase",
         time_ms(repeats, [&] { kn::apply_dispersion(g, k, 0.37, kn::Exec::serial); }),
         time_ms(repeats, [&] { kn::apply_dispersion(g, k, 0.37, kn::Exec::parallel); }));
  report("slit window",
         time_ms(repeats, [&] { kn::multiply_rows(g, rowscale, kn::Exec::serial); }),
         time_ms(repeats, [&] { kn::multiply_rows(g, rowscale, kn::Exec::parallel); }));
  report("absorber window",
         time_ms(repeats, [&] { kn::apply_window(g, w, kn::Exec::serial); }),
         time_ms(repeats, [&] { kn::apply_window(g, w, kn::Exec::parallel); }));
  report("squared norm",
         time_ms(repeats, [&] { (void)kn::squared_norm(g, dz * dz, kn::Exec::serial); }),
         time_ms(repeats,
                 [&] { (void)kn::squared_norm(g, dz * dz, kn::Exec::parallel); }));
  report("row contraction",
         time_ms(repeats,
                 [&] { kn::contract_rows(g, prof, dz, contracted, kn::Exec::serial); }),
         time_ms(repeats, [&] {
           kn::contract_rows(g, prof, dz, contracted, kn::Exec::parallel);
         }));

  // end to end: a full grid-propagation run at this resolution
  if ((n & (n - 1)) == 0 && n >= 256) {
    const SourceParams src{1.0, 100.0};
    Geometry geo;
    geo.n = 3;
    geo.slit_spacing = 1.0;
    geo.slit_width = 0.1;
    geo.lambda = 0.1;
    geo.L1 = 4.71238898038469;
    geo.L2 = 15.707963267948966;
    geo.slit_offset = geo.centered_offset();
    oracle::GridSpec grid;
    grid.extent = n * 0.1 / 16.0;  // keeps the slit resolved at any n
    grid.points = n;
    const DetectorGram det = uniform_gram(3, 0.5);
    report("grid propagation",
           time_ms(1, [&] {
             (void)oracle::propagate_pair(src, geo, det, {}, grid, kn::Exec::serial);
           }),
           time_ms(1, [&] {
             (void)oracle::propagate_pair(src, geo, det, {}, grid, kn::Exec::parallel);
           }));
  }
  return 0;
}
