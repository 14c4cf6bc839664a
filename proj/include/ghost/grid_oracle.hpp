#pragma once

// Brute-force validation path: discretized propagation of the full
// two-particle wavefunction with no conditioned-mode closed forms.  Shares
// only the source state and the slit mode shape with the analytic pipeline.

#include <span>
#include <vector>

#include "ghost/coherence.hpp"
#include "ghost/pattern.hpp"

namespace ghost::oracle {

using kernels::Exec;
using kernels::Grid2D;

// How the slit plane acts on each branch.
//   projector: branch_k = phi_k(z1) * <phi_k|Psi>(z2)  (the modal decomposition
//              the analytic route is built on; branches stay separable)
//   mask:      branch_k = exp(-(z1-c_k)^2/eps^2) * Psi  (finite transmission
//              window; keeps intra-slit correlations the modal picture drops)
enum class SlitModel { projector, mask };

struct GridSpec {
  double extent = 6.4;   // half-width of the z domain, both axes
  int points = 2048;     // samples per axis, power of two
  double padding = 0.10; // absorbing-boundary fraction per edge
  SlitModel slit_model = SlitModel::projector;

  double dz() const { return 2.0 * extent / points; }
  // points >= 256 and a power of two; padding in [0, 0.25]; the grid must
  // resolve the slit width and the finest fringe with >= 8 samples.
  // Containment (the domain must hold every branch at the final time) is
  // enforced during propagation: a branch leaving more than 1e-6 of its
  // intensity in the padding shell aborts the run.
  void validate(const Geometry& geo) const;
};

struct OracleDiagnostics {
  double norm_drift = 0.0;       // max relative L2 drift over all spectral legs
  double transmitted = 0.0;      // post-slit norm fraction (Gram-weighted)
  double branch_escape = 0.0;    // max branch intensity fraction in the padding shell
};

struct OracleResult {
  PatternResult pattern;   // coincidence pattern on the un-padded core grid
  DensityMatrix rho;       // conditioned density matrix in the branch-mode basis
  // per-branch conditioned slices on the core grid (phase tags included);
  // rho lives in the basis of these, each normalized
  std::vector<std::vector<cplx>> slices;
  OracleDiagnostics diag;
};

OracleResult propagate_pair(const SourceParams& src, const Geometry& geo,
                            const DetectorGram& det,
                            std::span<const double> phases, const GridSpec& grid,
                            Exec exec = Exec::parallel);

struct PatternComparison {
  double rel_l2 = 0.0;            // ||a-b||_2 / ||b||_2 on the common grid
  double max_pointwise = 0.0;     // max |a-b| / max |b|
  double fringe_offset = 0.0;     // refined primary-maximum position difference
  double visibility_delta = 0.0;  // difference of (rmax-rmin)/(rmax+rmin), r = I/I_inc
};

// Compares intensities on b's grid (a is linearly resampled when the grids
// differ).  Throws if the domains barely overlap.
PatternComparison compare_patterns(const PatternResult& a, const PatternResult& b);

// 1D spectral free propagation on a periodic grid (test utility).
std::vector<cplx> propagate_line(std::vector<cplx> line, double dz, double tau,
                                 Exec exec = Exec::parallel);

// Free spectral propagation of a sampled 2D field (test utility).
void propagate_free(Grid2D& field, double extent, double tau,
                    Exec exec = Exec::parallel);

// Samples an analytic pair state on the grid (test utility).
Grid2D sample_pair(const TwoParticleGaussian& state, const GridSpec& grid,
                   Exec exec = Exec::parallel);

}  // namespace ghost::oracle
