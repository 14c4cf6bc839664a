#pragma once

// Coincidence interference pattern of the partner particle and the
// fringe-based coherence extraction.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ghost/coherence.hpp"
#include "ghost/gaussian_core.hpp"
#include "ghost/kernels.hpp"

namespace ghost {

using kernels::Exec;

// Everything the analytic route derives from (source, geometry): conditioned
// modes at the slit plane, both particles' branch modes at the detector
// planes, and the branch weights entering the coincidence pattern.
struct Pipeline {
  SlitDecomposition slits;           // c_k and psi_k at the slit plane
  std::vector<Gaussian1D> phi_d;     // particle-1 branch modes at D1
  std::vector<Gaussian1D> psi_d;     // partner branch modes at D2
  std::vector<double> envelopes;     // a_k = |phi_d_k(z1_detect)|
  std::vector<double> branch_phases; // arg phi_d_k(z1_detect)
  double max_psi_overlap = 0.0;      // max pairwise |<psi_j|psi_k>|
  bool matrix_route_applicable = false;  // overlap gate at 1e-6
};

Pipeline build_pipeline(const SourceParams& src, const Geometry& geo);

struct PatternMeta {
  SourceParams src;
  Geometry geo;
  std::vector<double> probs;   // pipeline path amplitudes (empty for abstract runs)
  std::vector<double> phases;  // configured branch phases theta_k
};

struct PatternResult {
  std::vector<double> z2;
  std::vector<double> intensity;
  std::vector<double> incoherent;  // cross terms removed
  PatternMeta meta;
};

// Exact coincidence pattern: the n evolved branch wavefunctions are summed at
// z1 = z1_detect and squared with detector-overlap weights.  Path amplitudes
// come from the slit conditioning; det supplies the Gram matrix only.
PatternResult coincidence_pattern(const SourceParams& src, const Geometry& geo,
                                  const DetectorGram& det,
                                  std::span<const double> z2_grid,
                                  std::span<const double> phases = {},
                                  Exec exec = Exec::parallel);

// Uniform grid of `points` samples spanning +-10 fringe periods (the default
// pattern grid; configs may override).
std::vector<double> default_z2_grid(const SourceParams& src, const Geometry& geo,
                                    int points = 4001);

// Fringe period of the exact pattern's leading cross term (adjacent slits).
double fringe_period(const SourceParams& src, const Geometry& geo);

enum class ClosedFormVariant { full, broad_envelope };

// Strong-entanglement closed forms, evaluated two ways: `printed` follows the
// published formula verbatim (its fringe-phase denominators use gamma^4 terms
// and carry opposite signs on the quadratic offset phases); `rederived` uses
// the denominators and signs obtained directly from the branch product.
// The two are reported side by side where they differ.
struct ClosedFormPattern {
  std::vector<double> z2;
  std::vector<double> printed;
  std::vector<double> rederived;
};

ClosedFormPattern closed_form_pattern(const SourceParams& src, const Geometry& geo,
                                      const DetectorGram& det,
                                      std::span<const double> z2_grid,
                                      std::span<const double> phases = {},
                                      ClosedFormVariant variant = ClosedFormVariant::full);

// Fringe-based coherence: locate the primary maximum of intensity/incoherent
// (parabolic refinement around the densest grid point) and return
// (1/(n-1)) (I_max - I_inc) / I_inc there.  Throws if the maximum sits on the
// grid boundary (grid too narrow); a flat ratio returns 0.
double coherence_from_pattern(const PatternResult& p);

// Duality report driven by the full pipeline.
DualityReport pipeline_duality(const SourceParams& src, const Geometry& geo,
                               const DetectorGram& det,
                               std::span<const double> phases = {},
                               std::span<const double> z2_grid = {});

}  // namespace ghost
