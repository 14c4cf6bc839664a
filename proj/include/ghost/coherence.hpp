#pragma once

// Conditioned density matrix of the partner particle and the normalized
// l1 coherence measure, plus the duality report combining coherence with
// path-distinguishability.

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ghost/discrimination.hpp"

namespace ghost {

struct DensityMatrix {
  Eigen::MatrixXcd rho;

  int n() const { return static_cast<int>(rho.rows()); }
  // Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10.
  bool valid(std::string* why = nullptr) const;
};

// Partner state with no coincidence conditioning: diag(c_1^2 ... c_n^2).
DensityMatrix unconditional_rho(const DetectorGram& det);

// Coincidence-conditioned density matrix in the conditioned-mode basis:
//   rho_jk = c_j c_k a_j a_k e^{i(phi_j - phi_k)} conj(G_jk) / sum_m c_m^2 a_m^2
// where a_k >= 0 are the branch amplitudes of particle 1 at the fixed
// detector and phi_k their phases.
DensityMatrix conditional_rho(const DetectorGram& det,
                              std::span<const double> envelopes,
                              std::span<const double> phases);

// (1/(n-1)) sum_{i != j} |rho_ij|
double coherence(const DensityMatrix& rho);

struct DualityReport {
  double d_q1 = 0.0;
  std::optional<double> c2_matrix;   // absent when the matrix route is inapplicable
  std::optional<double> c2_pattern;  // fringe-extracted value when available
  double sum = 0.0;                  // d_q1 + c2 (matrix route when present)
  double slack = 0.0;                // 1 - sum
  bool saturated = false;            // equal envelopes and sum = 1, both within 1e-9
  bool bound_violated = false;       // sum > 1 + 1e-9
  bool matrix_route_applicable = true;
  double max_psi_overlap = 0.0;      // pairwise |<psi_j|psi_k>| gate diagnostic
};

// Assembles distinguishability and coherence.  A violated bound is reported,
// never thrown.  When matrix_route_applicable is false (conditioned modes not
// orthogonal within 1e-6) the sum falls back to the pattern-route coherence.
DualityReport duality_report(const DetectorGram& det,
                             std::span<const double> envelopes,
                             std::span<const double> phases,
                             std::optional<double> pattern_c2 = std::nullopt,
                             bool matrix_route_applicable = true,
                             double max_psi_overlap = 0.0);

}  // namespace ghost
