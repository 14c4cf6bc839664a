#pragma once

// Which-path detector model.  The detector is an abstract n-state system;
// everything downstream depends on it only through the Gram matrix of its
// states and the path probabilities, so no Hilbert-space embedding is kept.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ghost/common.hpp"

namespace ghost {

struct DetectorGram {
  Eigen::MatrixXcd gram;       // G_ij = <d_i|d_j>, Hermitian, unit diagonal, PSD
  std::vector<double> probs;   // path amplitudes c_k >= 0, sum c_k^2 = 1

  int n() const { return static_cast<int>(gram.rows()); }

  DetectorGram with_probs(std::vector<double> c) const;
};

// G_ij = s off the diagonal, 1 on it; equal path amplitudes.  PSD for s in [0,1].
DetectorGram uniform_gram(int n, double s);

// Gram matrix of n random unit vectors in C^n (PSD by construction) with
// random positive normalized path amplitudes.
DetectorGram random_gram(int n, std::uint64_t seed);

struct GramValidation {
  bool ok = false;
  double hermiticity_residual = 0.0;
  double diagonal_deviation = 0.0;
  double max_abs_entry = 0.0;
  double min_eigenvalue = 0.0;
  double prob_norm_deviation = 0.0;
  std::vector<std::string> failures;
};

// Structured validation; never throws.  Acceptance tolerance 1e-10.
GramValidation validate_gram(const DetectorGram& det);

// UQSD path-distinguishability  1 - (1/(n-1)) sum_{i!=j} c_i c_j |G_ij|.
double distinguishability(const DetectorGram& det);

}  // namespace ghost
