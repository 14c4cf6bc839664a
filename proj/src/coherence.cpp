#include "ghost/coherence.hpp"

#include <cmath>
#include <stdexcept>

namespace ghost {

bool DensityMatrix::valid(std::string* why) const {
  const auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (rho.rows() != rho.cols() || rho.rows() < 1) return fail("not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return fail("not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
    return fail("trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) return fail("negative eigenvalue");
  return true;
}

DensityMatrix unconditional_rho(const DetectorGram& det) {
  const int n = det.n();
  DensityMatrix dm;
  dm.rho = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) dm.rho(k, k) = det.probs[k] * det.probs[k];
  return dm;
}

DensityMatrix conditional_rho(const DetectorGram& det,
                              std::span<const double> envelopes,
                              std::span<const double> phases) {
  const int n = det.n();
  if (static_cast<int>(envelopes.size()) != n)
    throw std::invalid_argument("conditional_rho: envelope count mismatch");
  if (!phases.empty() && static_cast<int>(phases.size()) != n)
    throw std::invalid_argument("conditional_rho: phase count mismatch");

  double norm = 0.0;
  for (int k = 0; k < n; ++k) {
    if (envelopes[k] < 0.0)
      throw std::invalid_argument("conditional_rho: envelopes must be nonnegative");
    norm += det.probs[k] * det.probs[k] * envelopes[k] * envelopes[k];
  }
  if (norm <= 0.0)
    throw std::domain_error("conditional_rho: all envelopes vanish, particle 1 never reaches D1");

  DensityMatrix dm;
  dm.rho.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double pj = phases.empty() ? 0.0 : phases[j];
      const double pk = phases.empty() ? 0.0 : phases[k];
      dm.rho(j, k) = det.probs[j] * det.probs[k] * envelopes[j] * envelopes[k] *
                     std::exp(cplx(0.0, pj - pk)) * std::conj(det.gram(j, k)) / norm;
    }
  }
  return dm;
}

double coherence(const DensityMatrix& dm) {
  const int n = dm.n();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) sum += std::abs(dm.rho(i, j));
  return sum / (n - 1);
}

DualityReport duality_report(const DetectorGram& det,
                             std::span<const double> envelopes,
                             std::span<const double> phases,
                             std::optional<double> pattern_c2,
                             bool matrix_route_applicable,
                             double max_psi_overlap) {
  DualityReport rep;
  rep.d_q1 = distinguishability(det);
  rep.c2_pattern = pattern_c2;
  rep.matrix_route_applicable = matrix_route_applicable;
  rep.max_psi_overlap = max_psi_overlap;

  double c2 = 0.0;
  if (matrix_route_applicable) {
    rep.c2_matrix = coherence(conditional_rho(det, envelopes, phases));
    c2 = *rep.c2_matrix;
  } else if (pattern_c2) {
    c2 = *pattern_c2;
  }
  rep.sum = rep.d_q1 + c2;
  rep.slack = 1.0 - rep.sum;
  rep.bound_violated = rep.sum > 1.0 + 1e-9;

  bool equal_env = true;
  for (std::size_t k = 1; k < envelopes.size(); ++k)
    if (std::abs(envelopes[k] - envelopes[0]) > 1e-9) equal_env = false;
  rep.saturated = equal_env && std::abs(rep.sum - 1.0) <= 1e-9;
  return rep;
}

}  // namespace ghost
