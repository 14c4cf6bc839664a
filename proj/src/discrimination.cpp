#include "ghost/discrimination.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ghost {

namespace {
constexpr double kTol = 1e-10;
}

DetectorGram DetectorGram::with_probs(std::vector<double> c) const {
  if (static_cast<int>(c.size()) != n())
    throw std::invalid_argument("detector: probability vector size mismatch");
  DetectorGram out = *this;
  out.probs = std::move(c);
  return out;
}

DetectorGram uniform_gram(int n, double s) {
  if (n < 2) throw std::domain_error("uniform_gram: need n >= 2");
  if (s < 0.0 || s > 1.0) throw std::domain_error("uniform_gram: overlap must be in [0,1]");
  DetectorGram det;
  det.gram = Eigen::MatrixXcd::Constant(n, n, cplx(s, 0.0));
  det.gram.diagonal().setConstant(cplx(1.0, 0.0));
  det.probs.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return det;
}

DetectorGram random_gram(int n, std::uint64_t seed) {
  if (n < 2) throw std::domain_error("random_gram: need n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd V(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) V(i, j) = cplx(gauss(rng), gauss(rng));
    V.col(j) /= V.col(j).norm();
  }
  DetectorGram det;
  det.gram = V.adjoint() * V;
  det.gram.diagonal().setConstant(cplx(1.0, 0.0));
  det.probs.resize(n);
  double norm2 = 0.0;
  for (double& p : det.probs) {
    p = std::abs(gauss(rng));
    norm2 += p * p;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& p : det.probs) p *= inv;
  return det;
}

GramValidation validate_gram(const DetectorGram& det) {
  GramValidation v;
  const auto& G = det.gram;
  const int n = det.n();
  if (n < 2 || G.cols() != n) {
    v.failures.push_back("gram matrix must be square with n >= 2");
    return v;
  }
  v.hermiticity_residual = (G - G.adjoint()).cwiseAbs().maxCoeff();
  v.diagonal_deviation = (G.diagonal().array() - 1.0).abs().maxCoeff();
  v.max_abs_entry = G.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (G + G.adjoint()), Eigen::EigenvaluesOnly);
  v.min_eigenvalue = es.eigenvalues().minCoeff();

  if (static_cast<int>(det.probs.size()) != n) {
    v.failures.push_back("probability vector size mismatch");
  } else {
    double norm2 = 0.0;
    for (double p : det.probs) {
      if (p < 0.0) v.failures.push_back("negative path amplitude");
      norm2 += p * p;
    }
    v.prob_norm_deviation = std::abs(norm2 - 1.0);
    if (v.prob_norm_deviation > kTol)
      v.failures.push_back("path probabilities not normalized");
  }

  if (v.hermiticity_residual > kTol) v.failures.push_back("gram matrix not Hermitian");
  if (v.diagonal_deviation > kTol) v.failures.push_back("diagonal entries must be 1");
  if (v.max_abs_entry > 1.0 + kTol) v.failures.push_back("|G_ij| <= 1 violated");
  if (v.min_eigenvalue < -kTol) v.failures.push_back("gram matrix not positive semidefinite");
  v.ok = v.failures.empty();
  return v;
}

double distinguishability(const DetectorGram& det) {
  const int n = det.n();
  double cross = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) cross += det.probs[i] * det.probs[j] * std::abs(det.gram(i, j));
  return 1.0 - cross / (n - 1);
}

}  // namespace ghost
