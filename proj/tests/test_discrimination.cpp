#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ghost/discrimination.hpp"

using namespace ghost;

TEST_CASE("uniform gram: identity, all-ones, and eigenvalue floor") {
  const DetectorGram ortho = uniform_gram(3, 0.0);
  CHECK(validate_gram(ortho).ok);
  CHECK(distinguishability(ortho) == doctest::Approx(1.0).epsilon(1e-15));

  const DetectorGram ones = uniform_gram(3, 1.0);
  CHECK(validate_gram(ones).ok);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(ones.gram(i, j) - cplx(1.0, 0.0)) == 0.0);

  const GramValidation v = validate_gram(uniform_gram(4, 0.3));
  CHECK(v.ok);
  CHECK(v.min_eigenvalue == doctest::Approx(0.7).epsilon(1e-12));

  CHECK_THROWS_AS(uniform_gram(3, -0.1), std::domain_error);
  CHECK_THROWS_AS(uniform_gram(3, 1.5), std::domain_error);
}

TEST_CASE("gram validation: structured failures, no throws") {
  DetectorGram det = uniform_gram(2, 0.4);
  det.gram(0, 1) = cplx(1.5, 0.0);
  det.gram(1, 0) = cplx(1.5, 0.0);
  const GramValidation v = validate_gram(det);
  CHECK_FALSE(v.ok);
  CHECK(v.max_abs_entry == doctest::Approx(1.5));
  bool mentions_bound = false;
  for (const auto& f : v.failures) mentions_bound |= f.find("|G_ij|") != std::string::npos;
  CHECK(mentions_bound);

  DetectorGram skew = uniform_gram(2, 0.4);
  skew.gram(0, 1) = cplx(0.4, 0.2);  // hermiticity broken
  CHECK_FALSE(validate_gram(skew).ok);
}

TEST_CASE("gram of random unit vectors is a valid detector state set") {
  for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
    const DetectorGram det = random_gram(5, seed);
    const GramValidation v = validate_gram(det);
    CHECK(v.ok);
    CHECK(v.min_eigenvalue >= -1e-10);
    CHECK(v.diagonal_deviation <= 1e-12);
  }
}

TEST_CASE("random gram is reproducible for a fixed seed") {
  const DetectorGram a = random_gram(4, 123);
  const DetectorGram b = random_gram(4, 123);
  CHECK((a.gram - b.gram).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.probs == b.probs);
}

TEST_CASE("distinguishability: closed-form spot values") {
  // identical detector states carry no which-path information
  DetectorGram det = uniform_gram(2, 1.0);
  CHECK(distinguishability(det) == doctest::Approx(0.0).epsilon(1e-15));

  // n=3, equal weights, overlap 1/2: 1 - (1/2)(6 * (1/3) * 0.5) = 0.5
  CHECK(distinguishability(uniform_gram(3, 0.5)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("distinguishability stays within [0,1] on random detectors") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (int n : {2, 3, 5}) {
      const double d = distinguishability(random_gram(n, seed));
      CHECK(d >= 0.0);
      CHECK(d <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("distinguishability decreases as detector states grow more similar") {
  double previous = 2.0;
  for (double s : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const double d = distinguishability(uniform_gram(4, s));
    CHECK(d < previous + 1e-15);
    previous = d;
  }
}

TEST_CASE("distinguishability is invariant under path relabeling") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    DetectorGram det = random_gram(4, rng());
    const double before = distinguishability(det);

    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    DetectorGram shuffled = det;
    for (int i = 0; i < 4; ++i) {
      shuffled.probs[i] = det.probs[perm[i]];
      for (int j = 0; j < 4; ++j) shuffled.gram(i, j) = det.gram(perm[i], perm[j]);
    }
    CHECK(distinguishability(shuffled) == doctest::Approx(before).epsilon(1e-13));
  }
}

TEST_CASE("distinguishability depends only on overlap magnitudes") {
  // conjugation by a diagonal unitary rotates off-diagonal phases and is
  // exactly a relabeling of the detector-state phases
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    DetectorGram det = random_gram(3, rng());
    const double before = distinguishability(det);
    Eigen::VectorXcd u(3);
    for (int i = 0; i < 3; ++i) u(i) = std::exp(cplx(0.0, angle(rng)));
    DetectorGram rotated = det;
    rotated.gram = u.asDiagonal() * det.gram * u.conjugate().asDiagonal();
    CHECK(validate_gram(rotated).ok);
    CHECK(distinguishability(rotated) == doctest::Approx(before).epsilon(1e-13));
  }
}

TEST_CASE("shrinking every overlap never lowers the path knowledge") {
  // the Schur square of a gram matrix is again a valid gram matrix with
  // every off-diagonal magnitude reduced
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const DetectorGram det = random_gram(n, rng());
    DetectorGram squared = det;
    squared.gram = det.gram.cwiseProduct(det.gram.conjugate());
    CHECK(validate_gram(squared).ok);
    CHECK(distinguishability(squared) >= distinguishability(det) - 1e-13);
  }
}
