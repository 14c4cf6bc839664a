// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
//   acceptance <configs-dir>
//
// The criteria exercise the duality bound on randomized detector/envelope
// draws, the exact saturation identity, the orthogonal-detector corner, the
// analytic-vs-grid-propagation equivalence on the shipped reference
// configurations, the strong-limit width convergence, the weak-entanglement
// degradation, the two coherence routes against each other, and norm/unitarity
// preservation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ghost/export.hpp"

using namespace ghost;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int id, bool pass, const std::string& what, const std::string& detail,
            double secs) {
  std::printf("[AC%d] %s  %-58s %s  (%.2f s)\n", id, pass ? "PASS" : "FAIL",
              what.c_str(), detail.c_str(), secs);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

double rel_l2_on_common(const PatternResult& analytic, const PatternResult& o) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < o.z2.size(); ++i) {
    num += std::pow(analytic.intensity[i] - o.intensity[i], 2);
    den += std::pow(o.intensity[i], 2);
  }
  return std::sqrt(num / den);
}

// AC1: duality bound over 1000 seeded random configurations
void ac1() {
  Timer t;
  std::mt19937_64 rng(20250810);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double worst = 0.0;
  std::string first;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const DetectorGram det = random_gram(n, rng());
    std::vector<double> env(n), ph(n);
    for (int k = 0; k < n; ++k) {
      env[k] = u(rng);
      ph[k] = 2.0 * kPi * u(rng);
    }
    env[0] = std::max(env[0], 1e-6);
    const DualityReport rep = duality_report(det, env, ph);
    if (rep.sum > 1.0 + 1e-9) {
      ++violations;
      if (rep.sum > worst) worst = rep.sum;
      if (first.empty())
        first = fmt("first at trial %g: sum=%.6f", trial, rep.sum);
    }
  }
  const bool pass = violations == 0;
  std::string detail = pass ? "all 1000 sums <= 1+1e-9"
                            : fmt("%g/1000 violations, worst sum %.4f; ", violations,
                                  worst) + first;
  report(1, pass, "duality bound on random gram/probs/envelopes", detail, t.seconds());
  if (!pass) {
    std::printf(
        "      note: the bound is provable only for equal envelopes; independent\n"
        "      envelope draws reweight the conditioned state against the\n"
        "      unconditioned path weights, and the sum can legitimately exceed 1\n"
        "      (e.g. probs (0.949, 0.316), envelopes (1, 3), unit gram -> sum 1.4).\n"
        "      The report flags these; they are not an implementation defect.\n");
  }
}

// AC2: equal envelopes saturate the identity for any detector
void ac2() {
  Timer t;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const DetectorGram det = random_gram(n, rng());
    const std::vector<double> env(n, 1.0);
    const DualityReport rep = duality_report(det, env, {});
    worst = std::max(worst, std::abs(rep.sum - 1.0));
  }
  report(2, worst <= 1e-9, "saturation identity with equal envelopes",
         fmt("max |sum-1| = %.2e over 200 grams", worst), t.seconds());
}

// AC3: orthogonal detector states
void ac3(const RunConfig& strong) {
  Timer t;
  const DetectorGram det = uniform_gram(strong.geometry.n, 0.0);
  const double d = distinguishability(det);
  const PatternResult p = coincidence_pattern(strong.source, strong.geometry, det,
                                              strong.z2_points());
  double cross = 0.0;
  for (std::size_t i = 0; i < p.z2.size(); ++i)
    cross = std::max(cross, std::abs(p.intensity[i] - p.incoherent[i]));
  const double c2 = coherence_from_pattern(p);
  const bool pass = d == 1.0 && cross < 1e-12 && c2 == 0.0;
  report(3, pass, "orthogonal detectors: D=1, no cross terms",
         fmt("D=%.1f, max cross %.1e, C2=%.1f", d, cross, c2), t.seconds());
}

// AC4: oracle equivalence + spacing convergence on strong.json
void ac4(const RunConfig& strong) {
  Timer t;
  const DetectorGram det = strong.detector.build(strong.geometry.n, std::nullopt);
  std::vector<double> errors;
  for (int points : {1024, 2048}) {
    oracle::GridSpec grid = strong.oracle_grid;
    grid.points = points;
    const oracle::OracleResult o =
        oracle::propagate_pair(strong.source, strong.geometry, det, strong.phases, grid);
    const PatternResult analytic = coincidence_pattern(
        strong.source, strong.geometry, det, o.pattern.z2, strong.phases);
    errors.push_back(rel_l2_on_common(analytic, o.pattern));
  }
  const double tol = strong.oracle_tolerance;
  const bool within = errors.back() <= tol;
  // halving, or both resolutions already on the model floor far below tolerance
  const bool converged = errors[0] >= 1.9 * errors[1] || errors[1] <= 0.1 * tol;
  report(4, within && converged, "grid-propagation equivalence on strong.json",
         fmt("rel L2: 1024 -> %.2e, 2048 -> %.2e (tol %.0e)", errors[0], errors[1],
             tol),
         t.seconds());
}

// AC5: strong-limit conditioned width convergence
void ac5(const RunConfig& strong) {
  Timer t;
  const Geometry geo = strong.geometry;
  const double base = std::max(geo.slit_width, 1.0 / strong.source.sigma);
  double previous = 1e300;
  bool monotone = true;
  double final_rel = 0.0;
  for (double mult : {10.0, 30.0, 100.0}) {
    const SourceParams src{strong.source.sigma, mult * base};
    const cplx exact = exact_conditioned_gamma(src, geo);
    const cplx limit = gamma_limit(src, geo, Regime::strong);
    const double rel = std::abs(exact - limit) / std::abs(limit);
    monotone = monotone && rel < previous;
    previous = rel;
    final_rel = rel;
  }
  report(5, monotone && final_rel < 1e-3, "strong-limit width convergence",
         fmt("rel err %.2e at 100x, monotone over 10/30/100", final_rel), t.seconds());
}

// AC6: weak entanglement far from saturation, below the strong coherence
void ac6(const RunConfig& strong, const RunConfig& weak) {
  Timer t;
  const DetectorGram det = uniform_gram(strong.geometry.n, 0.5);
  const DualityReport rs = pipeline_duality(strong.source, strong.geometry, det,
                                            strong.phases, strong.z2_points());
  const DualityReport rw = pipeline_duality(weak.source, weak.geometry, det,
                                            weak.phases, weak.z2_points());
  // grid-propagation confirmation of the weak pattern
  const oracle::OracleResult o = oracle::propagate_pair(
      weak.source, weak.geometry, det, weak.phases, weak.oracle_grid);
  const PatternResult analytic = coincidence_pattern(weak.source, weak.geometry, det,
                                                     o.pattern.z2, weak.phases);
  const double oerr = rel_l2_on_common(analytic, o.pattern);
  const bool pass = *rw.c2_pattern < *rs.c2_pattern && rw.sum < 1.0 - 0.05 &&
                    oerr <= weak.oracle_tolerance;
  report(6, pass, "weak entanglement degrades the partner coherence",
         fmt("C2 %.3f < %.3f, weak sum %.3f", *rw.c2_pattern, *rs.c2_pattern, rw.sum) +
             fmt(", oracle rel L2 %.1e", oerr),
         t.seconds());
}

// AC7: fringe-extracted vs density-matrix coherence
void ac7() {
  Timer t;
  Geometry geo;
  geo.n = 3;
  geo.slit_spacing = 1.0;
  geo.slit_width = 0.1;
  geo.lambda = 0.5;
  geo.L1 = 18849.555921538757;
  geo.L2 = 1.2566370614359172;
  geo.slit_offset = geo.centered_offset();
  const SourceParams src{10.0, 20.0};

  double worst = 0.0;
  double worst_overlap = 0.0;
  for (double s : {0.25, 0.5, 0.8}) {
    const Pipeline pl = build_pipeline(src, geo);
    worst_overlap = std::max(worst_overlap, pl.max_psi_overlap);
    const double period = fringe_period(src, geo);
    std::vector<double> z2(16001);
    for (int i = 0; i < 16001; ++i)
      z2[i] = -1.5 * period + 3.0 * period * i / 16000.0;
    const DetectorGram det = uniform_gram(3, s).with_probs(pl.slits.c);
    const PatternResult p = coincidence_pattern(src, geo, det, z2);
    const double from_pattern = coherence_from_pattern(p);
    const double from_matrix =
        coherence(conditional_rho(det, pl.envelopes, pl.branch_phases));
    worst = std::max(worst, std::abs(from_pattern - from_matrix));
  }
  report(7, worst < 1e-4 && worst_overlap < 1e-6, "dual-route coherence agreement",
         fmt("max |pattern - matrix| = %.2e, mode overlap %.1e", worst, worst_overlap),
         t.seconds());
}

// AC8: normalization and unitarity
void ac8(const RunConfig& strong) {
  Timer t;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  double worst_norm = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    SourceParams src{u(rng), u(rng)};
    if (std::abs(4.0 * src.omega * src.omega * src.sigma * src.sigma - 1.0) < 1e-6)
      src.omega += 0.1;
    TwoParticleGaussian st = make_epr_state(src);
    worst_norm = std::max(worst_norm, std::abs(st.l2_norm() - 1.0));
    st = evolve_pair(st, u(rng));
    worst_norm = std::max(worst_norm, std::abs(st.l2_norm() - 1.0));

    Gaussian1D g;
    g.gamma_c = cplx(u(rng), 0.0);
    g.center = u(rng) - 1.5;
    g.momentum = u(rng) - 1.5;
    g = g.normalized();
    const Gaussian1D moved = fresnel_evolve(g, 5.0 * u(rng), 0.2 * u(rng));
    worst_norm = std::max(worst_norm, std::abs(moved.l2_norm() - 1.0));
  }

  const DetectorGram det = strong.detector.build(strong.geometry.n, std::nullopt);
  oracle::GridSpec grid = strong.oracle_grid;
  grid.points = 1024;
  const oracle::OracleResult o = oracle::propagate_pair(
      strong.source, strong.geometry, det, strong.phases, grid);
  const bool pass = worst_norm <= 1e-10 && o.diag.norm_drift <= 1e-10;
  report(8, pass, "norm preservation and spectral unitarity",
         fmt("max norm drift %.1e, spectral drift %.1e", worst_norm, o.diag.norm_drift),
         t.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string configs = argc > 1 ? argv[1] : "configs";
  RunConfig strong, weak;
  try {
    strong = RunConfig::load(configs + "/strong.json");
    weak = RunConfig::load(configs + "/weak.json");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cannot load reference configs from %s: %s\n",
                 configs.c_str(), e.what());
    return 2;
  }

  ac1();
  ac2();
  ac3(strong);
  ac4(strong);
  ac5(strong);
  ac6(strong, weak);
  ac7();
  ac8(strong);

  std::printf("%d of 8 criteria passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
