#include "ghost/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghost {

Pipeline build_pipeline(const SourceParams& src, const Geometry& geo) {
  src.validate();
  geo.validate();
  Pipeline pl;
  const TwoParticleGaussian at_slits = evolve_pair(make_epr_state(src), geo.t0_eff());
  pl.slits = decompose_at_slits(at_slits, geo);

  pl.phi_d.reserve(geo.n);
  pl.psi_d.reserve(geo.n);
  for (int k = 1; k <= geo.n; ++k) {
    pl.phi_d.push_back(fresnel_evolve(slit_mode(k, geo), geo.L1, geo.lambda));
    pl.psi_d.push_back(fresnel_evolve(pl.slits.psi[k - 1], geo.L1, geo.lambda));
  }

  pl.envelopes.resize(geo.n);
  pl.branch_phases.resize(geo.n);
  for (int k = 0; k < geo.n; ++k) {
    const cplx v = pl.phi_d[k].eval(geo.z1_detect);
    pl.envelopes[k] = std::abs(v);
    pl.branch_phases[k] = std::arg(v);
  }

  pl.max_psi_overlap = 0.0;
  for (int j = 0; j < geo.n; ++j)
    for (int k = j + 1; k < geo.n; ++k)
      pl.max_psi_overlap = std::max(
          pl.max_psi_overlap, std::abs(overlap(pl.slits.psi[j], pl.slits.psi[k])));
  pl.matrix_route_applicable = pl.max_psi_overlap < 1e-6;
  return pl;
}

namespace {

void check_grid(std::span<const double> z2) {
  if (z2.empty()) throw std::invalid_argument("pattern: empty detector grid");
  if (!std::is_sorted(z2.begin(), z2.end()))
    throw std::invalid_argument("pattern: detector grid must be sorted");
}

std::vector<double> resolve_phases(std::span<const double> phases, int n) {
  if (phases.empty()) return std::vector<double>(n, 0.0);
  if (static_cast<int>(phases.size()) != n)
    throw std::invalid_argument("pattern: phase count mismatch");
  return {phases.begin(), phases.end()};
}

}  // namespace

PatternResult coincidence_pattern(const SourceParams& src, const Geometry& geo,
                                  const DetectorGram& det,
                                  std::span<const double> z2_grid,
                                  std::span<const double> phases, Exec exec) {
  check_grid(z2_grid);
  if (det.n() != geo.n)
    throw std::invalid_argument("pattern: detector dimension must match slit count");
  const std::vector<double> theta = resolve_phases(phases, geo.n);
  const Pipeline pl = build_pipeline(src, geo);
  const int n = geo.n;

  // branch weights: conditioning amplitude x particle-1 value at D1
  std::vector<cplx> W(n);
  for (int k = 0; k < n; ++k)
    W[k] = pl.slits.c[k] * std::exp(cplx(0.0, theta[k])) *
           pl.phi_d[k].eval(geo.z1_detect);

  Eigen::MatrixXcd T(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) T(j, k) = W[j] * std::conj(W[k]) * det.gram(k, j);

  PatternResult out;
  out.z2.assign(z2_grid.begin(), z2_grid.end());
  const int m = static_cast<int>(out.z2.size());
  out.intensity.resize(m);
  out.incoherent.resize(m);
  const auto& modes = pl.psi_d;

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < m; ++i) {
    const double z = out.z2[i];
    cplx u[16];  // geometry validation caps the slit count
    for (int k = 0; k < n; ++k) u[k] = modes[k].eval(z);
    double total = 0.0, diag = 0.0;
    for (int j = 0; j < n; ++j) {
      diag += T(j, j).real() * std::norm(u[j]);
      for (int k = 0; k < n; ++k)
        total += (T(j, k) * u[j] * std::conj(u[k])).real();
    }
    out.intensity[i] = std::max(total, 0.0);
    out.incoherent[i] = std::max(diag, 0.0);
  }

  out.meta = PatternMeta{src, geo, pl.slits.c, theta};
  return out;
}

double fringe_period(const SourceParams& src, const Geometry& geo) {
  const Pipeline pl = build_pipeline(src, geo);
  const Gaussian1D& g0 = pl.psi_d[0];
  const Gaussian1D& g1 = pl.psi_d[1];
  const double dmu = g1.center - g0.center;
  const double dq = g1.momentum - g0.momentum;
  const double slope = dq + 2.0 * dmu * (1.0 / g1.gamma_c).imag();
  if (slope == 0.0) throw std::domain_error("fringe_period: no fringe structure");
  return 2.0 * kPi / std::abs(slope);
}

std::vector<double> default_z2_grid(const SourceParams& src, const Geometry& geo,
                                    int points) {
  const double half = 10.0 * fringe_period(src, geo);
  std::vector<double> z(points);
  for (int i = 0; i < points; ++i)
    z[i] = -half + 2.0 * half * i / (points - 1);
  return z;
}

ClosedFormPattern closed_form_pattern(const SourceParams& src, const Geometry& geo,
                                      const DetectorGram& det,
                                      std::span<const double> z2_grid,
                                      std::span<const double> phases,
                                      ClosedFormVariant variant) {
  check_grid(z2_grid);
  const std::vector<double> theta = resolve_phases(phases, geo.n);
  const cplx gamma_s = gamma_limit(src, geo, Regime::strong);  // throws off-regime
  const double gamma = gamma_s.real();
  const double eps = geo.slit_width;
  const double lam = geo.lambda;
  const double L1 = geo.L1;
  const double D = geo.L1 + 2.0 * geo.L2;
  const int n = geo.n;

  const Pipeline pl = build_pipeline(src, geo);
  const std::vector<double>& c = pl.slits.c;

  const double alpha = eps * eps + lam * lam * L1 * L1 / (kPi * kPi * eps * eps);
  const double beta_pr = gamma * gamma +
                         lam * lam * D * D / (kPi * kPi * gamma * gamma);
  const double beta_rd = gamma + lam * lam * D * D / (kPi * kPi * gamma);
  const double den_pr_D = std::pow(gamma, 4) * kPi * kPi + lam * lam * D * D;
  const double den_rd_D = gamma * gamma * kPi * kPi + lam * lam * D * D;
  const double den_L1 = std::pow(eps, 4) * kPi * kPi + lam * lam * L1 * L1;

  // printed overall constant (|C_t|^2 of the published form)
  const cplx GammaD = gamma_s;
  const double sGR = std::sqrt(GammaD.real());
  const cplx ct = 1.0 / (std::sqrt(kPi) * std::sqrt(cplx(eps, L1 * lam / (eps * kPi))) *
                         std::sqrt(cplx(sGR, 0.0) +
                                   (cplx(GammaD.imag(), 0.0) + cplx(0.0, L1 * lam / kPi)) / sGR));
  const double ct2 = std::norm(ct);

  // exact-convention scale for the rederived column: unit-normalized branches
  const cplx E1 = cplx(eps * eps, lam * L1 / kPi);
  const cplx GD = GammaD + cplx(0.0, lam * L1 / kPi);
  const double amp_phi2 = std::sqrt(2.0 * (1.0 / E1).real() / kPi);   // |Phi amp|^2
  const double amp_psi2 = std::sqrt(2.0 * (1.0 / GD).real() / kPi);   // |psi amp|^2

  ClosedFormPattern out;
  out.z2.assign(z2_grid.begin(), z2_grid.end());
  out.printed.resize(out.z2.size());
  out.rederived.resize(out.z2.size());

  const bool broad = variant == ClosedFormVariant::broad_envelope;
  for (std::size_t idx = 0; idx < out.z2.size(); ++idx) {
    const double z2 = out.z2[idx];
    double Ppr = 0.0, Prd = 0.0;
    for (int k = 0; k < n; ++k) {
      const double ck = geo.slit_center(k + 1);
      const double env_pr = broad ? std::exp(-2.0 * z2 * z2 / beta_pr)
                                  : std::exp(-2.0 * (z2 - ck) * (z2 - ck) / beta_pr);
      const double env_rd = broad ? std::exp(-2.0 * z2 * z2 / beta_rd)
                                  : std::exp(-2.0 * (z2 - ck) * (z2 - ck) / beta_rd);
      const double w = c[k] * c[k] * std::exp(-2.0 * ck * ck / alpha);
      Ppr += w * env_pr;
      Prd += w * env_rd;
    }
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        const double cj = geo.slit_center(j + 1);
        const double ck = geo.slit_center(k + 1);
        const double g = std::abs(det.gram(j, k));
        const double w = c[j] * c[k] * g *
                         std::exp(-(cj * cj + ck * ck) / alpha);
        const double envj_pr = broad ? std::exp(-z2 * z2 / beta_pr)
                                     : std::exp(-(z2 - cj) * (z2 - cj) / beta_pr);
        const double envk_pr = broad ? std::exp(-z2 * z2 / beta_pr)
                                     : std::exp(-(z2 - ck) * (z2 - ck) / beta_pr);
        const double envj_rd = broad ? std::exp(-z2 * z2 / beta_rd)
                                     : std::exp(-(z2 - cj) * (z2 - cj) / beta_rd);
        const double envk_rd = broad ? std::exp(-z2 * z2 / beta_rd)
                                     : std::exp(-(z2 - ck) * (z2 - ck) / beta_rd);
        const double lin_pr = 2.0 * kPi * (ck - cj) * z2 * lam * D / den_pr_D;
        const double lin_rd = 2.0 * kPi * (ck - cj) * z2 * lam * D / den_rd_D;
        double ph_pr = lin_pr + theta[j] - theta[k];
        double ph_rd = lin_rd + theta[j] - theta[k];
        if (!broad) {
          // quadratic offset phases; the published form carries them with the
          // opposite sign relative to the direct branch-product derivation
          ph_pr += kPi * (ck * ck - cj * cj) * lam * L1 / den_L1 +
                   kPi * (ck * ck - cj * cj) * lam * D / den_pr_D;
          ph_rd += kPi * (cj * cj - ck * ck) * lam * L1 / den_L1 +
                   kPi * (cj * cj - ck * ck) * lam * D / den_rd_D;
        }
        Ppr += w * envj_pr * envk_pr * std::cos(ph_pr);
        Prd += w * envj_rd * envk_rd * std::cos(ph_rd);
      }
    }
    out.printed[idx] = ct2 * Ppr;
    out.rederived[idx] = amp_phi2 * amp_psi2 * Prd;
  }
  return out;
}

double coherence_from_pattern(const PatternResult& p) {
  const int m = static_cast<int>(p.z2.size());
  if (m < 3) throw std::domain_error("coherence_from_pattern: grid too small");
  const int n = p.meta.geo.n;

  std::vector<double> r(m);
  double rmin = 1e300, rmax = -1e300;
  for (int i = 0; i < m; ++i) {
    if (!(p.incoherent[i] > 0.0)) {
      r[i] = 1.0;  // both vanish in the far tail
      continue;
    }
    r[i] = p.intensity[i] / p.incoherent[i];
    rmin = std::min(rmin, r[i]);
    rmax = std::max(rmax, r[i]);
  }
  if (rmax - rmin < 1e-12) return 0.0;  // no cross terms (flat ratio)

  int imax = 1;
  for (int i = 1; i + 1 < m; ++i)
    if (r[i] > r[imax]) imax = i;
  if (r[0] > r[imax] || r[m - 1] > r[imax])
    throw std::domain_error(
        "coherence_from_pattern: primary maximum at grid boundary, grid too narrow");

  // parabolic refinement of the ratio around the densest point
  const double y0 = r[imax - 1], y1 = r[imax], y2 = r[imax + 1];
  const double curv = y0 - 2.0 * y1 + y2;
  double peak = y1;
  if (curv < 0.0) {
    const double off = 0.5 * (y0 - y2) / curv;
    peak = y1 - 0.25 * (y0 - y2) * off;
  }
  return (peak - 1.0) / (n - 1);
}

DualityReport pipeline_duality(const SourceParams& src, const Geometry& geo,
                               const DetectorGram& det,
                               std::span<const double> phases,
                               std::span<const double> z2_grid) {
  const Pipeline pl = build_pipeline(src, geo);
  const DetectorGram pdet = det.with_probs(pl.slits.c);
  const std::vector<double> theta = resolve_phases(phases, geo.n);

  std::vector<double> rho_phases(geo.n);
  for (int k = 0; k < geo.n; ++k) rho_phases[k] = pl.branch_phases[k] + theta[k];

  std::optional<double> c2p;
  {
    std::vector<double> grid;
    if (z2_grid.empty())
      grid = default_z2_grid(src, geo);
    else
      grid.assign(z2_grid.begin(), z2_grid.end());
    const PatternResult pr = coincidence_pattern(src, geo, pdet, grid, theta);
    c2p = coherence_from_pattern(pr);
  }

  return duality_report(pdet, pl.envelopes, rho_phases, c2p,
                        pl.matrix_route_applicable, pl.max_psi_overlap);
}

}  // namespace ghost
