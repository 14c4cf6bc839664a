#include "ghost/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghost::oracle {

namespace kn = ghost::kernels;

void GridSpec::validate(const Geometry& geo) const {
  if (!(extent > 0.0)) throw resolution_error("grid: extent must be positive");
  if (points < 256 || (points & (points - 1)) != 0)
    throw resolution_error("grid: points must be a power of two >= 256");
  if (padding < 0.0 || padding > 0.25)
    throw resolution_error("grid: padding must be in [0, 0.25]");
  const double step = dz();
  if (geo.slit_width / step < 8.0)
    throw resolution_error("grid: fewer than 8 samples across the slit width");
  // elementary fringe-scale estimate from geometry alone
  const double sep = geo.slit_spacing * (geo.n - 1);
  const double period_est = geo.lambda * (geo.L1 + 2.0 * geo.L2) / sep;
  if (period_est / step < 8.0)
    throw resolution_error("grid: fewer than 8 samples per fringe period");
}

namespace {

std::vector<double> axis(const GridSpec& g) {
  std::vector<double> z(g.points);
  for (int i = 0; i < g.points; ++i) z[i] = (i - g.points / 2) * g.dz();
  return z;
}

std::vector<double> taper_window(const GridSpec& g) {
  std::vector<double> w(g.points, 1.0);
  const int m = static_cast<int>(g.padding * g.points);
  for (int i = 0; i < m; ++i) {
    const double s = std::sin(0.5 * kPi * i / m);
    w[i] = s * s;
    w[g.points - 1 - i] = s * s;
  }
  return w;
}

// fraction of |line|^2 inside the padding shell
double shell_fraction(std::span<const cplx> line, int pad_pts) {
  const int n = static_cast<int>(line.size());
  double shell = 0.0, total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(line[i]);
    total += p;
    if (i < pad_pts || i >= n - pad_pts) shell += p;
  }
  return total > 0.0 ? shell / total : 0.0;
}

struct Branch {
  // projector model: separable phi(z1) x coef(z2); mask model keeps the 2D field
  std::vector<cplx> phi, coef;
  Grid2D field;
  double norm_sq = 0.0;
};

}  // namespace

Grid2D sample_pair(const TwoParticleGaussian& state, const GridSpec& grid,
                   Exec exec) {
  Grid2D g(grid.points);
  const std::vector<double> z = axis(grid);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < grid.points; ++i)
    for (int j = 0; j < grid.points; ++j)
      g.at(i, j) = state.eval(z[i], z[j]);
  return g;
}

std::vector<cplx> propagate_line(std::vector<cplx> line, double dz, double tau,
                                 Exec exec) {
  kn::SpectralPlan plan(static_cast<int>(line.size()));
  const std::vector<double> k = kn::wavenumbers(static_cast<int>(line.size()), dz);
  plan.forward_line(line);
  kn::apply_dispersion_line(line, k, tau, exec);
  plan.inverse_line(line);
  return line;
}

void propagate_free(Grid2D& field, double extent, double tau, Exec exec) {
  kn::SpectralPlan plan(field.n);
  const std::vector<double> k = kn::wavenumbers(field.n, 2.0 * extent / field.n);
  plan.forward_rows(field, exec);
  plan.forward_cols(field, exec);
  kn::apply_dispersion(field, k, tau, exec);
  plan.inverse_rows(field, exec);
  plan.inverse_cols(field, exec);
}

OracleResult propagate_pair(const SourceParams& src, const Geometry& geo,
                            const DetectorGram& det,
                            std::span<const double> phases, const GridSpec& grid,
                            Exec exec) {
  src.validate();
  geo.validate();
  grid.validate(geo);
  if (det.n() != geo.n)
    throw std::invalid_argument("oracle: detector dimension must match slit count");
  const int n = geo.n;
  const int N = grid.points;
  const double dz = grid.dz();
  const double cell = dz * dz;
  std::vector<double> theta(phases.begin(), phases.end());
  if (theta.empty()) theta.assign(n, 0.0);

  OracleResult out;
  kn::SpectralPlan plan(N);
  const std::vector<double> z = axis(grid);
  const std::vector<double> k = kn::wavenumbers(N, dz);
  const std::vector<double> w = taper_window(grid);
  const int pad_pts = static_cast<int>(grid.padding * N);

  auto propagate2d = [&](Grid2D& f, double tau) {
    const double before = kn::squared_norm(f, cell, exec);
    plan.forward_rows(f, exec);
    plan.forward_cols(f, exec);
    kn::apply_dispersion(f, k, tau, exec);
    plan.inverse_rows(f, exec);
    plan.inverse_cols(f, exec);
    const double after = kn::squared_norm(f, cell, exec);
    if (before > 0.0)
      out.diag.norm_drift = std::max(out.diag.norm_drift,
                                     std::abs(after / before - 1.0));
  };
  auto propagate1d = [&](std::vector<cplx>& line, double tau) {
    const double before = kn::squared_norm_line(line, dz, exec);
    plan.forward_line(line);
    kn::apply_dispersion_line(line, k, tau, exec);
    plan.inverse_line(line);
    const double after = kn::squared_norm_line(line, dz, exec);
    if (before > 0.0)
      out.diag.norm_drift = std::max(out.diag.norm_drift,
                                     std::abs(after / before - 1.0));
  };

  // source state on the grid, tapered, carried to the slit plane
  Grid2D field = sample_pair(make_epr_state(src), grid, exec);
  kn::apply_window(field, w, exec);
  propagate2d(field, geo.t0_eff());

  // slit plane: one branch per slit, tagged with its configured phase
  std::vector<Branch> branches(n);
  const double eps = geo.slit_width;
  const double amp_phi = std::pow(kPi / 2.0, -0.25) / std::sqrt(eps);
  for (int b = 0; b < n; ++b) {
    const double c = geo.slit_center(b + 1);
    const cplx tag = std::exp(cplx(0.0, theta[b]));
    if (grid.slit_model == SlitModel::projector) {
      std::vector<double> prof(N);
      for (int i = 0; i < N; ++i)
        prof[i] = amp_phi * std::exp(-(z[i] - c) * (z[i] - c) / (eps * eps));
      branches[b].phi.assign(prof.begin(), prof.end());
      branches[b].coef.resize(N);
      kn::contract_rows(field, prof, dz, branches[b].coef, exec);
      for (auto& v : branches[b].coef) v *= tag;
      branches[b].norm_sq =
          kn::squared_norm_line(branches[b].phi, dz, exec) *
          kn::squared_norm_line(branches[b].coef, dz, exec);
    } else {
      branches[b].field = field;
      std::vector<cplx> win(N);
      for (int i = 0; i < N; ++i)
        win[i] = tag * std::exp(-(z[i] - c) * (z[i] - c) / (eps * eps));
      kn::multiply_rows(branches[b].field, win, exec);
      branches[b].norm_sq = kn::squared_norm(branches[b].field, cell, exec);
    }
  }

  // Gram-weighted norm of the post-slit state
  double norm_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      cplx ip;
      if (grid.slit_model == SlitModel::projector) {
        ip = kn::inner_product_line(branches[m].phi, branches[j].phi, dz, exec) *
             kn::inner_product_line(branches[m].coef, branches[j].coef, dz, exec);
      } else {
        ip = kn::inner_product(branches[m].field, branches[j].field, cell, exec);
      }
      norm_sq += (det.gram(m, j) * ip).real();
    }
  }
  if (!(norm_sq > 0.0))
    throw resolution_error("oracle: no amplitude transmitted through the slits");
  out.diag.transmitted = norm_sq;

  // remaining leg to the detectors, then the coincidence slice at z1_detect
  const int i_detect =
      static_cast<int>(std::llround((geo.z1_detect + grid.extent) / dz));
  if (i_detect < 0 || i_detect >= N)
    throw resolution_error("oracle: z1_detect outside the grid");
  if (std::abs(z[i_detect] - geo.z1_detect) > 1e-9 * std::max(1.0, grid.extent))
    throw resolution_error("oracle: z1_detect does not lie on the grid");

  std::vector<std::vector<cplx>> slices(n, std::vector<cplx>(N));
  for (int b = 0; b < n; ++b) {
    if (grid.slit_model == SlitModel::projector) {
      propagate1d(branches[b].phi, geo.t1_eff());
      propagate1d(branches[b].coef, geo.t1_eff());
      out.diag.branch_escape =
          std::max({out.diag.branch_escape,
                    shell_fraction(branches[b].phi, pad_pts),
                    shell_fraction(branches[b].coef, pad_pts)});
      const cplx phi_at = branches[b].phi[i_detect];
      for (int j = 0; j < N; ++j) slices[b][j] = phi_at * branches[b].coef[j];
    } else {
      propagate2d(branches[b].field, geo.t1_eff());
      double shell = 0.0, total = 0.0;
      for (int i = 0; i < N; ++i) {
        const double rowp = kn::squared_norm_line(
            std::span<const cplx>(branches[b].field.row(i), N), dz, exec);
        total += rowp;
        if (i < pad_pts || i >= N - pad_pts) shell += rowp;
      }
      out.diag.branch_escape =
          std::max(out.diag.branch_escape, total > 0 ? shell / total : 0.0);
      const cplx* row = branches[b].field.row(i_detect);
      std::copy(row, row + N, slices[b].begin());
      branches[b].field = Grid2D();  // release
    }
    if (out.diag.branch_escape > 1e-6)
      throw resolution_error("oracle: branch escaped the padded domain");
  }

  // pattern on the un-padded core
  const int lo = pad_pts, hi = N - pad_pts;
  PatternResult& pat = out.pattern;
  pat.z2.assign(z.begin() + lo, z.begin() + hi);
  pat.intensity.assign(hi - lo, 0.0);
  pat.incoherent.assign(hi - lo, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      const cplx g = det.gram(m, j);
      if (g == cplx(0.0, 0.0)) continue;
      for (int i = lo; i < hi; ++i) {
        const double term = (g * slices[j][i] * std::conj(slices[m][i])).real();
        pat.intensity[i - lo] += term;
        if (j == m) pat.incoherent[i - lo] += term;
      }
    }
  }
  for (auto& v : pat.intensity) v = std::max(v, 0.0) / norm_sq;
  for (auto& v : pat.incoherent) v = std::max(v, 0.0) / norm_sq;
  pat.meta.src = src;
  pat.meta.geo = geo;
  pat.meta.phases = theta;

  // conditioned density matrix in the normalized branch-mode basis,
  // assembled from slice overlap integrals
  Eigen::MatrixXcd S(n, n);  // S(j,k) = <slice_j|slice_k>
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      S(j, m) = kn::inner_product_line(slices[j], slices[m], dz, exec);
  Eigen::VectorXd mags(n);
  for (int j = 0; j < n; ++j) mags(j) = std::sqrt(std::max(S(j, j).real(), 0.0));
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (mags(j) <= 0.0 || mags(m) <= 0.0) continue;
      cplx acc{0.0, 0.0};
      for (int jp = 0; jp < n; ++jp)
        for (int kp = 0; kp < n; ++kp)
          acc += det.gram(kp, jp) * (S(j, jp) / mags(j)) *
                 std::conj(S(m, kp) / mags(m));
      M(j, m) = acc;
    }
  }
  M = 0.5 * (M + M.adjoint()).eval();
  const double tr = M.trace().real();
  if (tr > 0.0) M /= tr;
  out.rho.rho = M;

  out.slices.resize(n);
  for (int b = 0; b < n; ++b)
    out.slices[b].assign(slices[b].begin() + lo, slices[b].begin() + hi);
  return out;
}

namespace {

// parabolic-refined position of the maximum of y
double refined_peak(std::span<const double> zz, std::span<const double> y) {
  int i = 1;
  const int m = static_cast<int>(y.size());
  for (int j = 1; j + 1 < m; ++j)
    if (y[j] > y[i]) i = j;
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double curv = y0 - 2.0 * y1 + y2;
  double off = 0.0;
  if (curv < 0.0) off = 0.5 * (y0 - y2) / curv;
  return zz[i] + off * (zz[1] - zz[0]);
}

double ratio_visibility(const PatternResult& p) {
  double rmin = 1e300, rmax = -1e300;
  bool any = false;
  const double peak = *std::max_element(p.incoherent.begin(), p.incoherent.end());
  for (std::size_t i = 0; i < p.z2.size(); ++i) {
    if (p.incoherent[i] < 1e-6 * peak) continue;  // ratio meaningless in the far tail
    const double r = p.intensity[i] / p.incoherent[i];
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    any = true;
  }
  if (!any || rmax + rmin <= 0.0) return 0.0;
  return (rmax - rmin) / (rmax + rmin);
}

}  // namespace

PatternComparison compare_patterns(const PatternResult& a, const PatternResult& b) {
  if (a.z2.size() < 3 || b.z2.size() < 3)
    throw std::invalid_argument("compare_patterns: patterns too small");
  const double lo = std::max(a.z2.front(), b.z2.front());
  const double hi = std::min(a.z2.back(), b.z2.back());
  const double bspan = b.z2.back() - b.z2.front();
  if (hi - lo < 0.5 * bspan)
    throw std::invalid_argument("compare_patterns: domains barely overlap");

  // linear resample of a onto b's grid over the shared range
  std::vector<double> zz, ia, ib;
  std::size_t ja = 0;
  for (std::size_t i = 0; i < b.z2.size(); ++i) {
    const double zb = b.z2[i];
    if (zb < lo || zb > hi) continue;
    while (ja + 2 < a.z2.size() && a.z2[ja + 1] < zb) ++ja;
    const double t = (zb - a.z2[ja]) / (a.z2[ja + 1] - a.z2[ja]);
    zz.push_back(zb);
    ia.push_back((1.0 - t) * a.intensity[ja] + t * a.intensity[ja + 1]);
    ib.push_back(b.intensity[i]);
  }

  PatternComparison cmp;
  double diff2 = 0.0, ref2 = 0.0, maxd = 0.0, maxref = 0.0;
  for (std::size_t i = 0; i < zz.size(); ++i) {
    const double d = ia[i] - ib[i];
    diff2 += d * d;
    ref2 += ib[i] * ib[i];
    maxd = std::max(maxd, std::abs(d));
    maxref = std::max(maxref, std::abs(ib[i]));
  }
  cmp.rel_l2 = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : 0.0;
  cmp.max_pointwise = maxref > 0.0 ? maxd / maxref : 0.0;

  // fringe position from the oscillatory part when the pattern carries any,
  // the raw intensity peak otherwise
  auto fringe_pos = [](const PatternResult& p) {
    std::vector<double> osc(p.z2.size());
    double peak = 0.0, oscmax = 0.0;
    for (std::size_t i = 0; i < p.z2.size(); ++i) {
      osc[i] = p.intensity[i] - p.incoherent[i];
      peak = std::max(peak, p.intensity[i]);
      oscmax = std::max(oscmax, osc[i]);
    }
    if (oscmax > 1e-9 * peak) return refined_peak(p.z2, osc);
    return refined_peak(p.z2, p.intensity);
  };
  cmp.fringe_offset = fringe_pos(a) - fringe_pos(b);
  cmp.visibility_delta = ratio_visibility(a) - ratio_visibility(b);
  return cmp;
}

}  // namespace ghost::oracle
