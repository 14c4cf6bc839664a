#include "ghost/gaussian_core.hpp"

#include <cmath>
#include <stdexcept>

namespace ghost {

namespace {

// principal sqrt of 1 + 2i tau alpha; argument stays in the right half-plane
// for forward evolution of normalizable states, so no branch crossing occurs.
cplx evolution_factor(cplx alpha, double tau) {
  return std::sqrt(cplx(1.0, 0.0) + cplx(0.0, 2.0 * tau) * alpha);
}

}  // namespace

void SourceParams::validate() const {
  if (!(sigma > 0.0) || !(omega > 0.0))
    throw std::domain_error("source: sigma and omega must be positive");
  if (std::abs(4.0 * omega * omega * sigma * sigma - 1.0) < 1e-12)
    throw std::domain_error("source: 4*omega^2*sigma^2 = 1 is a singular configuration");
}

void Geometry::validate() const {
  if (n < 2) throw std::domain_error("geometry: need at least two slits");
  if (n > 16) throw std::domain_error("geometry: at most 16 slits supported");
  if (!(slit_spacing > 0.0)) throw std::domain_error("geometry: slit_spacing must be positive");
  if (!(slit_width > 0.0)) throw std::domain_error("geometry: slit_width must be positive");
  if (L1 < 0.0 || L2 < 0.0) throw std::domain_error("geometry: distances must be nonnegative");
  if (!(lambda > 0.0)) throw std::domain_error("geometry: lambda must be positive");
}

cplx GaussExp::eval(double z) const {
  return std::exp(-alpha * z * z + beta * z + delta);
}

double GaussExp::l2_norm_sq() const {
  const double ra = alpha.real();
  const double rb = beta.real();
  const double rd = delta.real();
  return std::exp(2.0 * rd + rb * rb / (2.0 * ra)) * std::sqrt(kPi / (2.0 * ra));
}

double GaussExp::l2_norm() const { return std::sqrt(l2_norm_sq()); }

GaussExp GaussExp::evolved(double tau) const {
  const cplx d = cplx(1.0, 0.0) + cplx(0.0, 2.0 * tau) * alpha;
  GaussExp out;
  out.alpha = alpha / d;
  out.beta = beta / d;
  out.delta = delta + cplx(0.0, 0.5 * tau) * beta * beta / d - 0.5 * std::log(d);
  return out;
}

cplx overlap(const GaussExp& a, const GaussExp& b) {
  const cplx al = std::conj(a.alpha) + b.alpha;
  const cplx be = std::conj(a.beta) + b.beta;
  const cplx de = std::conj(a.delta) + b.delta;
  return std::sqrt(kPi / al) * std::exp(be * be / (4.0 * al) + de);
}

cplx Gaussian1D::eval(double z) const {
  const double u = z - center;
  return amp * std::exp(cplx(0.0, phase)) *
         std::exp(-u * u / gamma_c + cplx(0.0, momentum * u));
}

GaussExp Gaussian1D::raw() const {
  GaussExp g;
  g.alpha = 1.0 / gamma_c;
  g.beta = 2.0 * center / gamma_c + cplx(0.0, momentum);
  g.delta = std::log(amp) + cplx(0.0, phase) - center * center / gamma_c -
            cplx(0.0, momentum * center);
  return g;
}

Gaussian1D Gaussian1D::from_raw(const GaussExp& g) {
  if (!(g.alpha.real() > 0.0))
    throw std::domain_error("gaussian: non-normalizable width parameter");
  Gaussian1D out;
  out.gamma_c = 1.0 / g.alpha;
  out.center = g.beta.real() / (2.0 * g.alpha.real());
  out.momentum = g.beta.imag() - 2.0 * out.center * g.alpha.imag();
  // residual scalar after re-centering: delta + alpha mu^2 + i k mu
  const cplx residual = g.delta + g.alpha * out.center * out.center +
                        cplx(0.0, out.momentum * out.center);
  out.amp = std::exp(residual);
  out.phase = 0.0;
  return out;
}

double Gaussian1D::l2_norm() const {
  const double ra = (1.0 / gamma_c).real();
  return std::abs(amp) * std::pow(kPi / (2.0 * ra), 0.25);
}

bool Gaussian1D::is_normalized(double tol) const {
  return std::abs(l2_norm() - 1.0) <= tol;
}

Gaussian1D Gaussian1D::normalized() const {
  Gaussian1D out = *this;
  out.amp /= l2_norm();
  return out;
}

cplx overlap(const Gaussian1D& a, const Gaussian1D& b) {
  return overlap(a.raw(), b.raw());
}

cplx TwoParticleGaussian::eval(double z1, double z2) const {
  const double u = z1 - z2;
  const double v = z1 + z2;
  return norm * std::exp(-u * u / a - v * v / b);
}

double TwoParticleGaussian::l2_norm() const {
  const double p = 2.0 * (1.0 / a).real();
  const double q = 2.0 * (1.0 / b).real();
  const double n2 = std::norm(norm) * kPi / (2.0 * std::sqrt(p * q));
  return std::sqrt(n2);
}

TwoParticleGaussian make_epr_state(const SourceParams& src) {
  src.validate();
  TwoParticleGaussian st;
  st.a = 1.0 / (src.sigma * src.sigma);
  st.b = 4.0 * src.omega * src.omega;
  st.norm = std::sqrt(2.0 * src.sigma / (kPi * src.omega));
  return st;
}

TwoParticleGaussian evolve_pair(const TwoParticleGaussian& state, double t_eff) {
  if (t_eff < 0.0) throw std::domain_error("evolve_pair: t_eff must be nonnegative");
  TwoParticleGaussian out;
  out.a = state.a + cplx(0.0, 4.0 * t_eff);
  out.b = state.b + cplx(0.0, 4.0 * t_eff);
  // the (z1 -/+ z2) modes evolve independently; each contributes 1/sqrt(1+4i tau/w)
  out.norm = state.norm / (evolution_factor(2.0 / state.a, t_eff) *
                           evolution_factor(2.0 / state.b, t_eff));
  return out;
}

Gaussian1D slit_mode(int k, const Geometry& geo) {
  if (k < 1 || k > geo.n) throw std::out_of_range("slit_mode: slit index out of range");
  Gaussian1D g;
  g.center = geo.slit_center(k);
  g.gamma_c = geo.slit_width * geo.slit_width;
  g.amp = std::pow(kPi / 2.0, -0.25) / std::sqrt(geo.slit_width);
  return g;
}

namespace {

struct ConditionCoeffs {
  cplx S, P;
};

ConditionCoeffs condition_coeffs(const TwoParticleGaussian& st, double eps) {
  ConditionCoeffs cc;
  const cplx ia = 1.0 / st.a, ib = 1.0 / st.b;
  cc.S = 1.0 / (eps * eps) + ia + ib;
  cc.P = (ia + ib) - (ia - ib) * (ia - ib) / cc.S;
  return cc;
}

}  // namespace

SlitProjection condition_on_slit(const TwoParticleGaussian& state, int k,
                                 const Geometry& geo) {
  const Gaussian1D phi = slit_mode(k, geo);
  const double eps = geo.slit_width;
  const double c = geo.slit_center(k);
  const cplx ia = 1.0 / state.a, ib = 1.0 / state.b;
  const auto [S, P] = condition_coeffs(state, eps);
  if (!(P.real() > 0.0))
    throw std::domain_error("condition_on_slit: conditioned mode not normalizable");

  // ∫ phi_k(z1) Psi(z1,z2) dz1, completed square in z1
  const cplx Lam = (c / (eps * eps)) * (ia - ib) / S;
  const cplx K = (c * c / (eps * eps)) * (1.0 / (eps * eps * S) - 1.0);
  const cplx pref = state.norm * phi.amp * std::sqrt(kPi / S);

  GaussExp raw;
  raw.alpha = P;
  raw.beta = 2.0 * Lam;
  raw.delta = K + std::log(pref);

  SlitProjection out;
  out.c = raw.l2_norm();
  if (!(out.c > 0.0))
    throw std::domain_error("condition_on_slit: slit sees no amplitude");
  raw.delta -= std::log(out.c);
  out.psi = Gaussian1D::from_raw(raw);
  return out;
}

SlitDecomposition decompose_at_slits(const TwoParticleGaussian& state,
                                     const Geometry& geo) {
  geo.validate();
  SlitDecomposition out;
  out.c.reserve(geo.n);
  out.psi.reserve(geo.n);
  double total = 0.0;
  for (int k = 1; k <= geo.n; ++k) {
    SlitProjection p = condition_on_slit(state, k, geo);
    total += p.c * p.c;
    out.c.push_back(p.c);
    out.psi.push_back(p.psi);
  }
  out.transmitted = total;
  const double scale = 1.0 / std::sqrt(total);
  for (double& ck : out.c) ck *= scale;
  return out;
}

Gaussian1D fresnel_evolve(const Gaussian1D& g, double L, double lambda) {
  if (L < 0.0) throw std::domain_error("fresnel_evolve: distance must be nonnegative");
  const double tau = lambda * L / (2.0 * kPi);
  return Gaussian1D::from_raw(g.raw().evolved(tau));
}

cplx exact_conditioned_gamma(const SourceParams& src, const Geometry& geo) {
  const TwoParticleGaussian at_slits =
      evolve_pair(make_epr_state(src), geo.t0_eff());
  const auto [S, P] = condition_coeffs(at_slits, geo.slit_width);
  return 1.0 / P;
}

cplx gamma_limit(const SourceParams& src, const Geometry& geo, Regime regime) {
  src.validate();
  const double eps = geo.slit_width;
  const double t0 = geo.t0_eff();
  if (regime == Regime::strong) {
    if (src.omega < 10.0 * std::max(eps, 1.0 / src.sigma))
      throw regime_error("gamma_limit: omega too small for the strong-entanglement limit");
    const double gamma = eps * eps + 1.0 / (src.sigma * src.sigma);
    return cplx(gamma, 4.0 * t0);
  }
  if (std::abs(src.omega * src.sigma - 1.0) > 0.1)
    throw regime_error("gamma_limit: omega*sigma too far from 1 for the weak-entanglement limit");
  return cplx(0.5 / (src.sigma * src.sigma), 2.0 * t0);
}

}  // namespace ghost
