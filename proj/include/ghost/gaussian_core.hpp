#pragma once

// Exact complex-Gaussian algebra for the entangled-pair pipeline:
// source state -> free flight to the slit plane -> per-slit conditioning
// of the partner particle -> free flight to the detectors.
//
// Units: every quantity is expressed in one arbitrary length unit.  Time
// never appears explicitly; free evolution over a flight distance L enters
// only through the reduced parameter
//
//     tau = lambda * L / (2*pi)      [length^2]
//
// which plays the role of (hbar*t/m).  A 1D Gaussian exp(-(z-mu)^2/Gamma)
// evolves by Gamma -> Gamma + 2i*tau; the pair-state width parameters a, b
// (see TwoParticleGaussian) each evolve by 4i*tau.

#include <vector>

#include "ghost/common.hpp"

namespace ghost {

struct SourceParams {
  double sigma = 1.0;  // momentum-spread parameter (1/length)
  double omega = 1.0;  // position-spread parameter (length)

  // sigma, omega > 0 and 4*omega^2*sigma^2 != 1 (the conditioned-center
  // closed form is singular there; the pair factorizes at that point).
  void validate() const;
};

struct Geometry {
  int n = 2;                // slit count
  double slit_spacing = 1;  // distance between adjacent slit centers
  double slit_width = 0.1;  // Gaussian width scale of one slit
  double L1 = 0;            // slit plane -> fixed detector D1
  double L2 = 0;            // source -> slit plane
  double lambda = 0.1;      // de Broglie wavelength
  double z1_detect = 0.0;   // fixed D1 position
  double slit_offset = 0.0; // global shift of the slit array

  // slit k (1-based) is centered at k*slit_spacing + slit_offset.
  double slit_center(int k) const { return k * slit_spacing + slit_offset; }
  // offset that centers the array on z = 0
  double centered_offset() const { return -0.5 * (n + 1) * slit_spacing; }

  double t0_eff() const { return lambda * L2 / (2.0 * kPi); }
  double t1_eff() const { return lambda * L1 / (2.0 * kPi); }
  // reduced parameter of the partner particle's total flight, source to D2
  double tD_eff() const { return lambda * (L1 + 2.0 * L2) / (2.0 * kPi); }

  void validate() const;
};

// Unnormalized complex Gaussian in exponent form  exp(-alpha z^2 + beta z + delta).
// delta absorbs all scalar prefactors as a (complex) log-amplitude, so products
// and Gaussian integrals stay closed in this family.
struct GaussExp {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  cplx delta{0.0, 0.0};

  cplx eval(double z) const;
  double l2_norm_sq() const;  // ∫ |g|^2 dz
  double l2_norm() const;

  // Free evolution by tau = lambda*L/(2*pi); exact, including amplitude.
  GaussExp evolved(double tau) const;
};

// ∫ conj(a)(z) b(z) dz
cplx overlap(const GaussExp& a, const GaussExp& b);

// Canonical single-particle Gaussian mode
//   g(z) = amp * e^{i phase} * exp( -(z-center)^2/gamma_c + i momentum (z-center) )
// with real envelope center and a real linear-phase coefficient.  The momentum
// term is required for exactness: conditioning on a slit of an evolved
// entangled pair generally hands the partner packet a momentum kick.
struct Gaussian1D {
  cplx amp{1.0, 0.0};
  double center = 0.0;
  cplx gamma_c{1.0, 0.0};  // Re > 0
  double momentum = 0.0;
  double phase = 0.0;

  cplx eval(double z) const;
  double l2_norm() const;
  bool is_normalized(double tol = 1e-10) const;
  Gaussian1D normalized() const;

  GaussExp raw() const;
  static Gaussian1D from_raw(const GaussExp& g);
};

// ∫ conj(a)(z) b(z) dz
cplx overlap(const Gaussian1D& a, const Gaussian1D& b);

// Entangled pair state  norm * exp(-(z1-z2)^2/a) * exp(-(z1+z2)^2/b).
struct TwoParticleGaussian {
  cplx norm{1.0, 0.0};
  cplx a{1.0, 0.0};  // Re > 0
  cplx b{1.0, 0.0};  // Re > 0

  cplx eval(double z1, double z2) const;
  double l2_norm() const;
};

// Pair state at the source: a = 1/sigma^2, b = 4 omega^2, unit L2 norm.
TwoParticleGaussian make_epr_state(const SourceParams& src);

// Free evolution of both particles by t_eff = lambda*L/(2*pi):
// a -> a + 4i t_eff, b -> b + 4i t_eff, amplitude updated exactly.
TwoParticleGaussian evolve_pair(const TwoParticleGaussian& state, double t_eff);

// Normalized transmitted mode of slit k (1-based).
Gaussian1D slit_mode(int k, const Geometry& geo);

struct SlitProjection {
  double c = 0.0;   // overlap magnitude before cross-slit renormalization
  Gaussian1D psi;   // normalized conditioned partner mode
};

// Projects the pair state (already evolved to the slit plane) onto slit k's
// mode and factors the result as c_k * psi_k(z2) with psi_k normalized.
SlitProjection condition_on_slit(const TwoParticleGaussian& state, int k,
                                 const Geometry& geo);

struct SlitDecomposition {
  std::vector<double> c;          // renormalized so sum c_k^2 = 1
  std::vector<Gaussian1D> psi;    // conditioned partner modes at the slit plane
  double transmitted = 0.0;       // sum of squared raw overlaps (blocked part dropped)
};

// condition_on_slit over all n slits, with the blocked component discarded
// and the coefficients renormalized.
SlitDecomposition decompose_at_slits(const TwoParticleGaussian& state,
                                     const Geometry& geo);

// Free propagation over distance L: gamma_c -> gamma_c + i L lambda / pi,
// center drifts by momentum * tau, amplitude updated exactly.
Gaussian1D fresnel_evolve(const Gaussian1D& g, double L, double lambda);

enum class Regime { strong, weak };

// Closed-form limit of the conditioned width at the slit plane.
//   strong (omega >> slit width and >> 1/sigma):   eps^2 + 1/sigma^2 + 4i t0
//   weak   (omega ~ 1/sigma):                      1/(2 sigma^2)     + 2i t0
// Preconditions: strong requires omega >= 10*max(eps, 1/sigma); weak requires
// |omega*sigma - 1| <= 0.1.  Throws regime_error otherwise.
cplx gamma_limit(const SourceParams& src, const Geometry& geo, Regime regime);

// Exact conditioned width  Gamma = 1/P  at the slit plane (same for all slits).
cplx exact_conditioned_gamma(const SourceParams& src, const Geometry& geo);

}  // namespace ghost
