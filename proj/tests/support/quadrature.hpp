#pragma once

// Test-side numerical integration, independent of the closed forms it checks.
// Composite 16-point Gauss-Legendre on a truncated interval.

#include <array>
#include <complex>

namespace testsupport {

using cplx = std::complex<double>;

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr std::array<double, 8> kGlNode = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGlWeight = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
auto integrate(F f, double lo, double hi, int panels = 64) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  R total{};
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double mid = a + 0.5 * h;
    const double half = 0.5 * h;
    R acc{};
    for (int i = 0; i < 8; ++i) {
      acc += kGlWeight[i] * (f(mid + half * kGlNode[i]) + f(mid - half * kGlNode[i]));
    }
    total += acc * half;
  }
  return total;
}

template <class F>
auto integrate2d(F f, double lo, double hi, int panels = 48) -> decltype(f(0.0, 0.0)) {
  return integrate([&](double x) { return integrate([&](double y) { return f(x, y); },
                                                    lo, hi, panels); },
                   lo, hi, panels);
}

}  // namespace testsupport
