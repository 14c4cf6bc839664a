#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ghost {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when an operation is requested outside its validity regime
// (e.g. a closed-form limit evaluated where the limit does not apply).
class regime_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a grid cannot resolve the requested physics.
class resolution_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ghost
