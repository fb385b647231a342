#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spinchain {

using cplx = std::complex<double>;

/// Bit i of a mask is site i (0-based). Sites 0..N-1 correspond to the
/// 1-based labels 1..N used in figure captions.
using Mask = std::uint32_t;

inline constexpr int kMaxSites = 30;

[[nodiscard]] inline int popcount(Mask m) noexcept { return std::popcount(m); }
[[nodiscard]] inline Mask full_mask(int n_sites) noexcept {
    return n_sites >= 32 ? ~Mask{0} : (Mask{1} << n_sites) - 1u;
}

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument, mismatched basis, overlapping subsets.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A dimension or enumeration exceeds a configured guard.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Iterative propagation failed to reach its tolerance.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Roundoff beyond what can be explained by floating point, e.g. a
/// reduced-density weight below -1e-12.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Bad run configuration (file or command line).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Binomial coefficient; throws CapacityError if the result does not fit.
[[nodiscard]] std::uint64_t binomial(int n, int k);

} // namespace spinchain
