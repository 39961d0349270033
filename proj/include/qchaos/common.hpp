#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qchaos {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Band limit of an evolved or quantized observable reached N/2.
struct AliasingError : Error {
    using Error::Error;
};

// Integer mode arithmetic left the configured bound (hyperbolic growth).
struct OverflowError : Error {
    using Error::Error;
};

struct CalibrationError : Error {
    using Error::Error;
};

struct EigensolverError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct CacheError : Error {
    using Error::Error;
};

}  // namespace qchaos
