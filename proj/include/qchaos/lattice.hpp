#pragma once

#include <cstdint>
#include <cstdlib>
#include <tuple>

#include "qchaos/common.hpp"

namespace qchaos {

// Fourier mode index on the 2-torus.
struct LatticeVector {
    long long m = 0;
    long long n = 0;

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
    friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;

    LatticeVector operator-() const { return {-m, -n}; }
    bool is_zero() const { return m == 0 && n == 0; }
    long long max_norm() const { return std::max(std::llabs(m), std::llabs(n)); }
};

// Default guard for mode growth under hyperbolic pullback.
inline constexpr long long kModeBound = 2147483647LL;  // 2^31 - 1

inline long long checked_mul(long long a, long long b) {
    long long r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in mode arithmetic");
    return r;
}

inline long long checked_add(long long a, long long b) {
    long long r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in mode arithmetic");
    return r;
}

// Integer 2x2 matrix with overflow-checked arithmetic.
struct Mat2 {
    long long a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]

    static Mat2 identity() { return {}; }

    long long det() const {
        return checked_add(checked_mul(a, d), -checked_mul(b, c));
    }
    long long trace() const { return checked_add(a, d); }

    Mat2 transpose() const { return {a, c, b, d}; }

    // Valid for det == 1 only.
    Mat2 inverse_unimodular() const { return {d, -b, -c, a}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
                checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
                checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
                checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
    }

    LatticeVector apply(const LatticeVector& v) const {
        return {checked_add(checked_mul(a, v.m), checked_mul(b, v.n)),
                checked_add(checked_mul(c, v.m), checked_mul(d, v.n))};
    }

    // x^t for t >= 0.
    Mat2 power(long long t) const {
        Mat2 r = identity();
        for (long long i = 0; i < t; ++i) r = r * (*this);
        return r;
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace qchaos
