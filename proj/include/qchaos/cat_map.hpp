#pragma once

#include <utility>
#include <vector>

#include "qchaos/common.hpp"
#include "qchaos/lattice.hpp"
#include "qchaos/observable.hpp"

namespace qchaos {

/// Hyperbolic element of SL(2, Z) acting on the torus, [[a,b],[c,d]] (x, xi)^T mod 1.
/// Construction enforces det = 1 and |a + d| > 2; "quantizable" additionally
/// means |b| = 1 with a, d even, the subclass the propagator kernel covers.
class CatMap {
public:
    CatMap(long long a, long long b, long long c, long long d);

    long long a() const { return m_.a; }
    long long b() const { return m_.b; }
    long long c() const { return m_.c; }
    long long d() const { return m_.d; }
    Mat2 matrix() const { return m_; }

    bool quantizable() const;
    CatMap inverse() const;

    /// A^t with overflow-checked integer arithmetic; t may be negative.
    Mat2 power(long long t) const;

    /// Large eigenvalue (|lambda| > 1) of the matrix.
    double expanding_eigenvalue() const;

    friend bool operator==(const CatMap&, const CatMap&) = default;

private:
    Mat2 m_;
};

/// Default experiment map [[2,1],[3,2]].
CatMap default_cat_map();

/// A^t (x, xi) mod 1, components in [0, 1).
std::pair<double, double> apply_map(const CatMap& A, double x, double xi, long long t);

/// a o A^t by exact mode relabeling v -> (A^T)^t v; coefficients are permuted.
/// Throws OverflowError if a resulting mode exceeds kModeBound.
TorusObservable pullback(const TorusObservable& a, const CatMap& A, long long t);

/// <a>_T = (1/T) sum_{t=0}^{T-1} a o A^t. T >= 1.
TorusObservable ergodic_average(const TorusObservable& a, const CatMap& A, long long T);

/// Largest number of (mode, time) pairs that land on one output mode when
/// forming <a>_T; equals 1 exactly when the mode orbits are pairwise disjoint.
long long orbit_collision_multiplicity(const TorusObservable& a, const CatMap& A, long long T);

struct Rational {
    long long num = 0;
    long long den = 1;  // > 0, gcd(|num|, den) = 1
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

struct TorusPoint {
    Rational x, xi;
    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// All solutions of (A^t - I) z = 0 mod 1 in [0,1)^2, exactly |det(A^t - I)|
/// of them, as reduced rationals. Sorted lexicographically.
std::vector<TorusPoint> fixed_points(const CatMap& A, long long t);

}  // namespace qchaos
