#include "qchaos/cat_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

namespace qchaos {

CatMap::CatMap(long long a, long long b, long long c, long long d) : m_{a, b, c, d} {
    if (m_.det() != 1) throw Error("cat map must have determinant 1");
    if (std::llabs(m_.trace()) <= 2) throw Error("cat map must be hyperbolic (|a + d| > 2)");
}

bool CatMap::quantizable() const {
    return std::llabs(m_.b) == 1 && m_.a % 2 == 0 && m_.d % 2 == 0;
}

CatMap CatMap::inverse() const {
    Mat2 inv = m_.inverse_unimodular();
    return CatMap(inv.a, inv.b, inv.c, inv.d);
}

Mat2 CatMap::power(long long t) const {
    if (t >= 0) return m_.power(t);
    return m_.inverse_unimodular().power(-t);
}

double CatMap::expanding_eigenvalue() const {
    double tr = static_cast<double>(m_.trace());
    double disc = std::sqrt(tr * tr - 4.0);
    return tr > 0 ? (tr + disc) / 2.0 : (tr - disc) / 2.0;
}

CatMap default_cat_map() { return CatMap(2, 1, 3, 2); }

namespace {

double mod1(double v) {
    double r = std::fmod(v, 1.0);
    if (r < 0.0) r += 1.0;
    if (r >= 1.0) r -= 1.0;
    return r;
}

}  // namespace

std::pair<double, double> apply_map(const CatMap& A, double x, double xi, long long t) {
    // Stepwise application keeps coordinates in [0,1) and avoids precision loss
    // from the exponential entry growth of A^t.
    Mat2 step = t >= 0 ? A.matrix() : A.matrix().inverse_unimodular();
    long long reps = std::llabs(t);
    double px = mod1(x), pxi = mod1(xi);
    for (long long i = 0; i < reps; ++i) {
        double nx = static_cast<double>(step.a) * px + static_cast<double>(step.b) * pxi;
        double nxi = static_cast<double>(step.c) * px + static_cast<double>(step.d) * pxi;
        px = mod1(nx);
        pxi = mod1(nxi);
    }
    return {px, pxi};
}

TorusObservable pullback(const TorusObservable& a, const CatMap& A, long long t) {
    Mat2 action = A.power(t).transpose();
    std::vector<TorusObservable::Mode> out;
    out.reserve(a.modes().size());
    for (const auto& mode : a.modes()) {
        LatticeVector w = action.apply(mode.v);
        if (w.max_norm() > kModeBound)
            throw OverflowError("pullback: evolved mode exceeds integer bound");
        out.push_back({w, mode.c});
    }
    return TorusObservable::from_modes(std::move(out));
}

TorusObservable ergodic_average(const TorusObservable& a, const CatMap& A, long long T) {
    if (T < 1) throw Error("ergodic_average: T must be positive");
    TorusObservable acc;
    for (long long t = 0; t < T; ++t) acc = acc + pullback(a, A, t);
    return acc.scaled(1.0 / static_cast<double>(T));
}

long long orbit_collision_multiplicity(const TorusObservable& a, const CatMap& A, long long T) {
    if (T < 1) throw Error("orbit_collision_multiplicity: T must be positive");
    std::map<LatticeVector, long long> hits;
    for (long long t = 0; t < T; ++t) {
        Mat2 action = A.power(t).transpose();
        for (const auto& mode : a.modes()) ++hits[action.apply(mode.v)];
    }
    long long worst = 0;
    for (const auto& [v, count] : hits) worst = std::max(worst, count);
    return worst;
}

namespace {

using int128 = __int128;

long long emod(int128 value, long long modulus) {
    long long r = static_cast<long long>(value % modulus);
    return r < 0 ? r + modulus : r;
}

// Extended gcd: returns g = gcd(a, b) and x with a x ≡ g (mod b), for a, b >= 0.
long long egcd_inverse(long long a, long long b, long long& g) {
    long long old_r = a, r = b;
    long long old_s = 1, s = 0;
    while (r != 0) {
        long long q = old_r / r;
        long long tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    g = old_r;
    return old_s;
}

// All q in [0, D) with coef * q ≡ rhs (mod D).
std::vector<long long> solve_congruence(long long coef, long long rhs, long long D) {
    coef = emod(coef, D);
    rhs = emod(rhs, D);
    if (coef == 0) {
        std::vector<long long> all;
        if (rhs != 0) return all;
        all.reserve(static_cast<size_t>(D));
        for (long long q = 0; q < D; ++q) all.push_back(q);
        return all;
    }
    long long g = 0;
    long long inv = egcd_inverse(coef, D, g);
    if (rhs % g != 0) return {};
    long long step = D / g;
    long long q0 = emod(static_cast<int128>(emod(inv, step)) * (rhs / g), step);
    std::vector<long long> out;
    out.reserve(static_cast<size_t>(g));
    for (long long s = 0; s < g; ++s) out.push_back(q0 + s * step);
    return out;
}

}  // namespace

std::vector<TorusPoint> fixed_points(const CatMap& A, long long t) {
    if (t < 1) throw Error("fixed_points: t must be positive");
    Mat2 M = A.power(t);
    M.a -= 1;
    M.d -= 1;
    long long D = std::llabs(M.det());
    std::vector<std::pair<long long, long long>> raw;  // (p, q) with z = (p/D, q/D)
    if (D == 1) {
        raw.emplace_back(0, 0);
    } else {
        // Solve M (p/D, q/D)^T ≡ 0 mod 1: two congruences mod D.
        for (long long p = 0; p < D; ++p) {
            long long rhs1 = emod(-static_cast<int128>(emod(M.a, D)) * p, D);
            for (long long q : solve_congruence(M.b, rhs1, D)) {
                int128 second = static_cast<int128>(emod(M.c, D)) * p +
                                static_cast<int128>(emod(M.d, D)) * q;
                if (emod(second, D) == 0) raw.emplace_back(p, q);
            }
        }
    }
    std::sort(raw.begin(), raw.end());
    std::vector<TorusPoint> out;
    out.reserve(raw.size());
    for (const auto& [p, q] : raw) {
        auto reduce = [D](long long num) {
            if (num == 0) return Rational{0, 1};
            long long g = std::gcd(num, D);
            return Rational{num / g, D / g};
        };
        out.push_back({reduce(p), reduce(q)});
    }
    return out;
}

}  // namespace qchaos
