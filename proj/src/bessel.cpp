#include "qchaos/bessel.hpp"

#include <cmath>
#include <string>

#include "qchaos/common.hpp"

namespace qchaos {

namespace {

constexpr int kMaxOrder = 256;
constexpr double kMaxArg = 500.0;

constexpr double kRescaleAt = 1e250;
constexpr double kRescaleBy = 1e-250;

int miller_start(int m, double x) {
    int top = std::max(m, static_cast<int>(std::ceil(x)));
    int start = top + 16 + static_cast<int>(std::ceil(std::sqrt(40.0 * (top + 1))));
    return start + (start & 1);  // even start keeps the normalization sum aligned
}

}  // namespace

double bessel_j(int m, double x) {
    if (m < 0 || m > kMaxOrder || !(x >= 0.0) || x > kMaxArg)
        throw Error("bessel_j: outside validated domain (0 <= m <= " +
                    std::to_string(kMaxOrder) + ", 0 <= x <= 500)");
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;

    const int start = miller_start(m, x);
    double jp = 0.0;      // trial J_{k+1}
    double jc = 1e-30;    // trial J_k
    double target = (m == start) ? jc : 0.0;
    double norm = 0.0;    // accumulates J_0 + 2 sum_{k even >= 2} J_k
    for (int k = start; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > kRescaleAt) {
            jc *= kRescaleBy;
            jp *= kRescaleBy;
            norm *= kRescaleBy;
            target *= kRescaleBy;
        }
        int idx = k - 1;
        if (idx == m) target = jc;
        if (idx > 0 && idx % 2 == 0) norm += 2.0 * jc;
    }
    norm += jc;  // J_0
    return target / norm;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double bisect_zero(int m, double lo, double hi) {
    double flo = bessel_j(m, lo);
    int slo = sign_of(flo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at machine resolution
        double fm = bessel_j(m, mid);
        int sm = sign_of(fm);
        if (sm == 0) return mid;
        if (sm == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mcmahon_estimate(int m, int k) {
    double mu = 4.0 * static_cast<double>(m) * m;
    double beta = (k + 0.5 * m - 0.25) * kPi;
    double b8 = 8.0 * beta;
    return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
}

// Walk upward from the turning point counting sign changes; consecutive zeros
// of J_m are separated by more than 2.4, so a 1.2 step cannot skip one.
double scan_bracket(int m, int k, double& lo, double& hi) {
    double x = m == 0 ? 1e-3 : static_cast<double>(m);
    double step = 1.2;
    int found = 0;
    int s_prev = sign_of(bessel_j(m, x));
    if (s_prev == 0) s_prev = 1;
    while (found < k) {
        double nx = x + step;
        if (nx > kMaxArg)
            throw Error("bessel_zero: requested zero lies outside validated range x <= 500");
        int s = sign_of(bessel_j(m, nx));
        if (s == 0) {
            nx += 1e-9;
            s = sign_of(bessel_j(m, nx));
        }
        if (s != s_prev) {
            ++found;
            if (found == k) {
                lo = x;
                hi = nx;
                return bisect_zero(m, lo, hi);
            }
            s_prev = s;
        }
        x = nx;
    }
    throw Error("bessel_zero: scan failed");  // unreachable
}

}  // namespace

double bessel_zero(int m, int k) {
    if (m < 0 || m > kMaxOrder || k < 1) throw Error("bessel_zero: need 0 <= m <= 256, k >= 1");
    // McMahon is reliable once the zero index dominates the order.
    if (k >= std::max(2, m / 2)) {
        double est = mcmahon_estimate(m, k);
        if (est > kMaxArg)
            throw Error("bessel_zero: requested zero lies outside validated range x <= 500");
        double lo = est - 1.0, hi = est + 1.0;
        if (lo > 0.0 && sign_of(bessel_j(m, lo)) * sign_of(bessel_j(m, hi)) < 0)
            return bisect_zero(m, lo, hi);
    }
    double lo = 0.0, hi = 0.0;
    return scan_bracket(m, k, lo, hi);
}

}  // namespace qchaos
