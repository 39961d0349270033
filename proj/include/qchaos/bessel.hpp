#pragma once

namespace qchaos {

/// J_m(x) by Miller's backward recurrence, validated for 0 <= m <= 256,
/// 0 <= x <= 500 (relative accuracy ~1e-13 against independent oracles).
/// Throws Error outside the validated domain.
double bessel_j(int m, double x);

/// k-th positive zero of J_m (k >= 1): McMahon-seeded bracket when the
/// expansion is reliable, sign-scan bracket otherwise, then bisection to
/// machine precision. |J_m(zero)| < 1e-10 on the validated domain.
double bessel_zero(int m, int k);

}  // namespace qchaos
