#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qchaos/common.hpp"
#include "qchaos/lattice.hpp"

namespace qchaos {

/// Band-limited classical observable on T^2, stored as a finite Fourier series
///   a(x, xi) = sum_v  coeff(v) * e^{2 pi i (m x + n xi)},   v = (m, n).
///
/// The mode list is kept sorted by (m, n) and free of exact-zero entries, so
/// iteration order (and hence every downstream floating-point reduction) is
/// deterministic. Instances are immutable; all algebra returns new values.
class TorusObservable {
public:
    struct Mode {
        LatticeVector v;
        cplx c;
        friend bool operator==(const Mode&, const Mode&) = default;
    };

    TorusObservable() = default;  // the zero observable

    static TorusObservable constant(cplx value);
    static TorusObservable harmonic(LatticeVector v, cplx amplitude);
    /// cos(2 pi p x): modes (+-p, 0) with amplitude 1/2.
    static TorusObservable cosine_x(long long p = 1);
    /// cos(2 pi p xi): modes (0, +-p) with amplitude 1/2.
    static TorusObservable cosine_xi(long long p = 1);
    static TorusObservable from_modes(std::vector<Mode> modes);

    const std::vector<Mode>& modes() const { return modes_; }
    bool empty() const { return modes_.empty(); }
    long long band_limit() const;  // max-norm bound K over stored modes (0 if empty)
    cplx coefficient(const LatticeVector& v) const;

    cplx mean() const { return coefficient({0, 0}); }
    double l2_norm_sq() const;  // Plancherel: sum |coeff|^2
    bool is_real(double tol = 1e-12) const;

    cplx evaluate(double x, double xi) const;

    TorusObservable scaled(cplx factor) const;
    TorusObservable conjugated() const;
    TorusObservable minus_mean() const;
    friend TorusObservable operator+(const TorusObservable&, const TorusObservable&);
    friend TorusObservable operator-(const TorusObservable&, const TorusObservable&);
    /// Pointwise product (coefficient convolution); band limits add.
    friend TorusObservable operator*(const TorusObservable&, const TorusObservable&);

    // JSON schema: { "modes": [ { "m": int, "n": int, "re": float, "im": float } ] }
    static TorusObservable from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    friend bool operator==(const TorusObservable&, const TorusObservable&) = default;

private:
    std::vector<Mode> modes_;  // sorted by v, no exact zeros
};

}  // namespace qchaos
