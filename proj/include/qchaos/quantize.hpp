#pragma once

#include <vector>

#include "qchaos/kernels.hpp"
#include "qchaos/observable.hpp"

namespace qchaos {

using kernels::Matrix;
using kernels::Vector;

/// Quantized observable on the N-dimensional torus Hilbert space
/// (semiclassical parameter h = 1/(2 pi N)).
struct WeylOperator {
    int N = 0;
    Matrix matrix;
};

/// e^{-i pi m n / N} M_n S_m with (S_m psi)(j) = psi(j - m mod N) and
/// (M_n psi)(j) = e^{2 pi i n j / N} psi(j). Unitary for every v.
Matrix translation_op(int N, LatticeVector v);

/// Translation-term expansion of Op_N(a): the plane-wave mode (m, n) is routed
/// through the symplectic rotation J(m, n) = (-n, m), which is what makes
/// position-only observables quantize to multiplication operators and the
/// propagator's Egorov identity close against the map itself.
std::vector<kernels::TranslationTerm> translation_terms(const TorusObservable& a);

/// Op_N(a) = sum_v coeff(v) translation_op(N, Jv). Requires band limit K < N/2.
WeylOperator quantize(int N, const TorusObservable& a);

/// Throws AliasingError unless the band limit of a satisfies K < N/2.
void require_band_limit(int N, const TorusObservable& a, const char* where);

}  // namespace qchaos
