#include "qchaos/quantize.hpp"

#include <string>

namespace qchaos {

Matrix translation_op(int N, LatticeVector v) {
    if (N < 1) throw Error("translation_op: N must be positive");
    return kernels::weyl_matrix_serial(N, {{v.m, v.n, cplx{1.0, 0.0}}});
}

std::vector<kernels::TranslationTerm> translation_terms(const TorusObservable& a) {
    std::vector<kernels::TranslationTerm> terms;
    terms.reserve(a.modes().size());
    for (const auto& mode : a.modes()) terms.push_back({-mode.v.n, mode.v.m, mode.c});
    return terms;
}

void require_band_limit(int N, const TorusObservable& a, const char* where) {
    long long k = a.band_limit();
    if (2 * k >= N)
        throw AliasingError(std::string(where) + ": band limit " + std::to_string(k) +
                            " reaches N/2 for N = " + std::to_string(N));
}

WeylOperator quantize(int N, const TorusObservable& a) {
    if (N < 1) throw Error("quantize: N must be positive");
    require_band_limit(N, a, "quantize");
    return {N, kernels::weyl_matrix(N, translation_terms(a))};
}

}  // namespace qchaos
