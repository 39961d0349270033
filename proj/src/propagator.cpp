#include "qchaos/propagator.hpp"

#include <string>

namespace qchaos {

namespace {

// ||U^{-1} X U - Y||_2 = ||X U - U Y||_2 by unitary invariance; both products
// cost O(#terms N^2) because X, Y are translation sums.
double conjugation_defect(int N, const std::vector<kernels::TranslationTerm>& x_terms,
                          const Matrix& W, const std::vector<kernels::TranslationTerm>& y_terms) {
    Matrix D = kernels::weyl_apply_left(N, x_terms, W) - kernels::weyl_apply_right(W, N, y_terms);
    return kernels::spectral_norm(D);
}

}  // namespace

Propagator propagator(int N, const CatMap& A) {
    if (N < 1) throw Error("propagator: N must be positive");
    if (!A.quantizable())
        throw Error("propagator: map not quantizable (needs |b| = 1 with a, d even)");
    int b_sign = A.b() > 0 ? 1 : -1;
    return {N, A, kernels::propagator_matrix(N, A.a(), A.d(), b_sign)};
}

CalibrationResult calibrate_orientation(int N, const CatMap& A) {
    if (N < 8) throw Error("calibrate_orientation: N >= 8 required");
    return calibrate_orientation(N, A, propagator(N, A).matrix);
}

CalibrationResult calibrate_orientation(int N, const CatMap& A, const Matrix& U) {
    if (N < 8) throw Error("calibrate_orientation: N >= 8 required");
    TorusObservable probe = TorusObservable::harmonic({1, 0}, 1.0);
    auto probe_terms = translation_terms(probe);
    double fwd = conjugation_defect(N, probe_terms, U,
                                    translation_terms(pullback(probe, A, 1)));
    double inv = conjugation_defect(N, probe_terms, U,
                                    translation_terms(pullback(probe, A.inverse(), 1)));
    constexpr double kTol = 1e-8;
    if (fwd < kTol && inv >= kTol) return {Orientation::Forward, A, fwd, inv};
    if (inv < kTol && fwd >= kTol) return {Orientation::Inverse, A.inverse(), fwd, inv};
    throw CalibrationError("calibrate_orientation: no orientation matched (forward defect " +
                           std::to_string(fwd) + ", inverse defect " + std::to_string(inv) + ")");
}

double egorov_defect(int N, const CatMap& A, const TorusObservable& a, long long t) {
    if (t < 1) throw Error("egorov_defect: t must be positive");
    require_band_limit(N, a, "egorov_defect");
    CalibrationResult cal = calibrate_orientation(N, A);
    TorusObservable evolved = pullback(a, cal.effective_map, t);
    require_band_limit(N, evolved, "egorov_defect (evolved observable)");
    Propagator U = propagator(N, A);
    Matrix W = U.matrix;
    for (long long s = 1; s < t; ++s) W = kernels::gemm(U.matrix, W);
    return conjugation_defect(N, translation_terms(a), W, translation_terms(evolved));
}

std::vector<EgorovDefect> egorov_mode_scan(int N, const CatMap& A, long long K,
                                           const std::vector<long long>& ts) {
    if (K < 0) throw Error("egorov_mode_scan: K must be nonnegative");
    for (long long t : ts)
        if (t < 1) throw Error("egorov_mode_scan: t must be positive");
    CalibrationResult cal = calibrate_orientation(N, A);
    Propagator U = propagator(N, A);

    std::vector<EgorovDefect> jobs;
    for (long long t : ts)
        for (long long m = -K; m <= K; ++m)
            for (long long n = -K; n <= K; ++n) jobs.push_back({{m, n}, t, 0.0, false});

    long long t_max = 0;
    for (long long t : ts) t_max = std::max(t_max, t);
    std::vector<Matrix> powers(static_cast<size_t>(t_max) + 1);
    powers[1] = U.matrix;
    for (long long s = 2; s <= t_max; ++s)
        powers[static_cast<size_t>(s)] = kernels::gemm(U.matrix, powers[static_cast<size_t>(s - 1)]);

    const auto count = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        EgorovDefect& job = jobs[static_cast<size_t>(i)];
        TorusObservable e = TorusObservable::harmonic(job.v, 1.0);
        TorusObservable evolved = pullback(e, cal.effective_map, job.t);
        if (2 * std::max(e.band_limit(), evolved.band_limit()) >= N) {
            job.aliased = true;
            continue;
        }
        const Matrix& W = powers[static_cast<size_t>(job.t)];
        Matrix D = kernels::weyl_apply_left_serial(N, translation_terms(e), W) -
                   kernels::weyl_apply_right_serial(W, N, translation_terms(evolved));
        job.defect = kernels::spectral_norm(D);
    }
    return jobs;
}

}  // namespace qchaos
