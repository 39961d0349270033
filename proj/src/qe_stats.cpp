#include "qchaos/qe_stats.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qchaos/spectral_cache.hpp"

namespace qchaos {

double QEReport::recompute_S() const {
    double s = 0.0;
    for (const cplx& v : V) s += std::norm(v - L_a);
    return normalization * s;
}

long long QEReport::exceptional_count(double eps) const {
    long long c = 0;
    for (const cplx& v : V)
        if (std::abs(v - L_a) > eps) ++c;
    return c;
}

double QEReport::exceptional_fraction(double eps) const {
    if (V.empty()) return 0.0;
    return static_cast<double>(exceptional_count(eps)) / static_cast<double>(V.size());
}

nlohmann::json QEReport::to_json(double eps) const {
    nlohmann::json v = nlohmann::json::array();
    for (const cplx& z : V) v.push_back({{"re", z.real()}, {"im", z.imag()}});
    return nlohmann::json{{"model", model},
                          {"N_or_R", size},
                          {"L_a", L_a},
                          {"S", S},
                          {"eps", eps},
                          {"exceptional_fraction", exceptional_fraction(eps)},
                          {"V", v}};
}

namespace {

double real_mean_or_throw(const TorusObservable& a, const char* where) {
    if (!a.is_real())
        throw Error(std::string(where) + ": observable must be real-valued");
    return a.mean().real();
}

}  // namespace

QEReport integrated_qe_catmap(const TorusObservable& a, const SpectralDecomposition& dec) {
    require_band_limit(dec.N, a, "integrated_qe_catmap");
    QEReport r;
    r.model = "catmap";
    r.size = dec.N;
    r.L_a = real_mean_or_throw(a, "integrated_qe_catmap");
    r.normalization = 1.0 / dec.N;
    Vector V = kernels::weyl_matrix_elements(dec.N, translation_terms(a), dec.vectors);
    r.V.assign(V.data(), V.data() + V.size());
    r.S = r.recompute_S();
    return r;
}

QEReport integrated_qe_laplace(const Domain& d, const LaplaceObservable& a, double R) {
    if (R < 10.0) throw Error("integrated_qe_laplace: R >= 10 required");
    QEReport r;
    r.model = "laplace";
    r.size = R;
    r.normalization = std::pow(R, -d.dimension());

    const auto* phase = std::get_if<PhaseSpaceObservable>(&a);
    const auto* cosine = std::get_if<PositionCosine>(&a);
    if (phase) {
        if (d.kind != DomainKind::Circle && d.kind != DomainKind::FlatTorus2D)
            throw Error("integrated_qe_laplace: phase observables need circle or flat torus");
        cplx mean = phase_liouville_mean(d, *phase);
        if (std::abs(mean.imag()) > 1e-12)
            throw Error("integrated_qe_laplace: observable must be real-valued");
        r.L_a = mean.real();
    } else if (cosine) {
        if (d.kind != DomainKind::Rectangle)
            throw Error("integrated_qe_laplace: position cosines need the rectangle");
        r.L_a = 0.0;  // mean of cos(2 pi p x / L1) over the rectangle
    } else {
        throw Error("integrated_qe_laplace: unsupported observable family");
    }

    EigenData data = enumerate_eigenvalues(d, 2.0 * R);
    for (const EigenEntry& e : data.entries) {
        if (e.lambda < R) continue;
        if (phase) {
            r.V.push_back(torus_phase_moment(d, {e.idx1, e.idx2}, *phase));
        } else {
            r.V.push_back(rectangle_position_element(e.idx1, e.idx2, cosine->p));
        }
    }
    r.S = r.recompute_S();
    return r;
}

double chebyshev_fraction(const QEReport& report, double eps) {
    if (!(eps > 0.0)) throw Error("chebyshev_fraction: eps must be positive");
    return report.exceptional_fraction(eps);
}

std::vector<int> density_one_extract(const QEReport& report, double eps) {
    if (!(eps > 0.0)) throw Error("density_one_extract: eps must be positive");
    std::vector<int> idx;
    for (size_t j = 0; j < report.V.size(); ++j)
        if (std::abs(report.V[j] - report.L_a) <= eps) idx.push_back(static_cast<int>(j));
    return idx;
}

HSIdentity hs_identity_check(const TorusObservable& a, const SpectralDecomposition& dec) {
    require_band_limit(dec.N, a, "hs_identity_check");
    HSIdentity h;
    Vector V = kernels::weyl_matrix_elements(dec.N, translation_terms(a), dec.vectors);
    double lhs = 0.0;
    for (Eigen::Index j = 0; j < V.size(); ++j) lhs += std::norm(V(j));
    h.lhs = lhs / dec.N;
    // (1/N) tr(Op* Op) is the squared Frobenius norm of the quantization
    WeylOperator op = quantize(dec.N, a);
    h.rhs = op.matrix.squaredNorm() / dec.N;
    h.slack = h.rhs - h.lhs;
    h.l2_gap = std::abs(h.rhs - a.l2_norm_sq());
    return h;
}

ProofChainRecord proof_chain_check(const CatMap& A, const TorusObservable& a, int N, long long T,
                                   const SpectralDecomposition& dec) {
    if (T < 1) throw Error("proof_chain_check: T must be positive");
    if (std::abs(a.mean()) > 1e-12) throw Error("proof_chain_check: observable must be mean-zero");
    real_mean_or_throw(a, "proof_chain_check");

    CatMap effective = calibrate_orientation(std::max(N, 8), A).effective_map;
    TorusObservable avg = ergodic_average(a, effective, T);
    require_band_limit(N, a, "proof_chain_check");
    require_band_limit(N, avg, "proof_chain_check (ergodic average)");

    Vector Va = kernels::weyl_matrix_elements(N, translation_terms(a), dec.vectors);
    Vector Vavg = kernels::weyl_matrix_elements(N, translation_terms(avg), dec.vectors);

    ProofChainRecord rec;
    rec.defect_i = (Va - Vavg).cwiseAbs().maxCoeff();
    double sa = 0.0, savg = 0.0;
    for (Eigen::Index j = 0; j < Va.size(); ++j) {
        sa += std::norm(Va(j));
        savg += std::norm(Vavg(j));
    }
    rec.S_a = sa / N;
    rec.S_avg = savg / N;
    rec.defect_ii = std::abs(rec.S_a - rec.S_avg);
    rec.l2_avg = avg.l2_norm_sq();
    rec.multiplicity = orbit_collision_multiplicity(a, effective, T);
    rec.orbits_disjoint = rec.multiplicity == 1;
    rec.C_a = a.l2_norm_sq() * static_cast<double>(rec.multiplicity);
    rec.bound_iv = rec.C_a / static_cast<double>(T);

    rec.pass_i = rec.defect_i < 1e-9;
    rec.pass_ii = rec.defect_ii < 1e-9;
    rec.pass_iii = rec.S_avg <= rec.l2_avg + 1e-12;
    rec.pass_iv = rec.l2_avg <= rec.bound_iv + 1e-12;
    return rec;
}

DecaySeries decay_experiment(const CatMap& A, const TorusObservable& a,
                             const std::vector<int>& sizes, double eps, SpectralCache* cache,
                             uint64_t seed) {
    for (size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw Error("decay_experiment: sizes must be increasing");
    DecaySeries series;
    series.eps = eps;
    for (int N : sizes) {
        QEReport r = integrated_qe_catmap(A, a, N, cache, seed);
        series.points.push_back({N, r.S, r.exceptional_fraction(eps)});
    }
    return series;
}

namespace {

SpectralDecomposition fresh_decomposition(const CatMap& A, int N, uint64_t seed) {
    SpectralDecomposition dec = spectrum(propagator(N, A));
    apply_cluster_rotations(dec, seed);
    return dec;
}

}  // namespace

QEReport integrated_qe_catmap(const CatMap& A, const TorusObservable& a, int N,
                              SpectralCache* cache, uint64_t seed) {
    if (cache) {
        const SpectralDecomposition& base = cache->get(A, N);
        if (seed == 0) return integrated_qe_catmap(a, base);
        SpectralDecomposition dec = base;
        apply_cluster_rotations(dec, seed);
        return integrated_qe_catmap(a, dec);
    }
    return integrated_qe_catmap(a, fresh_decomposition(A, N, seed));
}

ProofChainRecord proof_chain_check(const CatMap& A, const TorusObservable& a, int N, long long T,
                                   SpectralCache* cache, uint64_t seed) {
    if (cache) {
        const SpectralDecomposition& base = cache->get(A, N);
        if (seed == 0) return proof_chain_check(A, a, N, T, base);
        SpectralDecomposition dec = base;
        apply_cluster_rotations(dec, seed);
        return proof_chain_check(A, a, N, T, dec);
    }
    return proof_chain_check(A, a, N, T, fresh_decomposition(A, N, seed));
}

}  // namespace qchaos
