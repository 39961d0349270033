#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qchaos/cat_map.hpp"
#include "qchaos/laplace.hpp"
#include "qchaos/spectral.hpp"

namespace qchaos {

/// Windowed mean-square deviation of matrix elements from the invariant mean:
///   S = normalization * sum_j |V_j - L_a|^2,
/// normalization 1/N for a cat map at size N, R^{-n} for a Laplace window [R, 2R].
struct QEReport {
    std::string model;        // "catmap" or "laplace"
    double size = 0.0;        // N or R
    double L_a = 0.0;
    double normalization = 0.0;
    std::vector<cplx> V;
    double S = 0.0;

    double recompute_S() const;
    long long exceptional_count(double eps) const;  // #{ |V_j - L_a| > eps }
    double exceptional_fraction(double eps) const;  // count / V.size()

    nlohmann::json to_json(double eps) const;
};

QEReport integrated_qe_catmap(const TorusObservable& a, const SpectralDecomposition& dec);

QEReport integrated_qe_laplace(const Domain& d, const LaplaceObservable& a, double R);

/// eps > 0; fraction of indices with |V_j - L_a| > eps. Always satisfies
/// count * normalization * eps^2 <= S.
double chebyshev_fraction(const QEReport& report, double eps);

/// Sorted indices of the complement of the exceptional set.
std::vector<int> density_one_extract(const QEReport& report, double eps);

struct HSIdentity {
    double lhs = 0.0;      // (1/N) sum_j |V_j|^2
    double rhs = 0.0;      // (1/N) tr(Op* Op)
    double slack = 0.0;    // rhs - lhs, nonnegative
    double l2_gap = 0.0;   // |rhs - l2_norm_sq(a)|
};

HSIdentity hs_identity_check(const TorusObservable& a, const SpectralDecomposition& dec);

/// The averaged-statement chain on one mean-zero observable, in order:
///  (i)   V_j(a) = V_j(<a>_T) for every j               (eigenfunction invariance)
///  (ii)  S_N(a) = S_N(<a>_T)
///  (iii) S_N(<a>_T) <= l2_norm_sq(<a>_T)               (Hilbert-Schmidt bound)
///  (iv)  l2_norm_sq(<a>_T) <= C_a / T,  C_a = l2_norm_sq(a) * orbit multiplicity,
///        with equality l2_norm_sq(a)/T exactly when the mode orbits are disjoint.
struct ProofChainRecord {
    double defect_i = 0.0;
    double defect_ii = 0.0;
    double S_a = 0.0;
    double S_avg = 0.0;
    double l2_avg = 0.0;      // value appearing in (iii) rhs and (iv) lhs
    double C_a = 0.0;
    double bound_iv = 0.0;    // C_a / T
    long long multiplicity = 0;
    bool orbits_disjoint = false;
    bool pass_i = false, pass_ii = false, pass_iii = false, pass_iv = false;
    bool all_pass() const { return pass_i && pass_ii && pass_iii && pass_iv; }
};

ProofChainRecord proof_chain_check(const CatMap& A, const TorusObservable& a, int N, long long T,
                                   const SpectralDecomposition& dec);

struct DecayPoint {
    int size = 0;
    double S = 0.0;
    double fraction = 0.0;  // exceptional fraction at the sweep eps
};

struct DecaySeries {
    double eps = 0.1;
    std::vector<DecayPoint> points;
};

class SpectralCache;

/// S_N sweep over strictly increasing sizes (prime sizes recommended: they
/// avoid short quantum periods whose degeneracies inflate the statistic).
DecaySeries decay_experiment(const CatMap& A, const TorusObservable& a,
                             const std::vector<int>& sizes, double eps = 0.1,
                             SpectralCache* cache = nullptr, uint64_t seed = 0);

/// Convenience wrappers that build (or fetch) the decomposition themselves.
QEReport integrated_qe_catmap(const CatMap& A, const TorusObservable& a, int N,
                              SpectralCache* cache = nullptr, uint64_t seed = 0);
ProofChainRecord proof_chain_check(const CatMap& A, const TorusObservable& a, int N, long long T,
                                   SpectralCache* cache = nullptr, uint64_t seed = 0);

}  // namespace qchaos
