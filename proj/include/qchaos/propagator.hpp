#pragma once

#include "qchaos/cat_map.hpp"
#include "qchaos/quantize.hpp"

namespace qchaos {

struct Propagator {
    int N = 0;
    CatMap map;
    Matrix matrix;  // exactly unitary N x N (Gauss-sum cancellation)
};

/// Quantum cat map U_N for a quantizable A (|b| = 1, a and d even, hyperbolic):
///   U[j', j] = N^{-1/2} exp( i pi (a j^2 - 2 j j' + d j'^2) / (b N) ).
/// propagator(A.inverse()) equals propagator(A).adjoint() entrywise.
Propagator propagator(int N, const CatMap& A);

enum class Orientation { Forward, Inverse };

struct CalibrationResult {
    Orientation orientation;
    CatMap effective_map;  // the classical map the kernel realizes
    double forward_defect;
    double inverse_defect;
};

/// Decides which of A, A^{-1} satisfies the exact Egorov identity
///   U^{-1} Op(e_v) U = Op(e_v o A')   for v = (1, 0),
/// by measuring both defects at the given N (N >= 8). Deterministic;
/// throws CalibrationError if neither candidate passes 1e-8.
CalibrationResult calibrate_orientation(int N, const CatMap& A);

/// Same test against a caller-supplied candidate matrix; a corrupted kernel
/// fails both orientations and surfaces as CalibrationError.
CalibrationResult calibrate_orientation(int N, const CatMap& A, const Matrix& U);

/// Operator 2-norm of U^{-t} Op_N(a) U^{t} - Op_N(a o A'^t), t >= 1, where A'
/// is the calibrated orientation. Exact Egorov makes this round-off sized.
/// Throws AliasingError if the evolved band limit reaches N/2.
double egorov_defect(int N, const CatMap& A, const TorusObservable& a, long long t);

struct EgorovDefect {
    LatticeVector v;
    long long t = 0;
    double defect = 0.0;
    bool aliased = false;  // evolved band limit reached N/2, defect undefined
};

/// egorov_defect over every mode |v|_inf <= K and each listed t, sharing the
/// calibration and the propagator powers; mode norms run in parallel.
/// Aliased combinations are flagged instead of throwing.
std::vector<EgorovDefect> egorov_mode_scan(int N, const CatMap& A, long long K,
                                           const std::vector<long long>& ts);

}  // namespace qchaos
