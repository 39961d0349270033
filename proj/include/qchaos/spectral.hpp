#pragma once

#include <cstdint>
#include <vector>

#include "qchaos/propagator.hpp"
#include "qchaos/quantize.hpp"

namespace qchaos {

/// Gap below which neighboring eigenphases are treated as one degenerate
/// cluster (quantum-period degeneracies are exact, so clusters are tight).
inline constexpr double kClusterGap = 1e-8;

struct SpectralDecomposition {
    int N = 0;
    Eigen::VectorXd phases;  // theta_j in [0, 2pi), ascending
    Matrix vectors;          // orthonormal columns u_j with U u_j = e^{i theta_j} u_j
    std::vector<std::vector<int>> degenerate_clusters;  // circular gap < kClusterGap
};

/// Index groups of circularly adjacent phases with gap < kClusterGap,
/// restricted to groups of size > 1.
std::vector<std::vector<int>> phase_clusters(const Eigen::VectorXd& phases);

/// Full eigendecomposition of a unitary (normal) matrix via its Schur form.
/// Columns inside each degenerate cluster are re-orthonormalized by QR, and
/// every column's phase is canonicalized (first component above
/// 1e-12 * max|component| made real positive). Deterministic.
/// Throws EigensolverError if the QR iteration fails to converge.
SpectralDecomposition spectrum(const Matrix& U);
SpectralDecomposition spectrum(const Propagator& U);

/// Haar-random rotation inside each degenerate cluster, reproducible from the
/// seed; seed 0 keeps the canonical QR basis. Probes basis sensitivity of the
/// statistics on degenerate spectra.
void apply_cluster_rotations(SpectralDecomposition& dec, uint64_t seed);

/// V_j = <op u_j, u_j>.
Vector matrix_elements(const SpectralDecomposition& dec, const WeylOperator& op);

/// max_j || U u_j - e^{i theta_j} u_j ||_2.
double max_residual(const Matrix& U, const SpectralDecomposition& dec);

/// max entry of |V^* V - I| over the eigenvector matrix.
double gram_defect(const SpectralDecomposition& dec);

}  // namespace qchaos
