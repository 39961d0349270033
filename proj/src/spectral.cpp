#include "qchaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qchaos {

namespace {

void canonicalize_column(Eigen::Ref<Vector> col) {
    double peak = col.cwiseAbs().maxCoeff();
    if (peak <= 0.0) return;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        double mag = std::abs(col(i));
        if (mag > 1e-12 * peak) {
            col *= std::conj(col(i)) / mag;
            return;
        }
    }
}

}  // namespace

std::vector<std::vector<int>> phase_clusters(const Eigen::VectorXd& phases) {
    const int n = static_cast<int>(phases.size());
    std::vector<std::vector<int>> groups;
    if (n == 0) return groups;
    std::vector<int> current{0};
    for (int i = 1; i < n; ++i) {
        if (phases(i) - phases(i - 1) < kClusterGap) {
            current.push_back(i);
        } else {
            groups.push_back(std::move(current));
            current = {i};
        }
    }
    groups.push_back(std::move(current));
    // wrap-around: phases near 2pi and near 0 are the same eigenvalue
    if (groups.size() > 1 && phases(0) + kTwoPi - phases(n - 1) < kClusterGap) {
        groups.front().insert(groups.front().begin(), groups.back().begin(), groups.back().end());
        groups.pop_back();
    }
    std::vector<std::vector<int>> degenerate;
    for (auto& g : groups)
        if (g.size() > 1) degenerate.push_back(std::move(g));
    return degenerate;
}

namespace {

Matrix gather_columns(const Matrix& M, const std::vector<int>& idx) {
    Matrix B(M.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) B.col(static_cast<Eigen::Index>(k)) = M.col(idx[k]);
    return B;
}

void scatter_columns(Matrix& M, const std::vector<int>& idx, const Matrix& B) {
    for (size_t k = 0; k < idx.size(); ++k) M.col(idx[k]) = B.col(static_cast<Eigen::Index>(k));
}

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Portable standard normal (Box-Muller on splitmix64 uniforms).
double gaussian(uint64_t& state) {
    double u1 = (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

SpectralDecomposition spectrum(const Matrix& U) {
    if (U.rows() != U.cols()) throw Error("spectrum: square matrix expected");
    const int n = static_cast<int>(U.rows());
    SpectralDecomposition dec;
    dec.N = n;
    if (n == 0) return dec;

    Matrix T = U;  // overwritten with the Schur form
    Matrix Z(n, n);
    Vector w(n);
    lapack_int sdim = 0;
    lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, T.data(), n, &sdim,
                                    w.data(), Z.data(), n);
    if (info != 0)
        throw EigensolverError("spectrum: zgees failed to converge (info = " +
                               std::to_string(info) + ")");

    Eigen::VectorXd theta(n);
    for (int j = 0; j < n; ++j) {
        double t = std::atan2(w(j).imag(), w(j).real());
        if (t < 0.0) t += kTwoPi;
        if (t >= kTwoPi) t = 0.0;
        theta(j) = t;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return theta(i) < theta(j); });

    dec.phases.resize(n);
    dec.vectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        dec.phases(j) = theta(order[j]);
        dec.vectors.col(j) = Z.col(order[j]);
    }

    dec.degenerate_clusters = phase_clusters(dec.phases);
    for (const auto& cluster : dec.degenerate_clusters) {
        Matrix block = gather_columns(dec.vectors, cluster);
        Eigen::HouseholderQR<Matrix> qr(block);
        Matrix q = qr.householderQ() * Matrix::Identity(n, static_cast<Eigen::Index>(cluster.size()));
        scatter_columns(dec.vectors, cluster, q);
    }
    for (int j = 0; j < n; ++j) canonicalize_column(dec.vectors.col(j));
    return dec;
}

SpectralDecomposition spectrum(const Propagator& U) { return spectrum(U.matrix); }

void apply_cluster_rotations(SpectralDecomposition& dec, uint64_t seed) {
    if (seed == 0) return;
    uint64_t cluster_index = 0;
    for (const auto& cluster : dec.degenerate_clusters) {
        const auto g = static_cast<Eigen::Index>(cluster.size());
        uint64_t state = seed * 0x2545F4914F6CDD1DULL + ++cluster_index;
        Matrix gauss(g, g);
        for (Eigen::Index c = 0; c < g; ++c)
            for (Eigen::Index r = 0; r < g; ++r) gauss(r, c) = cplx(gaussian(state), gaussian(state));
        Eigen::HouseholderQR<Matrix> qr(gauss);
        Matrix rot = qr.householderQ() * Matrix::Identity(g, g);
        Matrix block = gather_columns(dec.vectors, cluster) * rot;
        scatter_columns(dec.vectors, cluster, block);
        for (int idx : cluster) canonicalize_column(dec.vectors.col(idx));
    }
}

Vector matrix_elements(const SpectralDecomposition& dec, const WeylOperator& op) {
    if (op.N != dec.N || op.matrix.rows() != dec.vectors.rows())
        throw Error("matrix_elements: dimension mismatch");
    return kernels::matrix_elements(op.matrix, dec.vectors);
}

double max_residual(const Matrix& U, const SpectralDecomposition& dec) {
    double worst = 0.0;
    Vector tmp(dec.vectors.rows());
    for (int j = 0; j < dec.N; ++j) {
        tmp.noalias() = U * dec.vectors.col(j);
        tmp -= std::polar(1.0, dec.phases(j)) * dec.vectors.col(j);
        worst = std::max(worst, tmp.norm());
    }
    return worst;
}

double gram_defect(const SpectralDecomposition& dec) {
    return kernels::unitarity_defect(dec.vectors);
}

}  // namespace qchaos
