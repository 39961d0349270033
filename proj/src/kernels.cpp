#include "qchaos/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace qchaos::kernels {

namespace {

long long emod(long long v, long long m) {
    long long r = v % m;
    return r < 0 ? r + m : r;
}

// Row-phase table for one translation term:
//   phi(r) = coeff * exp(i pi (2 tn r - tm tn) / N), r = 0..N-1.
Vector term_row_phases(int N, const TranslationTerm& t) {
    Vector phi(N);
    for (int r = 0; r < N; ++r) {
        long long e = emod(2 * t.tn * r - t.tm * t.tn, 2LL * N);
        phi(r) = t.coeff * std::polar(1.0, kPi * static_cast<double>(e) / N);
    }
    return phi;
}

constexpr int kGemmPanel = 32;

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// propagator kernel

static Matrix propagator_impl(int N, long long a, long long d, int b_sign, bool parallel) {
    if (N < 1) throw Error("propagator kernel: N must be positive");
    if (b_sign != 1 && b_sign != -1) throw Error("propagator kernel: b must be +-1");
    Matrix U(N, N);
    const double amp = 1.0 / std::sqrt(static_cast<double>(N));
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < N; ++j) {
        for (int jp = 0; jp < N; ++jp) {
            long long e = a * j * j - 2LL * j * jp + d * jp * jp;
            e = emod(b_sign * e, 2LL * N);
            U(jp, j) = std::polar(amp, kPi * static_cast<double>(e) / N);
        }
    }
    return U;
}

Matrix propagator_matrix(int N, long long a, long long d, int b_sign) {
    return propagator_impl(N, a, d, b_sign, true);
}
Matrix propagator_matrix_serial(int N, long long a, long long d, int b_sign) {
    return propagator_impl(N, a, d, b_sign, false);
}

// ---------------------------------------------------------------------------
// quantized observables

static Matrix weyl_impl(int N, const std::vector<TranslationTerm>& terms, bool parallel) {
    Matrix M = Matrix::Zero(N, N);
    std::vector<Vector> phases;
    phases.reserve(terms.size());
    for (const auto& t : terms) phases.push_back(term_row_phases(N, t));
#pragma omp parallel for schedule(static) if (parallel)
    for (int c = 0; c < N; ++c) {
        for (size_t k = 0; k < terms.size(); ++k) {
            int r = static_cast<int>(emod(c + terms[k].tm, N));
            M(r, c) += phases[k](r);
        }
    }
    return M;
}

Matrix weyl_matrix(int N, const std::vector<TranslationTerm>& terms) {
    return weyl_impl(N, terms, true);
}
Matrix weyl_matrix_serial(int N, const std::vector<TranslationTerm>& terms) {
    return weyl_impl(N, terms, false);
}

static Matrix weyl_left_impl(int N, const std::vector<TranslationTerm>& terms, const Matrix& W,
                             bool parallel) {
    if (W.rows() != N) throw Error("weyl_apply_left: dimension mismatch");
    Matrix out = Matrix::Zero(N, W.cols());
    std::vector<Vector> phases;
    phases.reserve(terms.size());
    for (const auto& t : terms) phases.push_back(term_row_phases(N, t));
    const auto cols = static_cast<int>(W.cols());
#pragma omp parallel for schedule(static) if (parallel)
    for (int c = 0; c < cols; ++c) {
        for (size_t k = 0; k < terms.size(); ++k) {
            const int shift = static_cast<int>(emod(terms[k].tm, N));
            for (int r = 0; r < N; ++r) {
                int src = r - shift;
                if (src < 0) src += N;
                out(r, c) += phases[k](r) * W(src, c);
            }
        }
    }
    return out;
}

Matrix weyl_apply_left(int N, const std::vector<TranslationTerm>& terms, const Matrix& W) {
    return weyl_left_impl(N, terms, W, true);
}
Matrix weyl_apply_left_serial(int N, const std::vector<TranslationTerm>& terms, const Matrix& W) {
    return weyl_left_impl(N, terms, W, false);
}

static Matrix weyl_right_impl(const Matrix& W, int N, const std::vector<TranslationTerm>& terms,
                              bool parallel) {
    if (W.cols() != N) throw Error("weyl_apply_right: dimension mismatch");
    Matrix out = Matrix::Zero(W.rows(), N);
    std::vector<Vector> phases;
    phases.reserve(terms.size());
    for (const auto& t : terms) phases.push_back(term_row_phases(N, t));
#pragma omp parallel for schedule(static) if (parallel)
    for (int c = 0; c < N; ++c) {
        for (size_t k = 0; k < terms.size(); ++k) {
            int p = static_cast<int>(emod(c + terms[k].tm, N));
            out.col(c) += W.col(p) * phases[k](p);
        }
    }
    return out;
}

Matrix weyl_apply_right(const Matrix& W, int N, const std::vector<TranslationTerm>& terms) {
    return weyl_right_impl(W, N, terms, true);
}
Matrix weyl_apply_right_serial(const Matrix& W, int N, const std::vector<TranslationTerm>& terms) {
    return weyl_right_impl(W, N, terms, false);
}

// ---------------------------------------------------------------------------
// dense products and contractions

static Matrix gemm_impl(const Matrix& A, const Matrix& B, bool parallel) {
    if (A.cols() != B.rows()) throw Error("gemm: dimension mismatch");
    Matrix C(A.rows(), B.cols());
    const int cols = static_cast<int>(B.cols());
    const int panels = (cols + kGemmPanel - 1) / kGemmPanel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int p = 0; p < panels; ++p) {
        int c0 = p * kGemmPanel;
        int w = std::min(kGemmPanel, cols - c0);
        C.middleCols(c0, w).noalias() = A * B.middleCols(c0, w);
    }
    return C;
}

Matrix gemm(const Matrix& A, const Matrix& B) { return gemm_impl(A, B, true); }
Matrix gemm_serial(const Matrix& A, const Matrix& B) { return gemm_impl(A, B, false); }

static Vector matrix_elements_impl(const Matrix& op, const Matrix& basis, bool parallel) {
    if (op.rows() != op.cols() || op.cols() != basis.rows())
        throw Error("matrix_elements: dimension mismatch");
    const int n = static_cast<int>(basis.cols());
    Vector V(n);
#pragma omp parallel if (parallel)
    {
        Vector tmp(op.rows());
#pragma omp for schedule(static)
        for (int j = 0; j < n; ++j) {
            tmp.noalias() = op * basis.col(j);
            V(j) = basis.col(j).dot(tmp);
        }
    }
    return V;
}

Vector matrix_elements(const Matrix& op, const Matrix& basis) {
    return matrix_elements_impl(op, basis, true);
}
Vector matrix_elements_serial(const Matrix& op, const Matrix& basis) {
    return matrix_elements_impl(op, basis, false);
}

static Vector weyl_elements_impl(int N, const std::vector<TranslationTerm>& terms,
                                 const Matrix& basis, bool parallel) {
    if (basis.rows() != N) throw Error("weyl_matrix_elements: dimension mismatch");
    const int n = static_cast<int>(basis.cols());
    std::vector<Vector> phases;
    phases.reserve(terms.size());
    for (const auto& t : terms) phases.push_back(term_row_phases(N, t));
    Vector V(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (size_t k = 0; k < terms.size(); ++k) {
            const int shift = static_cast<int>(emod(terms[k].tm, N));
            cplx s = 0.0;
            for (int r = 0; r < N; ++r) {
                int src = r - shift;
                if (src < 0) src += N;
                s += std::conj(basis(r, j)) * phases[k](r) * basis(src, j);
            }
            acc += s;
        }
        V(j) = acc;
    }
    return V;
}

Vector weyl_matrix_elements(int N, const std::vector<TranslationTerm>& terms, const Matrix& basis) {
    return weyl_elements_impl(N, terms, basis, true);
}
Vector weyl_matrix_elements_serial(int N, const std::vector<TranslationTerm>& terms,
                                   const Matrix& basis) {
    return weyl_elements_impl(N, terms, basis, false);
}

static double unitarity_impl(const Matrix& U, bool parallel) {
    if (U.rows() != U.cols()) throw Error("unitarity_defect: square matrix expected");
    const int n = static_cast<int>(U.cols());
    double defect = 0.0;
    // U^*U is Hermitian, so the upper triangle carries every magnitude.
#pragma omp parallel for schedule(static) reduction(max : defect) if (parallel)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i) {
            cplx g = U.col(i).dot(U.col(j));
            if (i == j) g -= 1.0;
            defect = std::max(defect, std::abs(g));
        }
    }
    return defect;
}

double unitarity_defect(const Matrix& U) { return unitarity_impl(U, true); }
double unitarity_defect_serial(const Matrix& U) { return unitarity_impl(U, false); }

// ---------------------------------------------------------------------------
// Husimi sampling

static RealMatrix husimi_impl(const Vector& u, int G, int images, bool parallel) {
    if (G < 1) throw Error("husimi: grid must be positive");
    const int N = static_cast<int>(u.size());
    RealMatrix out(G, G);
#pragma omp parallel if (parallel)
    {
        Vector psi(N);
#pragma omp for schedule(static)
        for (int cell = 0; cell < G * G; ++cell) {
            const int gx = cell / G;
            const int gxi = cell % G;
            const double x = static_cast<double>(gx) / G;
            for (int j = 0; j < N; ++j) {
                cplx s = 0.0;
                for (int w = -images; w <= images; ++w) {
                    double dy = static_cast<double>(j) - N * x + static_cast<double>(w) * N;
                    double gauss = std::exp(-kPi * dy * dy / N);
                    // momentum phase exp(2 pi i gxi (j + w N) / G), reduced exactly mod G
                    long long e = emod(static_cast<long long>(gxi) * (j + static_cast<long long>(w) * N),
                                       G);
                    s += gauss * std::polar(1.0, kTwoPi * static_cast<double>(e) / G);
                }
                psi(j) = s;
            }
            double nrm2 = psi.squaredNorm();
            out(gx, gxi) = nrm2 > 0.0 ? std::norm(psi.dot(u)) / nrm2 : 0.0;
        }
    }
    return out;
}

RealMatrix husimi_grid(const Vector& u, int G, int images) {
    return husimi_impl(u, G, images, true);
}
RealMatrix husimi_grid_serial(const Vector& u, int G, int images) {
    return husimi_impl(u, G, images, false);
}

// ---------------------------------------------------------------------------
// operator 2-norm

double spectral_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Vector x(M.cols());
    uint64_t state = 0x0123456789ABCDEFULL;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double re = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
        double im = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
        x(i) = cplx(re, im);
    }
    double xn = x.norm();
    if (xn == 0.0) return 0.0;
    x /= xn;
    double sigma = 0.0;
    Vector y(M.rows()), z(M.cols());
    for (int it = 0; it < 500; ++it) {
        y.noalias() = M * x;
        double s = y.norm();
        if (s == 0.0) return 0.0;
        if (it > 0 && s - sigma <= 1e-9 * s) {
            sigma = s;
            break;
        }
        sigma = s;
        z.noalias() = M.adjoint() * y;
        double zn = z.norm();
        if (zn == 0.0) break;
        x = z / zn;
    }
    return sigma;
}

}  // namespace qchaos::kernels
