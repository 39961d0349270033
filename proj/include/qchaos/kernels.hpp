#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qchaos/common.hpp"

namespace qchaos::kernels {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Dense kernels used on the hot paths. Each has an OpenMP variant (the default
// name) and a serial reference. The parallel variants partition work over
// independent output entries and keep every inner reduction in a fixed serial
// order, so their results are bitwise identical to the serial references for
// any thread count; the test suite asserts exact equality and the bench target
// compares their throughput.

/// One term of a quantized observable: coeff * translation_op(N, (tm, tn)).
struct TranslationTerm {
    long long tm = 0;
    long long tn = 0;
    cplx coeff;
};

/// Cat-map propagator kernel, row j', column j:
///   N^{-1/2} exp( i pi (a j^2 - 2 j j' + d j'^2) / (b N) ),  |b| = 1.
/// The integer exponent is reduced mod 2N before the complex exponential, which
/// requires a and d even (otherwise the kernel is not well defined mod N).
Matrix propagator_matrix(int N, long long a, long long d, int b_sign);
Matrix propagator_matrix_serial(int N, long long a, long long d, int b_sign);

/// sum of coeff * e^{-i pi tm tn / N} M_tn S_tm over the given terms.
Matrix weyl_matrix(int N, const std::vector<TranslationTerm>& terms);
Matrix weyl_matrix_serial(int N, const std::vector<TranslationTerm>& terms);

/// Left/right multiplication by a translation-term sum in O(#terms * N^2),
/// used where forming the dense operator first would waste a gemm.
Matrix weyl_apply_left(int N, const std::vector<TranslationTerm>& terms, const Matrix& W);
Matrix weyl_apply_left_serial(int N, const std::vector<TranslationTerm>& terms, const Matrix& W);
Matrix weyl_apply_right(const Matrix& W, int N, const std::vector<TranslationTerm>& terms);
Matrix weyl_apply_right_serial(const Matrix& W, int N, const std::vector<TranslationTerm>& terms);

/// C = A * B, parallel over fixed-width column panels.
Matrix gemm(const Matrix& A, const Matrix& B);
Matrix gemm_serial(const Matrix& A, const Matrix& B);

/// V_j = u_j^* (op u_j) for the columns u_j of basis.
Vector matrix_elements(const Matrix& op, const Matrix& basis);
Vector matrix_elements_serial(const Matrix& op, const Matrix& basis);

/// Same contraction without forming the dense operator: O(#terms N) per
/// column. Agrees with matrix_elements on the quantized operator up to
/// round-off (different summation order).
Vector weyl_matrix_elements(int N, const std::vector<TranslationTerm>& terms, const Matrix& basis);
Vector weyl_matrix_elements_serial(int N, const std::vector<TranslationTerm>& terms,
                                   const Matrix& basis);

/// max_{ij} |(U^* U - I)_{ij}|.
double unitarity_defect(const Matrix& U);
double unitarity_defect_serial(const Matrix& U);

/// Raw Husimi samples |<psi_{x,xi}, u>|^2 on the G x G grid
/// (x, xi) = (gx/G, gxi/G); psi is the unit-normalized periodized Gaussian of
/// position width (2N)^{-1/2} with `images` image terms on each side.
RealMatrix husimi_grid(const Vector& u, int G, int images = 5);
RealMatrix husimi_grid_serial(const Vector& u, int G, int images = 5);

/// Operator 2-norm by power iteration on M^* M with a fixed pseudo-random
/// start vector; deterministic (serial reductions), rel. tolerance 1e-9.
double spectral_norm(const Matrix& M);

}  // namespace qchaos::kernels
