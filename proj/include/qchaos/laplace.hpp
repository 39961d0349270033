#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qchaos/common.hpp"
#include "qchaos/lattice.hpp"

namespace qchaos {

enum class DomainKind { Circle, FlatTorus2D, Rectangle, Disk };

/// Exactly solvable domains. Circle is R/2piZ; the flat torus is (R/2piZ)^2;
/// rectangle and disk carry Dirichlet conditions.
struct Domain {
    DomainKind kind = DomainKind::Circle;
    double L1 = 1.0, L2 = 1.0;  // rectangle sides
    double radius = 1.0;        // disk

    static Domain circle() { return {DomainKind::Circle}; }
    static Domain flat_torus() { return {DomainKind::FlatTorus2D}; }
    static Domain rectangle(double l1, double l2);
    static Domain disk(double r);

    int dimension() const;
    double volume() const;
    double perimeter() const;       // 0 for boundaryless domains
    bool has_boundary() const;
    std::string name() const;
};

struct EigenEntry {
    double lambda = 0.0;
    long long idx1 = 0;  // circle: j; torus: k1; rectangle: m; disk: angular m
    long long idx2 = 0;  // torus: k2; rectangle: n; disk: radial k
    int rank = 0;        // multiplicity rank within equal lambda, in index order
};

struct EigenData {
    Domain domain;
    int dimension = 0;
    std::vector<EigenEntry> entries;  // lambda ascending, ties in index order
};

/// Complete spectrum up to lambda <= R, with multiplicity. Disk enumeration
/// parallelizes over the angular order.
EigenData enumerate_eigenvalues(const Domain& d, double R);

/// Counting-only variant (no entry storage).
long long count_eigenvalues(const Domain& d, double R);

/// CSV export: header "lambda,mode,rank", mode as "idx1;idx2".
std::string eigen_data_csv(const EigenData& data);

struct WeylComparison {
    double R = 0.0;
    long long count = 0;
    double leading = 0.0;       // (omega_n / (2 pi)^n) vol R^n
    double two_term = 0.0;      // leading minus (perimeter / 4 pi) R for Dirichlet domains
    double rel_error_leading = 0.0;
};

WeylComparison weyl_count_compare(const Domain& d, double R);  // R >= 10

/// Profile on the circle of directions, g(theta) = sum_p c_p e^{i p theta}.
struct CircleProfile {
    std::vector<std::pair<long long, cplx>> harmonics;

    static CircleProfile constant(double value);
    /// amp * cos(p theta)
    static CircleProfile cosine(long long p, double amp = 1.0);
    cplx value(double theta) const;
    cplx mean() const;        // p = 0 coefficient
    double variance() const;  // sum_{p != 0} |c_p|^2
};

/// Symbol a(x, xi) = sum_terms e^{2 pi i (x_mode . x)} g_term(xi / |xi|).
struct PhaseSpaceObservable {
    struct Term {
        LatticeVector x_mode;
        CircleProfile profile;
    };
    std::vector<Term> terms;

    static PhaseSpaceObservable diagonal(CircleProfile g);
    const CircleProfile* diagonal_profile() const;  // term with x_mode = 0, if any
};

/// cos(2 pi p x / L1) on the rectangle.
struct PositionCosine {
    long long p = 1;
};

using LaplaceObservable = std::variant<PhaseSpaceObservable, PositionCosine>;

/// Exact plane-wave matrix element <Op_h(a) u_k, u_k> at h = 1/|k|:
/// the zero-x-mode profile evaluated at the direction of k; off-diagonal
/// x-modes contribute exactly zero. Domains: Circle (k = (j, 0)), FlatTorus2D.
cplx torus_phase_moment(const Domain& d, LatticeVector k, const PhaseSpaceObservable& a);

/// Liouville average of the symbol over the unit (co)sphere directions.
cplx phase_liouville_mean(const Domain& d, const PhaseSpaceObservable& a);

/// Variance of the diagonal profile over the direction measure.
double phase_direction_variance(const Domain& d, const PhaseSpaceObservable& a);

/// integral of cos(2 pi p x / L1) |u_{m,n}|^2 over the rectangle:
/// -1/2 exactly at the resonance p = m, else 0 (from the sine-squared
/// expansion of the exact integral).
double rectangle_position_element(long long m, long long n, long long p);

/// integral of |u_{m,k}|^2 over {r < r0 * radius} for the Dirichlet disk mode
/// J_m(j_{m,k} r) e^{i m theta}, unit total mass; adaptive quadrature with
/// absolute error below 1e-9. 0 < r0 < 1.
double disk_mass_in_radius(int m, int k, double r0);

}  // namespace qchaos
