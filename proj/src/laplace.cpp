#include "qchaos/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "qchaos/bessel.hpp"

namespace qchaos {

Domain Domain::rectangle(double l1, double l2) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) throw Error("rectangle: sides must be positive");
    Domain d;
    d.kind = DomainKind::Rectangle;
    d.L1 = l1;
    d.L2 = l2;
    return d;
}

Domain Domain::disk(double r) {
    if (!(r > 0.0)) throw Error("disk: radius must be positive");
    Domain d;
    d.kind = DomainKind::Disk;
    d.radius = r;
    return d;
}

int Domain::dimension() const { return kind == DomainKind::Circle ? 1 : 2; }

double Domain::volume() const {
    switch (kind) {
        case DomainKind::Circle: return kTwoPi;
        case DomainKind::FlatTorus2D: return kTwoPi * kTwoPi;
        case DomainKind::Rectangle: return L1 * L2;
        case DomainKind::Disk: return kPi * radius * radius;
    }
    return 0.0;
}

double Domain::perimeter() const {
    switch (kind) {
        case DomainKind::Rectangle: return 2.0 * (L1 + L2);
        case DomainKind::Disk: return kTwoPi * radius;
        default: return 0.0;
    }
}

bool Domain::has_boundary() const {
    return kind == DomainKind::Rectangle || kind == DomainKind::Disk;
}

std::string Domain::name() const {
    switch (kind) {
        case DomainKind::Circle: return "circle";
        case DomainKind::FlatTorus2D: return "flat-torus";
        case DomainKind::Rectangle: return "rectangle";
        case DomainKind::Disk: return "disk";
    }
    return "?";
}

namespace {

void assign_ranks(std::vector<EigenEntry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const EigenEntry& x, const EigenEntry& y) {
        if (x.lambda != y.lambda) return x.lambda < y.lambda;
        if (x.idx1 != y.idx1) return x.idx1 < y.idx1;
        if (x.idx2 != y.idx2) return x.idx2 < y.idx2;
        return x.rank < y.rank;
    });
    size_t run_start = 0;
    for (size_t i = 0; i <= entries.size(); ++i) {
        if (i == entries.size() || entries[i].lambda != entries[run_start].lambda) {
            for (size_t k = run_start; k < i; ++k) entries[k].rank = static_cast<int>(k - run_start);
            run_start = i;
        }
    }
}

// Dirichlet disk zeros j_{m,k} <= cut for every angular order, parallel over m.
std::vector<std::vector<double>> disk_zero_table(double cut) {
    int m_max = static_cast<int>(std::floor(cut));  // j_{m,1} > m
    std::vector<std::vector<double>> table(static_cast<size_t>(m_max) + 1);
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m <= m_max; ++m) {
        std::vector<double> zeros;
        for (int k = 1;; ++k) {
            double z = bessel_zero(m, k);
            if (z > cut) break;
            zeros.push_back(z);
        }
        table[static_cast<size_t>(m)] = std::move(zeros);
    }
    return table;
}

}  // namespace

EigenData enumerate_eigenvalues(const Domain& d, double R) {
    if (!(R > 0.0)) throw Error("enumerate_eigenvalues: R must be positive");
    EigenData out;
    out.domain = d;
    out.dimension = d.dimension();
    switch (d.kind) {
        case DomainKind::Circle: {
            long long jmax = static_cast<long long>(std::floor(R));
            for (long long j = -jmax; j <= jmax; ++j)
                out.entries.push_back({static_cast<double>(std::llabs(j)), j, 0, 0});
            break;
        }
        case DomainKind::FlatTorus2D: {
            long long kmax = static_cast<long long>(std::floor(R));
            for (long long k1 = -kmax; k1 <= kmax; ++k1)
                for (long long k2 = -kmax; k2 <= kmax; ++k2) {
                    double lam = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
                    if (lam <= R) out.entries.push_back({lam, k1, k2, 0});
                }
            break;
        }
        case DomainKind::Rectangle: {
            long long mmax = static_cast<long long>(std::floor(R * d.L1 / kPi));
            for (long long m = 1; m <= mmax; ++m)
                for (long long n = 1;; ++n) {
                    double lam = kPi * std::hypot(m / d.L1, n / d.L2);
                    if (lam > R) break;
                    out.entries.push_back({lam, m, n, 0});
                }
            break;
        }
        case DomainKind::Disk: {
            auto table = disk_zero_table(R * d.radius);
            for (size_t m = 0; m < table.size(); ++m)
                for (size_t k = 0; k < table[m].size(); ++k) {
                    double lam = table[m][k] / d.radius;
                    int copies = m == 0 ? 1 : 2;
                    for (int s = 0; s < copies; ++s)
                        out.entries.push_back({lam, static_cast<long long>(m),
                                               static_cast<long long>(k) + 1, s});
                }
            break;
        }
    }
    assign_ranks(out.entries);
    return out;
}

long long count_eigenvalues(const Domain& d, double R) {
    if (!(R > 0.0)) throw Error("count_eigenvalues: R must be positive");
    switch (d.kind) {
        case DomainKind::Circle:
            return 2 * static_cast<long long>(std::floor(R)) + 1;
        case DomainKind::FlatTorus2D: {
            // same comparisons as enumerate_eigenvalues, so counts always agree
            long long kmax = static_cast<long long>(std::floor(R));
            long long total = 0;
            for (long long k1 = -kmax; k1 <= kmax; ++k1) {
                long long row = 0;
                for (long long k2 = 0;; ++k2) {
                    if (std::hypot(static_cast<double>(k1), static_cast<double>(k2)) > R) break;
                    ++row;
                }
                total += 2 * row - 1;
            }
            return total;
        }
        case DomainKind::Rectangle: {
            long long total = 0;
            long long mmax = static_cast<long long>(std::floor(R * d.L1 / kPi));
            for (long long m = 1; m <= mmax; ++m)
                for (long long n = 1;; ++n) {
                    if (kPi * std::hypot(m / d.L1, n / d.L2) > R) break;
                    ++total;
                }
            return total;
        }
        case DomainKind::Disk: {
            auto table = disk_zero_table(R * d.radius);
            long long total = 0;
            for (size_t m = 0; m < table.size(); ++m)
                total += static_cast<long long>(table[m].size()) * (m == 0 ? 1 : 2);
            return total;
        }
    }
    return 0;
}

std::string eigen_data_csv(const EigenData& data) {
    std::string out = "lambda,mode,rank\n";
    char buf[64];
    for (const EigenEntry& e : data.entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%lld;%lld,%d\n", e.lambda, e.idx1, e.idx2, e.rank);
        out += buf;
    }
    return out;
}

WeylComparison weyl_count_compare(const Domain& d, double R) {
    if (R < 10.0) throw Error("weyl_count_compare: R >= 10 required");
    WeylComparison w;
    w.R = R;
    w.count = count_eigenvalues(d, R);
    const int n = d.dimension();
    const double omega_n = n == 1 ? 2.0 : kPi;  // volume of the unit n-ball
    w.leading = omega_n / std::pow(kTwoPi, n) * d.volume() * std::pow(R, n);
    w.two_term = w.leading - (d.has_boundary() ? d.perimeter() / (4.0 * kPi) * R : 0.0);
    w.rel_error_leading = std::abs(static_cast<double>(w.count) - w.leading) / w.leading;
    return w;
}

// ---------------------------------------------------------------------------
// closed-form matrix elements

CircleProfile CircleProfile::constant(double value) {
    CircleProfile g;
    if (value != 0.0) g.harmonics.push_back({0, value});
    return g;
}

CircleProfile CircleProfile::cosine(long long p, double amp) {
    CircleProfile g;
    g.harmonics.push_back({p, amp * 0.5});
    g.harmonics.push_back({-p, amp * 0.5});
    return g;
}

cplx CircleProfile::value(double theta) const {
    cplx s = 0.0;
    for (const auto& [p, c] : harmonics) s += c * std::polar(1.0, static_cast<double>(p) * theta);
    return s;
}

cplx CircleProfile::mean() const {
    cplx s = 0.0;
    for (const auto& [p, c] : harmonics)
        if (p == 0) s += c;
    return s;
}

double CircleProfile::variance() const {
    double s = 0.0;
    for (const auto& [p, c] : harmonics)
        if (p != 0) s += std::norm(c);
    return s;
}

PhaseSpaceObservable PhaseSpaceObservable::diagonal(CircleProfile g) {
    PhaseSpaceObservable a;
    a.terms.push_back({{0, 0}, std::move(g)});
    return a;
}

const CircleProfile* PhaseSpaceObservable::diagonal_profile() const {
    for (const auto& t : terms)
        if (t.x_mode.is_zero()) return &t.profile;
    return nullptr;
}

cplx torus_phase_moment(const Domain& d, LatticeVector k, const PhaseSpaceObservable& a) {
    double theta = 0.0;
    switch (d.kind) {
        case DomainKind::Circle:
            if (k.m == 0 || k.n != 0) throw Error("torus_phase_moment: circle mode is (j, 0), j != 0");
            theta = k.m > 0 ? 0.0 : kPi;
            break;
        case DomainKind::FlatTorus2D:
            if (k.is_zero()) throw Error("torus_phase_moment: k must be nonzero");
            theta = std::atan2(static_cast<double>(k.n), static_cast<double>(k.m));
            break;
        default:
            throw Error("torus_phase_moment: closed form exists for circle and flat torus only");
    }
    const CircleProfile* g = a.diagonal_profile();
    return g ? g->value(theta) : cplx{0.0, 0.0};  // off-diagonal x-modes integrate to zero
}

cplx phase_liouville_mean(const Domain& d, const PhaseSpaceObservable& a) {
    const CircleProfile* g = a.diagonal_profile();
    if (!g) return {0.0, 0.0};
    switch (d.kind) {
        case DomainKind::Circle:
            // cosphere has two points, each with mass 1/2
            return 0.5 * (g->value(0.0) + g->value(kPi));
        case DomainKind::FlatTorus2D:
            return g->mean();
        default:
            throw Error("phase_liouville_mean: circle and flat torus only");
    }
}

double phase_direction_variance(const Domain& d, const PhaseSpaceObservable& a) {
    const CircleProfile* g = a.diagonal_profile();
    if (!g) return 0.0;
    switch (d.kind) {
        case DomainKind::Circle: {
            cplx diff = g->value(0.0) - g->value(kPi);
            return 0.25 * std::norm(diff);
        }
        case DomainKind::FlatTorus2D:
            return g->variance();
        default:
            throw Error("phase_direction_variance: circle and flat torus only");
    }
}

double rectangle_position_element(long long m, long long n, long long p) {
    if (m < 1 || n < 1 || p < 1) throw Error("rectangle_position_element: m, n, p >= 1");
    // (1/L1) int cos(2 pi p x / L1) (1 - cos(2 pi m x / L1)) dx = -1/2 [p == m]
    return p == m ? -0.5 : 0.0;
}

namespace {

struct DiskIntegrand {
    int m;
    double zero;
    double operator()(double r) const {
        double j = bessel_j(m, zero * r);
        return j * j * r;
    }
};

// Adaptive Simpson with explicit error accounting.
double adaptive_simpson(const DiskIntegrand& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    if (depth > 40) throw QuadratureError("disk_mass_in_radius: quadrature failed to converge");
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double disk_mass_in_radius(int m, int k, double r0) {
    if (!(r0 > 0.0) || !(r0 < 1.0)) throw Error("disk_mass_in_radius: need 0 < r0 < 1");
    double zero = bessel_zero(m, k);
    DiskIntegrand f{m, zero};
    double fa = f(0.0), fb = f(r0), fm = f(0.5 * r0);
    double whole = r0 / 6.0 * (fa + 4.0 * fm + fb);
    double integral = adaptive_simpson(f, 0.0, r0, fa, fm, fb, whole, 1e-12, 0);
    // closed-form normalization: int_0^1 J_m(j r)^2 r dr = J_{m+1}(j)^2 / 2
    double jn = bessel_j(m + 1, zero);
    return integral / (0.5 * jn * jn);
}

}  // namespace qchaos
