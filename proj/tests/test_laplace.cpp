#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qchaos/bessel.hpp"
#include "qchaos/laplace.hpp"

using namespace qchaos;

namespace {

// Refinement-doubling trapezoid oracle for the disk mass integrand.
double trapezoid_mass(int m, int k, double r0) {
    double zero = bessel_zero(m, k);
    auto f = [&](double r) {
        double j = bessel_j(m, zero * r);
        return j * j * r;
    };
    int n = 64;
    double prev = 0.0;
    for (int round = 0; round < 16; ++round) {
        double h = r0 / n;
        double s = 0.5 * (f(0.0) + f(r0));
        for (int i = 1; i < n; ++i) s += f(i * h);
        s *= h;
        if (round > 0 && std::abs(s - prev) < 1e-12) {
            prev = s;
            break;
        }
        prev = s;
        n *= 2;
    }
    double jn = bessel_j(m + 1, zero);
    return prev / (0.5 * jn * jn);
}

// Trapezoid over one period integrates trigonometric polynomials exactly.
double rectangle_element_oracle(long long m, long long p) {
    const int M = 4096;
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
        double x = static_cast<double>(i) / M;
        double u = std::sin(kPi * m * x);
        s += std::cos(kTwoPi * p * x) * 2.0 * u * u;
    }
    return s / M;
}

}  // namespace

TEST_CASE("eigenvalue enumeration examples") {
    EigenData torus = enumerate_eigenvalues(Domain::flat_torus(), 1.2);
    CHECK(torus.entries.size() == 5);  // 0 and the four |k| = 1 modes
    CHECK(torus.entries[0].lambda == 0.0);
    CHECK(torus.dimension == 2);
    // the diagonal modes |k| = sqrt(2) enter once R reaches 1.5
    CHECK(enumerate_eigenvalues(Domain::flat_torus(), 1.5).entries.size() == 9);

    EigenData rect = enumerate_eigenvalues(Domain::rectangle(1, 1), 5.0);
    REQUIRE(rect.entries.size() == 1);  // only (1,1): pi sqrt 2 ~ 4.443; (1,2), (2,1) exceed 5
    CHECK(rect.entries[0].idx1 == 1);
    CHECK(rect.entries[0].idx2 == 1);
    CHECK(rect.entries[0].lambda == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));

    EigenData disk = enumerate_eigenvalues(Domain::disk(1), 3.0);
    REQUIRE(disk.entries.size() == 1);
    CHECK(disk.entries[0].idx1 == 0);
    CHECK(disk.entries[0].idx2 == 1);
    CHECK(disk.entries[0].lambda == doctest::Approx(2.404825557695773).epsilon(1e-12));

    EigenData circle = enumerate_eigenvalues(Domain::circle(), 2.5);
    CHECK(circle.entries.size() == 5);  // j in {-2,...,2}
    CHECK(circle.dimension == 1);
}

TEST_CASE("eigen data invariants") {
    for (Domain d : {Domain::flat_torus(), Domain::rectangle(1.0, 0.7), Domain::disk(2.0)}) {
        double R = d.kind == DomainKind::Disk ? 12.0 : 20.0;
        EigenData data = enumerate_eigenvalues(d, R);
        REQUIRE(!data.entries.empty());
        CHECK(static_cast<long long>(data.entries.size()) == count_eigenvalues(d, R));
        for (size_t i = 1; i < data.entries.size(); ++i)
            CHECK(data.entries[i - 1].lambda <= data.entries[i].lambda);
        for (const EigenEntry& e : data.entries) {
            double closed = 0.0;
            switch (d.kind) {
                case DomainKind::Circle: closed = std::abs(static_cast<double>(e.idx1)); break;
                case DomainKind::FlatTorus2D:
                    closed = std::hypot(static_cast<double>(e.idx1), static_cast<double>(e.idx2));
                    break;
                case DomainKind::Rectangle:
                    closed = kPi * std::hypot(e.idx1 / d.L1, e.idx2 / d.L2);
                    break;
                case DomainKind::Disk:
                    closed = bessel_zero(static_cast<int>(e.idx1), static_cast<int>(e.idx2)) /
                             d.radius;
                    break;
            }
            CHECK(std::abs(e.lambda - closed) <= 1e-12 * std::max(1.0, closed));
        }
    }

    // disk angular orders m >= 1 appear with multiplicity 2
    EigenData disk = enumerate_eigenvalues(Domain::disk(1.0), 8.0);
    long long with_m1 = 0;
    for (const EigenEntry& e : disk.entries)
        if (e.idx1 == 1 && e.idx2 == 1) ++with_m1;
    CHECK(with_m1 == 2);
}

TEST_CASE("weyl counts") {
    WeylComparison circle = weyl_count_compare(Domain::circle(), 100.0);
    CHECK(circle.count == 201);
    CHECK(circle.leading == doctest::Approx(200.0).epsilon(1e-14));
    CHECK(circle.two_term == circle.leading);

    WeylComparison torus = weyl_count_compare(Domain::flat_torus(), 100.0);
    CHECK(static_cast<double>(torus.count) / torus.leading > 0.98);
    CHECK(static_cast<double>(torus.count) / torus.leading < 1.02);

    // two-term prediction within the lattice-remainder margin
    for (double R : {100.0, 200.0}) {
        WeylComparison rect = weyl_count_compare(Domain::rectangle(1, 1), R);
        CHECK(std::abs(static_cast<double>(rect.count) - rect.two_term) <=
              3.0 * std::pow(R, 2.0 / 3.0));
    }

    // relative error against the leading term decreases
    double prev = 1e9;
    for (double R : {50.0, 100.0, 200.0}) {
        WeylComparison rect = weyl_count_compare(Domain::rectangle(1, 1), R);
        CHECK(rect.rel_error_leading < prev);
        prev = rect.rel_error_leading;
    }

    CHECK_THROWS_AS(weyl_count_compare(Domain::circle(), 5.0), Error);
}

TEST_CASE("phase moments on circle and torus") {
    CircleProfile g = CircleProfile::cosine(1, 0.8);  // g(theta) = 0.8 cos(theta)
    PhaseSpaceObservable a = PhaseSpaceObservable::diagonal(g);

    // constant symbol
    PhaseSpaceObservable one = PhaseSpaceObservable::diagonal(CircleProfile::constant(1.0));
    CHECK(torus_phase_moment(Domain::circle(), {5, 0}, one) == cplx{1.0, 0.0});

    // circle: positive modes see g(+1), negative modes g(-1)
    cplx vp = torus_phase_moment(Domain::circle(), {3, 0}, a);
    cplx vm = torus_phase_moment(Domain::circle(), {-3, 0}, a);
    CHECK(std::abs(vp - g.value(0.0)) < 1e-15);
    CHECK(std::abs(vm - g.value(kPi)) < 1e-15);
    CHECK(vp.real() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(vm.real() == doctest::Approx(-0.8).epsilon(1e-15));

    // torus: the direction of k
    cplx vk = torus_phase_moment(Domain::flat_torus(), {3, 4}, a);
    CHECK(std::abs(vk - g.value(std::atan2(4.0, 3.0))) < 1e-15);

    // off-diagonal x-modes integrate to zero: oracle on the circle,
    // int_0^{2pi} e^{i p x} |e^{i k x}|^2 dx = 0 for p != 0
    {
        const int M = 256;
        cplx s = 0.0;
        for (int i = 0; i < M; ++i) s += std::polar(1.0, kTwoPi * i / M);
        CHECK(std::abs(s) < 1e-12);
    }
    PhaseSpaceObservable off;
    off.terms.push_back({{1, 0}, g});
    off.terms.push_back({{-1, 0}, g});
    for (auto k : {LatticeVector{1, 0}, {0, 2}, {-3, 5}})
        CHECK(torus_phase_moment(Domain::flat_torus(), k, off) == cplx{0.0, 0.0});

    // symbols vanishing on the unit circle of directions have zero moments
    PhaseSpaceObservable vanishing;
    vanishing.terms.push_back({{2, 1}, CircleProfile::cosine(3)});
    for (auto k : {LatticeVector{7, 1}, {2, -9}})
        CHECK(torus_phase_moment(Domain::flat_torus(), k, vanishing) == cplx{0.0, 0.0});

    CHECK_THROWS_AS(torus_phase_moment(Domain::flat_torus(), {0, 0}, a), Error);
    CHECK_THROWS_AS(torus_phase_moment(Domain::rectangle(1, 1), {1, 1}, a), Error);

    CHECK(std::abs(phase_liouville_mean(Domain::circle(), a)) < 1e-15);
    CHECK(std::abs(phase_liouville_mean(Domain::flat_torus(), a)) < 1e-15);
    CHECK(phase_direction_variance(Domain::flat_torus(), a) ==
          doctest::Approx(2 * 0.16).epsilon(1e-14));  // |0.4|^2 at p = +-1
    CHECK(phase_direction_variance(Domain::circle(), a) ==
          doctest::Approx(0.64).epsilon(1e-14));      // |g(1) - g(-1)|^2 / 4
}

TEST_CASE("rectangle position elements match the integral oracle") {
    CHECK(rectangle_position_element(1, 1, 1) == -0.5);
    CHECK(rectangle_position_element(3, 2, 1) == 0.0);
    CHECK(rectangle_position_element(2, 5, 2) == -0.5);
    for (long long m : {1LL, 2LL, 3LL, 5LL})
        for (long long p : {1LL, 2LL, 3LL}) {
            double oracle = rectangle_element_oracle(m, p);
            CHECK(rectangle_position_element(m, 7, p) == doctest::Approx(oracle).epsilon(1e-12));
        }
    CHECK_THROWS_AS(rectangle_position_element(0, 1, 1), Error);
}

TEST_CASE("disk mass in radius") {
    // frozen from a 30-digit quadrature oracle
    CHECK(disk_mass_in_radius(0, 1, 0.5) == doctest::Approx(0.647194706232496).epsilon(1e-9));
    CHECK(std::abs(disk_mass_in_radius(0, 1, 0.5) - trapezoid_mass(0, 1, 0.5)) < 1e-8);

    // normalization: almost the full disk carries almost all the mass
    CHECK(disk_mass_in_radius(0, 3, 0.999) > 0.99);
    CHECK(disk_mass_in_radius(0, 3, 0.999) <= 1.0 + 1e-9);

    // whispering gallery: J_50 is negligible below its turning point
    CHECK(disk_mass_in_radius(50, 1, 0.5) < 1e-6);
    CHECK(disk_mass_in_radius(50, 1, 0.5) >= 0.0);

    CHECK_THROWS_AS(disk_mass_in_radius(0, 1, 0.0), Error);
    CHECK_THROWS_AS(disk_mass_in_radius(0, 1, 1.0), Error);
}

TEST_CASE("eigen data CSV export") {
    EigenData data = enumerate_eigenvalues(Domain::rectangle(1, 1), 8.0);
    std::string csv = eigen_data_csv(data);
    CHECK(csv.rfind("lambda,mode,rank\n", 0) == 0);
    CHECK(csv.find("1;1,0") != std::string::npos);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == data.entries.size() + 1);
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(Domain::rectangle(0.0, 1.0), Error);
    CHECK_THROWS_AS(Domain::disk(-2.0), Error);
    CHECK(Domain::rectangle(2, 3).volume() == 6.0);
    CHECK(Domain::rectangle(2, 3).perimeter() == 10.0);
    CHECK(Domain::disk(2).perimeter() == doctest::Approx(4 * kPi));
    CHECK_FALSE(Domain::flat_torus().has_boundary());
}
