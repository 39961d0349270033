#include <doctest.h>

#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "qchaos/qe_stats.hpp"
#include "qchaos/spectral_cache.hpp"

using namespace qchaos;

namespace {

SpectralDecomposition& shared_dec(int N) {
    static std::map<int, SpectralDecomposition> cache;
    auto it = cache.find(N);
    if (it == cache.end())
        it = cache.emplace(N, spectrum(propagator(N, default_cat_map()))).first;
    return it->second;
}

}  // namespace

TEST_CASE("constant observables have zero variance") {
    QEReport r = integrated_qe_catmap(TorusObservable::constant(1.0), shared_dec(40));
    CHECK(r.S <= 1e-28);  // V_j - 1 sits at the rounding floor of u*u
    CHECK(r.L_a == 1.0);
    for (const cplx& v : r.V) CHECK(std::abs(v - 1.0) < 1e-12);
    CHECK(r.exceptional_fraction(0.1) == 0.0);
}

TEST_CASE("cat map statistic respects the Hilbert-Schmidt bound") {
    TorusObservable a = TorusObservable::cosine_x();
    QEReport r = integrated_qe_catmap(a, shared_dec(101));
    CHECK(r.S > 0.0);
    CHECK(r.S <= a.l2_norm_sq() + 1e-12);  // 1/2
    CHECK(r.recompute_S() == doctest::Approx(r.S).epsilon(1e-12));
}

TEST_CASE("shift reduction: S(a) = S(a - L_a)") {
    TorusObservable a = TorusObservable::cosine_x() + TorusObservable::constant(0.7);
    QEReport r1 = integrated_qe_catmap(a, shared_dec(64));
    QEReport r2 = integrated_qe_catmap(a.minus_mean(), shared_dec(64));
    CHECK(std::abs(r1.S - r2.S) < 1e-12);
    CHECK(r1.L_a == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(r2.L_a == 0.0);
}

TEST_CASE("chebyshev inequality holds for every report") {
    TorusObservable a = TorusObservable::cosine_x() + TorusObservable::cosine_xi(2).scaled(0.5);
    QEReport r = integrated_qe_catmap(a, shared_dec(101));
    for (double eps : {0.01, 0.05, 0.1, 0.5, 2.0}) {
        double count = static_cast<double>(r.exceptional_count(eps));
        CHECK(count * r.normalization * eps * eps <= r.S + 1e-12);
    }
    CHECK(chebyshev_fraction(r, 1e9) == 0.0);
    CHECK_THROWS_AS(chebyshev_fraction(r, 0.0), Error);
}

TEST_CASE("density-one extraction is the complement of the exceptional set") {
    TorusObservable a = TorusObservable::cosine_x();
    QEReport r = integrated_qe_catmap(a, shared_dec(64));
    for (double eps : {0.05, 0.2}) {
        auto good = density_one_extract(r, eps);
        CHECK(static_cast<long long>(good.size()) ==
              static_cast<long long>(r.V.size()) - r.exceptional_count(eps));
        for (size_t i = 1; i < good.size(); ++i) CHECK(good[i - 1] < good[i]);
        for (int j : good) CHECK(std::abs(r.V[static_cast<size_t>(j)] - r.L_a) <= eps);
    }
}

TEST_CASE("hs identity") {
    // single harmonic: rhs is exactly 1
    TorusObservable e10 = TorusObservable::harmonic({1, 0}, 1.0);
    HSIdentity h = hs_identity_check(e10, shared_dec(16));
    CHECK(h.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.lhs <= h.rhs + 1e-12);
    CHECK(h.slack >= -1e-12);

    HSIdentity z = hs_identity_check(TorusObservable{}, shared_dec(16));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);

    uint64_t s = 12345;
    auto uniform = [&s]() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    };
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<TorusObservable::Mode> modes;
        for (long long m = -3; m <= 3; ++m)
            for (long long n = -3; n <= 3; ++n) {
                if (m < 0 || (m == 0 && n < 0)) continue;
                cplx c(2 * uniform() - 1, m == 0 && n == 0 ? 0.0 : 2 * uniform() - 1);
                modes.push_back({{m, n}, c});
                if (!(m == 0 && n == 0)) modes.push_back({{-m, -n}, std::conj(c)});
            }
        TorusObservable a = TorusObservable::from_modes(std::move(modes));
        HSIdentity hr = hs_identity_check(a, shared_dec(64));
        CHECK(hr.lhs <= hr.rhs + 1e-12);
        CHECK(hr.l2_gap < 1e-10);
    }
}

TEST_CASE("proof chain at moderate size") {
    CatMap A = default_cat_map();
    TorusObservable a = TorusObservable::cosine_x();

    ProofChainRecord rec = proof_chain_check(A, a, 64, 2, shared_dec(64));
    CHECK(rec.pass_i);
    CHECK(rec.pass_ii);
    CHECK(rec.pass_iii);
    CHECK(rec.pass_iv);
    CHECK(rec.orbits_disjoint);
    CHECK(rec.l2_avg == doctest::Approx(a.l2_norm_sq() / 2.0).epsilon(1e-15));
    CHECK(rec.bound_iv == doctest::Approx(0.25).epsilon(1e-15));

    // T = 1 reduces the chain to the plain Hilbert-Schmidt bound
    ProofChainRecord t1 = proof_chain_check(A, a, 64, 1, shared_dec(64));
    CHECK(t1.defect_i == 0.0);
    CHECK(t1.l2_avg == doctest::Approx(a.l2_norm_sq()).epsilon(1e-15));
    CHECK(t1.all_pass());

    // zero observable: every quantity vanishes
    ProofChainRecord z = proof_chain_check(A, TorusObservable{}, 64, 3, shared_dec(64));
    CHECK(z.S_a == 0.0);
    CHECK(z.l2_avg == 0.0);
    CHECK(z.all_pass());

    // mean-zero precondition
    CHECK_THROWS_AS(proof_chain_check(A, TorusObservable::constant(1.0), 64, 2, shared_dec(64)),
                    Error);
    // aliasing guard: <cos 2 pi x>_4 reaches band 26 >= 16
    CHECK_THROWS_AS(proof_chain_check(A, a, 32, 4, shared_dec(32)), AliasingError);
}

TEST_CASE("laplace window statistics on the rectangle") {
    Domain rect = Domain::rectangle(1, 1);
    LaplaceObservable a{PositionCosine{1}};
    // oracle: resonant modes (1, n) with pi sqrt(1 + n^2) in [R, 2R], each |V| = 1/2
    for (double R : {50.0, 100.0}) {
        long long resonant = 0;
        for (long long n = 1; n < 1000; ++n) {
            double lam = kPi * std::hypot(1.0, static_cast<double>(n));
            if (lam >= R && lam <= 2 * R) ++resonant;
        }
        QEReport r = integrated_qe_laplace(rect, a, R);
        CHECK(r.L_a == 0.0);
        CHECK(r.S == doctest::Approx(0.25 * static_cast<double>(resonant) / (R * R))
                          .epsilon(1e-12));
    }
}

TEST_CASE("laplace window decay and non-decay") {
    // rectangle: physical-space statistic decays like 1/R
    Domain rect = Domain::rectangle(1, 1);
    LaplaceObservable cosine{PositionCosine{1}};
    double s50 = integrated_qe_laplace(rect, cosine, 50).S;
    double s100 = integrated_qe_laplace(rect, cosine, 100).S;
    double s200 = integrated_qe_laplace(rect, cosine, 200).S;
    CHECK(s100 < s50);
    CHECK(s200 < s100);
    CHECK(s200 == doctest::Approx(s50 / 4.0).epsilon(0.1));

    // flat torus with a direction observable: no decay, S(R) >= sigma^2 / 2
    Domain torus = Domain::flat_torus();
    PhaseSpaceObservable g = PhaseSpaceObservable::diagonal(CircleProfile::cosine(2));
    double sigma2 = phase_direction_variance(torus, g);
    REQUIRE(sigma2 > 0.0);
    for (double R : {50.0, 100.0}) {
        QEReport r = integrated_qe_laplace(torus, LaplaceObservable{g}, R);
        CHECK(r.S >= sigma2 / 2.0);

        // direction-equidistribution oracle: direct lattice sum
        double direct = 0.0;
        long long kmax = static_cast<long long>(2 * R);
        for (long long k1 = -kmax; k1 <= kmax; ++k1)
            for (long long k2 = -kmax; k2 <= kmax; ++k2) {
                double lam = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
                if (lam < R || lam > 2 * R) continue;
                double theta = std::atan2(static_cast<double>(k2), static_cast<double>(k1));
                direct += std::norm(std::cos(2 * theta));
            }
        CHECK(r.S == doctest::Approx(direct / (R * R)).epsilon(1e-10));
    }
}

TEST_CASE("unsupported observable-domain pairings are rejected") {
    LaplaceObservable cosine{PositionCosine{1}};
    CHECK_THROWS_AS(integrated_qe_laplace(Domain::flat_torus(), cosine, 50), Error);
    PhaseSpaceObservable g = PhaseSpaceObservable::diagonal(CircleProfile::cosine(1));
    CHECK_THROWS_AS(integrated_qe_laplace(Domain::rectangle(1, 1), LaplaceObservable{g}, 50),
                    Error);
    CHECK_THROWS_AS(integrated_qe_laplace(Domain::circle(), cosine, 5.0), Error);  // R < 10
}

TEST_CASE("decay experiment bookkeeping") {
    CatMap A = default_cat_map();
    DecaySeries zero = decay_experiment(A, TorusObservable::constant(2.0), {16, 24});
    for (const DecayPoint& p : zero.points) CHECK(p.S <= 1e-28);

    CHECK_THROWS_AS(decay_experiment(A, TorusObservable::cosine_x(), {32, 32}), Error);

    // constant shifts do not move the series
    DecaySeries s1 = decay_experiment(A, TorusObservable::cosine_x(), {16, 24});
    DecaySeries s2 = decay_experiment(
        A, TorusObservable::cosine_x() + TorusObservable::constant(7.0), {16, 24});
    for (size_t i = 0; i < s1.points.size(); ++i) {
        CHECK(s1.points[i].S == doctest::Approx(s2.points[i].S).epsilon(1e-10));
        CHECK(s1.points[i].fraction == s2.points[i].fraction);
    }
}

TEST_CASE("density-one sets intersect across an observable list") {
    // at fixed size the common good set for several observables is a finite
    // intersection of the per-observable extractions
    const SpectralDecomposition& dec = shared_dec(101);
    std::vector<TorusObservable> family = {
        TorusObservable::cosine_x(),
        TorusObservable::cosine_xi(),
        TorusObservable::cosine_x(2) + TorusObservable::cosine_xi(3).scaled(0.5)};
    std::set<int> common;
    for (int j = 0; j < dec.N; ++j) common.insert(j);
    const double eps = 0.25;
    for (const TorusObservable& a : family) {
        QEReport r = integrated_qe_catmap(a, dec);
        auto good = density_one_extract(r, eps);
        std::set<int> keep(good.begin(), good.end());
        std::set<int> next;
        for (int j : common)
            if (keep.count(j)) next.insert(j);
        common = std::move(next);
    }
    // the intersection stays a large fraction of the basis
    CHECK(common.size() * 2 > static_cast<size_t>(dec.N));
    for (int j : common)
        for (const TorusObservable& a : family) {
            QEReport r = integrated_qe_catmap(a, dec);
            CHECK(std::abs(r.V[static_cast<size_t>(j)] - r.L_a) <= eps);
        }
}

TEST_CASE("report JSON schema") {
    QEReport r = integrated_qe_catmap(TorusObservable::cosine_x(), shared_dec(16));
    nlohmann::json j = r.to_json(0.1);
    CHECK(j.at("model") == "catmap");
    CHECK(j.at("N_or_R") == 16.0);
    CHECK(j.contains("L_a"));
    CHECK(j.contains("S"));
    CHECK(j.at("eps") == 0.1);
    CHECK(j.contains("exceptional_fraction"));
    CHECK(j.at("V").size() == 16);
    CHECK(j.at("V")[0].contains("re"));
}
