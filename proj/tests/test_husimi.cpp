#include <doctest.h>

#include "qchaos/husimi.hpp"
#include "qchaos/spectral.hpp"

using namespace qchaos;

TEST_CASE("position state concentrates in x and spreads in xi") {
    const int N = 32, G = 16;
    kernels::Vector e0 = kernels::Vector::Zero(N);
    e0(0) = 1.0;
    kernels::RealMatrix h = husimi(e0, G);

    // x marginal: the cells nearest x = 0 dominate
    Eigen::VectorXd xmass = h.rowwise().sum();
    double near = xmass(0) + xmass(1) + xmass(G - 1);
    CHECK(near / xmass.sum() > 0.8);
    CHECK(xmass(G / 2) / xmass.sum() < 1e-6);

    // xi marginal at fixed x: flat up to image-term corrections
    for (int gx : {0, 3}) {
        double lo = h.row(gx).minCoeff(), hi = h.row(gx).maxCoeff();
        if (hi > 1e-12) CHECK((hi - lo) / hi < 1e-9);
    }
}

TEST_CASE("grid-mean normalization") {
    const int N = 20, G = 12;
    uint64_t s = 5;
    kernels::Vector u(N);
    for (int i = 0; i < N; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        u(i) = cplx(static_cast<double>(s >> 40), static_cast<double>((s >> 20) & 0xFFFFF));
    }
    u /= u.norm();
    kernels::RealMatrix h = husimi(u, G);
    CHECK(h.sum() / (G * G) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.minCoeff() >= 0.0);
}

TEST_CASE("completeness: raw samples sum to one over any orthonormal basis") {
    const int N = 24, G = 8;
    SpectralDecomposition dec = spectrum(propagator(N, default_cat_map()).matrix);
    kernels::RealMatrix total = kernels::RealMatrix::Zero(G, G);
    for (int j = 0; j < N; ++j) total += husimi_raw(dec.vectors.col(j), G);
    CHECK((total.array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("grid precondition") {
    kernels::Vector u = kernels::Vector::Ones(10);
    CHECK_THROWS_AS(husimi(u, 7), Error);
    CHECK_NOTHROW(husimi(u / u.norm(), 8));
}
