// Times each OpenMP kernel against its serial reference and reports the
// speedup together with the max deviation (expected to be exactly zero).

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "qchaos/kernels.hpp"
#include "qchaos/propagator.hpp"

using namespace qchaos;
using namespace qchaos::kernels;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) fn();
    auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial_ms, double omp_ms, double max_dev) {
    std::printf("%-28s %10.2f ms %10.2f ms %7.2fx %13.3g\n", name.c_str(), serial_ms, omp_ms,
                serial_ms / omp_ms, max_dev);
}

Matrix random_matrix(int n, uint64_t seed) {
    Matrix M(n, n);
    uint64_t s = seed;
    for (Eigen::Index i = 0; i < M.size(); ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        M(i) = cplx(static_cast<double>(s >> 40), static_cast<double>((s >> 20) & 0xFFFFF));
    }
    return M / M.norm();
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %8s %13s\n", "kernel", "serial", "omp", "speedup", "max |diff|");

    const CatMap A = default_cat_map();

    {
        const int N = 1024;
        Matrix a, b;
        double ts = time_ms([&] { a = propagator_matrix_serial(N, A.a(), A.d(), 1); }, 3);
        double tp = time_ms([&] { b = propagator_matrix(N, A.a(), A.d(), 1); }, 3);
        report("propagator_matrix N=1024", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    {
        const int N = 512;
        auto terms = translation_terms(TorusObservable::cosine_x() * TorusObservable::cosine_xi() +
                                       TorusObservable::cosine_x(3));
        Matrix a, b;
        double ts = time_ms([&] { a = weyl_matrix_serial(N, terms); }, 5);
        double tp = time_ms([&] { b = weyl_matrix(N, terms); }, 5);
        report("weyl_matrix N=512", ts, tp, (a - b).cwiseAbs().maxCoeff());

        Matrix W = propagator_matrix(N, A.a(), A.d(), 1);
        Matrix c, d;
        ts = time_ms([&] { c = weyl_apply_left_serial(N, terms, W); }, 5);
        tp = time_ms([&] { d = weyl_apply_left(N, terms, W); }, 5);
        report("weyl_apply_left N=512", ts, tp, (c - d).cwiseAbs().maxCoeff());
    }
    {
        const int N = 384;
        Matrix x = random_matrix(N, 11), y = random_matrix(N, 12);
        Matrix a, b;
        double ts = time_ms([&] { a = gemm_serial(x, y); }, 3);
        double tp = time_ms([&] { b = gemm(x, y); }, 3);
        report("gemm N=384", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    {
        const int N = 384;
        Matrix op = random_matrix(N, 21);
        Matrix basis = random_matrix(N, 22);
        Vector a, b;
        double ts = time_ms([&] { a = matrix_elements_serial(op, basis); }, 3);
        double tp = time_ms([&] { b = matrix_elements(op, basis); }, 3);
        report("matrix_elements N=384", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    {
        const int N = 512;
        auto terms = translation_terms(TorusObservable::cosine_x());
        Matrix basis = random_matrix(N, 31);
        Vector a, b;
        double ts = time_ms([&] { a = weyl_matrix_elements_serial(N, terms, basis); }, 5);
        double tp = time_ms([&] { b = weyl_matrix_elements(N, terms, basis); }, 5);
        report("weyl_matrix_elements N=512", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    {
        const int N = 384;
        Matrix U = propagator_matrix(N, A.a(), A.d(), 1);
        double a = 0, b = 0;
        double ts = time_ms([&] { a = unitarity_defect_serial(U); }, 3);
        double tp = time_ms([&] { b = unitarity_defect(U); }, 3);
        report("unitarity_defect N=384", ts, tp, std::abs(a - b));
    }
    {
        const int N = 256, G = 24;
        Vector u = random_matrix(N, 41).col(0);
        u /= u.norm();
        RealMatrix a, b;
        double ts = time_ms([&] { a = husimi_grid_serial(u, G); }, 3);
        double tp = time_ms([&] { b = husimi_grid(u, G); }, 3);
        report("husimi_grid N=256 G=24", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    return 0;
}
