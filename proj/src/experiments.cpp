#include "qchaos/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "qchaos/husimi.hpp"

namespace qchaos {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::set<std::string> kKinds = {"egorov",    "trace",      "qe-catmap",
                                      "qe-laplace", "weyl-count", "disk-mass",
                                      "proof-chain", "husimi-export", "scar-scan"};

// ---------------------------------------------------------------------------
// schema checking

class Checker {
public:
    explicit Checker(const nlohmann::json& j) : j_(j) {}

    void allow_only(std::initializer_list<const char*> keys) {
        std::set<std::string> allowed{"experiment", "out", "cache", "seed"};
        for (const char* k : keys) allowed.insert(k);
        for (const auto& [key, _] : j_.items())
            if (!allowed.count(key)) err("unknown key \"" + key + "\"");
    }

    bool has(const char* key) const { return j_.contains(key); }

    long long integer(const char* key, long long lo, long long hi) {
        if (!j_.contains(key) || !j_.at(key).is_number_integer()) {
            err(std::string(key) + " must be an integer");
            return lo;
        }
        auto v = j_.at(key).get<long long>();
        if (v < lo || v > hi) err(std::string(key) + " out of range");
        return v;
    }

    long long integer_or(const char* key, long long fallback, long long lo, long long hi) {
        return j_.contains(key) ? integer(key, lo, hi) : fallback;
    }

    double number(const char* key, double lo, double hi) {
        if (!j_.contains(key) || !j_.at(key).is_number()) {
            err(std::string(key) + " must be a number");
            return lo;
        }
        double v = j_.at(key).get<double>();
        if (!(v >= lo) || !(v <= hi)) err(std::string(key) + " out of range");
        return v;
    }

    double number_or(const char* key, double fallback, double lo, double hi) {
        return j_.contains(key) ? number(key, lo, hi) : fallback;
    }

    std::vector<long long> int_array(const char* key, long long lo, long long hi,
                                     bool increasing = false) {
        std::vector<long long> out;
        if (!j_.contains(key) || !j_.at(key).is_array() || j_.at(key).empty()) {
            err(std::string(key) + " must be a non-empty array");
            return out;
        }
        for (const auto& e : j_.at(key)) {
            if (!e.is_number_integer()) {
                err(std::string(key) + " must hold integers");
                return out;
            }
            out.push_back(e.get<long long>());
            if (out.back() < lo || out.back() > hi) err(std::string(key) + " entry out of range");
        }
        if (increasing)
            for (size_t i = 1; i < out.size(); ++i)
                if (out[i] <= out[i - 1]) err(std::string(key) + " must be strictly increasing");
        return out;
    }

    std::vector<double> number_array(const char* key, double lo, double hi) {
        std::vector<double> out;
        if (!j_.contains(key) || !j_.at(key).is_array() || j_.at(key).empty()) {
            err(std::string(key) + " must be a non-empty array");
            return out;
        }
        for (const auto& e : j_.at(key)) {
            if (!e.is_number()) {
                err(std::string(key) + " must hold numbers");
                return out;
            }
            out.push_back(e.get<double>());
            if (!(out.back() >= lo) || !(out.back() <= hi))
                err(std::string(key) + " entry out of range");
        }
        return out;
    }

    void err(const std::string& msg) { errors.push_back(msg); }
    std::vector<std::string> errors;

private:
    const nlohmann::json& j_;
};

std::optional<CatMap> check_map(const nlohmann::json& j, Checker& c) {
    if (!j.contains("map") || !j.at("map").is_array() || j.at("map").size() != 4 ||
        !std::all_of(j.at("map").begin(), j.at("map").end(),
                     [](const auto& e) { return e.is_number_integer(); })) {
        c.err("map must be an array of four integers [a, b, c, d]");
        return std::nullopt;
    }
    auto e = j.at("map").get<std::vector<long long>>();
    try {
        CatMap A(e[0], e[1], e[2], e[3]);
        if (!A.quantizable()) {
            c.err("map not quantizable: requires |b| = 1 with a, d even (and |a + d| > 2)");
            return std::nullopt;
        }
        return A;
    } catch (const Error& ex) {
        c.err(std::string("map invalid: ") + ex.what());
        return std::nullopt;
    }
}

std::optional<Domain> check_domain(const nlohmann::json& j, Checker& c) {
    if (!j.contains("domain") || !j.at("domain").is_object()) {
        c.err("domain must be an object");
        return std::nullopt;
    }
    const auto& d = j.at("domain");
    std::string kind = d.value("kind", "");
    std::set<std::string> allowed{"kind"};
    Domain out = Domain::circle();
    if (kind == "circle") {
        out = Domain::circle();
    } else if (kind == "flat-torus") {
        out = Domain::flat_torus();
    } else if (kind == "rectangle") {
        allowed.insert({"L1", "L2"});
        double l1 = d.value("L1", 1.0), l2 = d.value("L2", 1.0);
        if (!(l1 > 0.0) || !(l2 > 0.0)) {
            c.err("rectangle sides must be positive");
            return std::nullopt;
        }
        out = Domain::rectangle(l1, l2);
    } else if (kind == "disk") {
        allowed.insert("radius");
        double r = d.value("radius", 1.0);
        if (!(r > 0.0)) {
            c.err("disk radius must be positive");
            return std::nullopt;
        }
        out = Domain::disk(r);
    } else {
        c.err("domain.kind must be circle | flat-torus | rectangle | disk");
        return std::nullopt;
    }
    for (const auto& [key, _] : d.items())
        if (!allowed.count(key)) c.err("unknown domain key \"" + key + "\"");
    return out;
}

// Torus observable: inline {"modes": [...]} or a file path string.
bool check_observable_spec(const nlohmann::json& j, Checker& c) {
    if (!j.contains("observable")) {
        c.err("observable is required (inline modes object or file path)");
        return false;
    }
    const auto& o = j.at("observable");
    if (o.is_string()) return true;  // existence checked at run time
    if (!o.is_object()) {
        c.err("observable must be an object or a path string");
        return false;
    }
    try {
        TorusObservable::from_json(o);
    } catch (const Error& ex) {
        c.err(ex.what());
        return false;
    }
    return true;
}

std::optional<LaplaceObservable> check_laplace_observable(const nlohmann::json& j, Checker& c,
                                                          const Domain* domain) {
    if (!j.contains("observable") || !j.at("observable").is_object()) {
        c.err("observable must be an object with a \"family\"");
        return std::nullopt;
    }
    const auto& o = j.at("observable");
    std::string family = o.value("family", "");
    if (family == "phase") {
        for (const auto& [key, _] : o.items())
            if (key != "family" && key != "harmonics") c.err("unknown observable key \"" + key + "\"");
        if (!o.contains("harmonics") || !o.at("harmonics").is_array() || o.at("harmonics").empty()) {
            c.err("phase observable needs a non-empty harmonics array");
            return std::nullopt;
        }
        CircleProfile g;
        for (const auto& h : o.at("harmonics")) {
            if (!h.is_object() || !h.contains("p") || !h.at("p").is_number_integer()) {
                c.err("each harmonic needs integer p");
                return std::nullopt;
            }
            for (const auto& [key, _] : h.items())
                if (key != "p" && key != "re" && key != "im")
                    c.err("unknown harmonic key \"" + key + "\"");
            g.harmonics.push_back({h.at("p").get<long long>(),
                                   cplx(h.value("re", 0.0), h.value("im", 0.0))});
        }
        if (domain && domain->kind != DomainKind::Circle && domain->kind != DomainKind::FlatTorus2D)
            c.err("phase observables are supported on circle and flat-torus domains only");
        return LaplaceObservable{PhaseSpaceObservable::diagonal(std::move(g))};
    }
    if (family == "position-cosine") {
        for (const auto& [key, _] : o.items())
            if (key != "family" && key != "p") c.err("unknown observable key \"" + key + "\"");
        long long p = o.value("p", 1LL);
        if (p < 1) c.err("position-cosine p must be >= 1");
        if (domain && domain->kind != DomainKind::Rectangle)
            c.err("position-cosine observables are supported on the rectangle only");
        return LaplaceObservable{PositionCosine{p}};
    }
    c.err("observable.family must be phase | position-cosine");
    return std::nullopt;
}

void check_common(const nlohmann::json& j, Checker& c) {
    if (j.contains("out") && !j.at("out").is_string()) c.err("out must be a string");
    if (j.contains("cache") && !j.at("cache").is_string()) c.err("cache must be a string");
    if (j.contains("seed") && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
        c.err("seed must be a nonnegative integer");
}

ValidationResult validate_impl(const nlohmann::json& j) {
    Checker c(j);
    if (!j.is_object()) {
        c.err("config must be a JSON object");
        return {c.errors};
    }
    std::string kind = j.value("experiment", "");
    if (!kKinds.count(kind)) {
        c.err("experiment must be one of egorov, trace, qe-catmap, qe-laplace, weyl-count, "
              "disk-mass, proof-chain, husimi-export, scar-scan");
        return {c.errors};
    }
    check_common(j, c);

    if (kind == "egorov") {
        c.allow_only({"map", "N", "t", "observable", "mode_band"});
        check_map(j, c);
        c.int_array("N", 1, 1 << 20);
        c.int_array("t", 1, 64);
        if (j.contains("observable") == j.contains("mode_band"))
            c.err("exactly one of observable, mode_band is required");
        else if (j.contains("observable"))
            check_observable_spec(j, c);
        else
            c.integer("mode_band", 1, 64);
    } else if (kind == "trace") {
        c.allow_only({"N", "band", "samples", "rng_seed"});
        c.int_array("N", 1, 1 << 20);
        c.integer_or("band", 3, 0, 64);
        c.integer_or("samples", 10, 1, 10000);
        c.integer_or("rng_seed", 1, 0, (1LL << 62));
    } else if (kind == "qe-catmap") {
        c.allow_only({"map", "N", "observable", "eps"});
        check_map(j, c);
        c.int_array("N", 8, 1 << 20, /*increasing=*/true);
        check_observable_spec(j, c);
        c.number_or("eps", 0.1, 1e-12, 1e6);
    } else if (kind == "qe-laplace") {
        c.allow_only({"domain", "R", "observable", "eps"});
        auto dom = check_domain(j, c);
        c.number_array("R", 10.0, 1e7);
        check_laplace_observable(j, c, dom ? &*dom : nullptr);
        c.number_or("eps", 0.1, 1e-12, 1e6);
    } else if (kind == "weyl-count") {
        c.allow_only({"domain", "R"});
        check_domain(j, c);
        c.number_array("R", 10.0, 1e7);
    } else if (kind == "disk-mass") {
        c.allow_only({"modes", "r0"});
        if (!j.contains("modes") || !j.at("modes").is_array() || j.at("modes").empty()) {
            c.err("modes must be a non-empty array of [m, k] pairs");
        } else {
            for (const auto& e : j.at("modes")) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                    !e[1].is_number_integer() || e[0].get<long long>() < 0 ||
                    e[1].get<long long>() < 1)
                    c.err("modes entries must be [m >= 0, k >= 1]");
            }
        }
        for (double r : c.number_array("r0", 0.0, 1.0))
            if (!(r > 0.0) || !(r < 1.0)) c.err("r0 entries must lie strictly inside (0, 1)");
    } else if (kind == "proof-chain") {
        c.allow_only({"map", "N", "T", "observable"});
        check_map(j, c);
        c.integer("N", 8, 1 << 20);
        c.integer("T", 1, 64);
        check_observable_spec(j, c);
    } else if (kind == "husimi-export") {
        c.allow_only({"map", "N", "grid", "indices", "index_range"});
        check_map(j, c);
        c.integer("N", 8, 1 << 20);
        c.integer_or("grid", 64, 8, 4096);
        if (j.contains("indices") == j.contains("index_range"))
            c.err("exactly one of indices, index_range is required");
        else if (j.contains("indices"))
            c.int_array("indices", 0, 1 << 20);
        else {
            auto r = c.int_array("index_range", 0, 1 << 20);
            if (r.size() != 2 || r[0] > r[1]) c.err("index_range must be [lo, hi] with lo <= hi");
        }
    } else if (kind == "scar-scan") {
        c.allow_only({"map", "N", "grid", "t_max", "radius", "threshold"});
        check_map(j, c);
        c.int_array("N", 8, 1 << 20);
        c.integer_or("grid", 32, 8, 4096);
        c.integer_or("t_max", 2, 1, 12);
        c.number_or("radius", 0.1, 1e-6, 0.5);
        c.number_or("threshold", 3.0, 1.0, 1e6);
    }
    return {c.errors};
}

// ---------------------------------------------------------------------------
// artifact writing

class Writer {
public:
    Writer(std::filesystem::path dir, RunManifest& manifest)
        : dir_(std::move(dir)), manifest_(manifest) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write artifact " + (dir_ / name).string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write on artifact " + (dir_ / name).string());
        manifest_.artifacts.push_back(
            {name, content.size(), fnv1a_hex(content.data(), content.size())});
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    RunManifest& manifest_;
};

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Random real observable with band limit K (conjugate-symmetric coefficients).
TorusObservable random_real_observable(long long K, uint64_t& state) {
    std::vector<TorusObservable::Mode> modes;
    modes.push_back({{0, 0}, cplx(2.0 * uniform01(state) - 1.0, 0.0)});
    for (long long m = -K; m <= K; ++m)
        for (long long n = -K; n <= K; ++n) {
            if (m < 0 || (m == 0 && n <= 0)) continue;  // half lattice
            cplx c(2.0 * uniform01(state) - 1.0, 2.0 * uniform01(state) - 1.0);
            modes.push_back({{m, n}, c});
            modes.push_back({{-m, -n}, std::conj(c)});
        }
    return TorusObservable::from_modes(std::move(modes));
}

TorusObservable resolve_observable(const nlohmann::json& spec,
                                   const std::filesystem::path& config_path) {
    if (spec.is_string()) {
        std::filesystem::path p = spec.get<std::string>();
        if (p.is_relative() && !config_path.empty()) p = config_path.parent_path() / p;
        std::ifstream in(p);
        if (!in) throw ConfigError("observable file not found: " + p.string());
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) throw ConfigError("observable file is not valid JSON: " + p.string());
        return TorusObservable::from_json(j);
    }
    return TorusObservable::from_json(spec);
}

Domain resolve_domain(const nlohmann::json& j) {
    Checker c(j);
    auto d = check_domain(j, c);
    if (!d) throw ConfigError("invalid domain");
    return *d;
}

LaplaceObservable resolve_laplace_observable(const nlohmann::json& j, const Domain& d) {
    Checker c(j);
    auto o = check_laplace_observable(j, c, &d);
    if (!o || !c.errors.empty()) throw ConfigError("invalid laplace observable");
    return *o;
}

CatMap resolve_map(const nlohmann::json& j) {
    Checker c(j);
    auto m = check_map(j, c);
    if (!m) throw ConfigError("invalid map: " + (c.errors.empty() ? "?" : c.errors.front()));
    return *m;
}

// ---------------------------------------------------------------------------
// experiment runners

void run_egorov(const nlohmann::json& j, const RunOptions& opts, Writer& w, SpectralCache& cache) {
    CatMap A = resolve_map(j);
    auto sizes = j.at("N").get<std::vector<int>>();
    auto times = j.at("t").get<std::vector<long long>>();

    std::string unitarity = "N,unitarity_defect\n";
    std::string rows;
    bool mode_scan = j.contains("mode_band");
    rows = mode_scan ? "N,t,m,n,defect\n" : "N,t,defect\n";
    for (int N : sizes) {
        Propagator U = propagator(N, A);
        unitarity += std::to_string(N) + "," + fmt(kernels::unitarity_defect(U.matrix)) + "\n";
        if (mode_scan) {
            long long K = j.at("mode_band").get<long long>();
            for (const EgorovDefect& d : egorov_mode_scan(N, A, K, times)) {
                if (d.aliased)
                    throw AliasingError("egorov: mode (" + std::to_string(d.v.m) + "," +
                                        std::to_string(d.v.n) + ") at t = " + std::to_string(d.t) +
                                        " reaches the band limit N/2");
                rows += std::to_string(N) + "," + std::to_string(d.t) + "," +
                        std::to_string(d.v.m) + "," + std::to_string(d.v.n) + "," +
                        fmt(d.defect) + "\n";
            }
        } else {
            TorusObservable a = resolve_observable(j.at("observable"), opts.config_path);
            for (long long t : times)
                rows += std::to_string(N) + "," + std::to_string(t) + "," +
                        fmt(egorov_defect(N, A, a, t)) + "\n";
        }
    }
    w.write("unitarity.csv", unitarity);
    w.write("egorov.csv", rows);
    (void)cache;
}

void run_trace(const nlohmann::json& j, Writer& w) {
    auto sizes = j.at("N").get<std::vector<int>>();
    long long band = j.value("band", 3LL);
    long long samples = j.value("samples", 10LL);
    uint64_t state = j.value("rng_seed", 1ULL) * 0x9E3779B97F4A7C15ULL + 1;

    std::string rows = "N,sample,adjoint_defect,trace_defect,frobenius_vs_l2\n";
    for (int N : sizes) {
        for (long long s = 0; s < samples; ++s) {
            TorusObservable a = random_real_observable(band, state);
            WeylOperator op = quantize(N, a);
            WeylOperator conj_op = quantize(N, a.conjugated());
            double adjoint_defect =
                (conj_op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
            double trace_defect =
                std::abs(op.matrix.trace() - cplx(N, 0) * a.mean());
            double frob = std::abs(op.matrix.squaredNorm() / N - a.l2_norm_sq());
            rows += std::to_string(N) + "," + std::to_string(s) + "," + fmt(adjoint_defect) + "," +
                    fmt(trace_defect) + "," + fmt(frob) + "\n";
        }
    }
    w.write("trace.csv", rows);
}

void run_qe_catmap(const nlohmann::json& j, const RunOptions& opts, Writer& w,
                   SpectralCache& cache, uint64_t seed) {
    CatMap A = resolve_map(j);
    TorusObservable a = resolve_observable(j.at("observable"), opts.config_path);
    double eps = j.value("eps", 0.1);
    std::string decay = "size,S,frac\n";
    for (int N : j.at("N").get<std::vector<int>>()) {
        QEReport r = integrated_qe_catmap(A, a, N, &cache, seed);
        w.write("qe_catmap_N" + std::to_string(N) + ".json", r.to_json(eps).dump(2) + "\n");
        decay += std::to_string(N) + "," + fmt(r.S) + "," + fmt(r.exceptional_fraction(eps)) + "\n";
    }
    w.write("decay.csv", decay);
}

void run_qe_laplace(const nlohmann::json& j, Writer& w) {
    Domain d = resolve_domain(j);
    LaplaceObservable a = resolve_laplace_observable(j, d);
    double eps = j.value("eps", 0.1);
    std::string decay = "size,S,frac\n";
    for (double R : j.at("R").get<std::vector<double>>()) {
        QEReport r = integrated_qe_laplace(d, a, R);
        char name[64];
        std::snprintf(name, sizeof name, "qe_laplace_R%g.json", R);
        w.write(name, r.to_json(eps).dump(2) + "\n");
        decay += fmt(R) + "," + fmt(r.S) + "," + fmt(r.exceptional_fraction(eps)) + "\n";
    }
    w.write("decay.csv", decay);
}

void run_weyl_count(const nlohmann::json& j, Writer& w) {
    Domain d = resolve_domain(j);
    std::string rows = "R,count,leading,two_term,two_term_abs_error,rel_error_leading\n";
    double r_max = 0.0;
    for (double R : j.at("R").get<std::vector<double>>()) {
        WeylComparison c = weyl_count_compare(d, R);
        rows += fmt(R) + "," + std::to_string(c.count) + "," + fmt(c.leading) + "," +
                fmt(c.two_term) + "," + fmt(std::abs(c.count - c.two_term)) + "," +
                fmt(c.rel_error_leading) + "\n";
        r_max = std::max(r_max, R);
    }
    w.write("weyl_count.csv", rows);
    w.write("eigen_data.csv", eigen_data_csv(enumerate_eigenvalues(d, r_max)));
}

void run_disk_mass(const nlohmann::json& j, Writer& w) {
    std::string rows = "m,k,r0,mass\n";
    for (const auto& e : j.at("modes")) {
        int m = e[0].get<int>();
        int k = e[1].get<int>();
        for (double r0 : j.at("r0").get<std::vector<double>>())
            rows += std::to_string(m) + "," + std::to_string(k) + "," + fmt(r0) + "," +
                    fmt(disk_mass_in_radius(m, k, r0)) + "\n";
    }
    w.write("disk_mass.csv", rows);
}

void run_proof_chain(const nlohmann::json& j, const RunOptions& opts, Writer& w,
                     SpectralCache& cache, uint64_t seed) {
    CatMap A = resolve_map(j);
    TorusObservable a = resolve_observable(j.at("observable"), opts.config_path);
    int N = j.at("N").get<int>();
    long long T = j.at("T").get<long long>();
    ProofChainRecord rec = proof_chain_check(A, a, N, T, &cache, seed);
    nlohmann::json out{{"N", N},
                       {"T", T},
                       {"map", {A.a(), A.b(), A.c(), A.d()}},
                       {"defect_i", rec.defect_i},
                       {"defect_ii", rec.defect_ii},
                       {"S_a", rec.S_a},
                       {"S_avg", rec.S_avg},
                       {"l2_avg", rec.l2_avg},
                       {"C_a", rec.C_a},
                       {"bound_iv", rec.bound_iv},
                       {"multiplicity", rec.multiplicity},
                       {"orbits_disjoint", rec.orbits_disjoint},
                       {"pass_i", rec.pass_i},
                       {"pass_ii", rec.pass_ii},
                       {"pass_iii", rec.pass_iii},
                       {"pass_iv", rec.pass_iv}};
    w.write("proof_chain.json", out.dump(2) + "\n");
}

std::string husimi_csv(const kernels::RealMatrix& h) {
    std::string out;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index jj = 0; jj < h.cols(); ++jj) {
            out += fmt(h(i, jj));
            out += jj + 1 < h.cols() ? ',' : '\n';
        }
    }
    return out;
}

void run_husimi_export(const nlohmann::json& j, Writer& w, SpectralCache& cache, uint64_t seed) {
    CatMap A = resolve_map(j);
    int N = j.at("N").get<int>();
    int G = j.value("grid", 64);
    SpectralDecomposition dec = cache.get(A, N);
    apply_cluster_rotations(dec, seed);

    std::vector<long long> indices;
    if (j.contains("indices")) {
        indices = j.at("indices").get<std::vector<long long>>();
    } else {
        auto r = j.at("index_range").get<std::vector<long long>>();
        for (long long i = r[0]; i <= r[1]; ++i) indices.push_back(i);
    }
    std::string phases = "j,theta\n";
    for (int jj = 0; jj < dec.N; ++jj)
        phases += std::to_string(jj) + "," + fmt(dec.phases(jj)) + "\n";
    w.write("eigenphases.csv", phases);
    for (long long idx : indices) {
        if (idx < 0 || idx >= dec.N) throw ConfigError("husimi index out of range");
        w.write("husimi_N" + std::to_string(N) + "_j" + std::to_string(idx) + ".csv",
                husimi_csv(husimi(dec.vectors.col(idx), G)));
    }
}

void run_scar_scan(const nlohmann::json& j, Writer& w, SpectralCache& cache, uint64_t seed) {
    CatMap A = resolve_map(j);
    int G = j.value("grid", 32);
    long long t_max = j.value("t_max", 2LL);
    double radius = j.value("radius", 0.1);
    double threshold = j.value("threshold", 3.0);

    std::string rows = "N,j,theta,mass_ratio,flagged\n";
    for (int N : j.at("N").get<std::vector<int>>()) {
        SpectralDecomposition dec = cache.get(A, N);
        apply_cluster_rotations(dec, seed);

        // grid cells within `radius` (torus metric) of any low-period point
        std::vector<std::pair<double, double>> points;
        for (long long t = 1; t <= t_max; ++t)
            for (const TorusPoint& p : fixed_points(A, t))
                points.emplace_back(p.x.value(), p.xi.value());
        std::vector<int> mask;
        for (int cell = 0; cell < G * G; ++cell) {
            double x = static_cast<double>(cell / G) / G;
            double xi = static_cast<double>(cell % G) / G;
            for (const auto& [px, pxi] : points) {
                double dx = std::min(std::abs(x - px), 1.0 - std::abs(x - px));
                double dxi = std::min(std::abs(xi - pxi), 1.0 - std::abs(xi - pxi));
                if (dx * dx + dxi * dxi <= radius * radius) {
                    mask.push_back(cell);
                    break;
                }
            }
        }
        if (mask.empty()) throw ConfigError("scar-scan: radius too small, no grid cells selected");
        for (int jj = 0; jj < dec.N; ++jj) {
            kernels::RealMatrix h = husimi(dec.vectors.col(jj), G);
            double mass = 0.0;
            for (int cell : mask) mass += h(cell / G, cell % G);
            double ratio = mass / static_cast<double>(mask.size());  // uniform mean is 1
            rows += std::to_string(N) + "," + std::to_string(jj) + "," + fmt(dec.phases(jj)) +
                    "," + fmt(ratio) + "," + (ratio > threshold ? "1" : "0") + "\n";
        }
    }
    w.write("scar_scan.csv", rows);
}

}  // namespace

ValidationResult validate_config(const nlohmann::json& config) { return validate_impl(config); }

nlohmann::json RunManifest::to_json() const {
    nlohmann::json arts = nlohmann::json::array();
    for (const auto& a : artifacts)
        arts.push_back({{"name", a.name}, {"bytes", a.bytes}, {"checksum", a.checksum}});
    return nlohmann::json{{"config_hash", config_hash},
                          {"version", version},
                          {"artifacts", arts},
                          {"cache_events", cache_events},
                          {"wall_seconds", wall_seconds}};
}

RunManifest run_experiment(const nlohmann::json& config, const RunOptions& opts) {
    ValidationResult v = validate_config(config);
    if (!v.ok()) {
        std::string msg = "invalid config:";
        for (const auto& e : v.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    auto t0 = std::chrono::steady_clock::now();

    std::filesystem::path out_dir = opts.out_dir;
    if (out_dir.empty()) out_dir = config.value("out", "qchaos-out");
    std::filesystem::path cache_dir = opts.cache_dir;
    if (cache_dir.empty() && config.contains("cache"))
        cache_dir = config.at("cache").get<std::string>();
    if (cache_dir.empty())
        if (const char* env = std::getenv("QCHAOS_CACHE")) cache_dir = env;
    if (cache_dir.empty()) cache_dir = out_dir / "cache";

    uint64_t seed = opts.seed.value_or(config.value("seed", 0ULL));

    RunManifest manifest;
    std::string dump = config.dump();
    manifest.config_hash = fnv1a_hex(dump.data(), dump.size());
    manifest.version = kCodeVersion;

    Writer writer(out_dir, manifest);
    SpectralCache cache(cache_dir);

    const std::string kind = config.at("experiment").get<std::string>();
    if (kind == "egorov")
        run_egorov(config, opts, writer, cache);
    else if (kind == "trace")
        run_trace(config, writer);
    else if (kind == "qe-catmap")
        run_qe_catmap(config, opts, writer, cache, seed);
    else if (kind == "qe-laplace")
        run_qe_laplace(config, writer);
    else if (kind == "weyl-count")
        run_weyl_count(config, writer);
    else if (kind == "disk-mass")
        run_disk_mass(config, writer);
    else if (kind == "proof-chain")
        run_proof_chain(config, opts, writer, cache, seed);
    else if (kind == "husimi-export")
        run_husimi_export(config, writer, cache, seed);
    else if (kind == "scar-scan")
        run_scar_scan(config, writer, cache, seed);

    manifest.cache_events = cache.events();
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream mf(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    mf << manifest.to_json().dump(2) << '\n';
    if (!mf) throw Error("cannot write manifest.json");
    return manifest;
}

}  // namespace qchaos
