#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qchaos/experiments.hpp"

using namespace qchaos;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("qchaos-test-" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("spectrum cache round trip is exact") {
    TempDir tmp("cache");
    CatMap A = default_cat_map();
    const int N = 24;
    SpectralDecomposition dec = spectrum(propagator(N, A));

    fs::path file = tmp.path / "entry.spec";
    save_spectrum_file(file, A, Orientation::Forward, dec);
    std::string why;
    auto loaded = load_spectrum_file(file, A, N, &why);
    REQUIRE(loaded.has_value());
    CHECK((loaded->phases - dec.phases).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded->vectors - dec.vectors).cwiseAbs().maxCoeff() == 0.0);
    CHECK(loaded->degenerate_clusters == dec.degenerate_clusters);

    // wrong parameters are rejected
    CHECK_FALSE(load_spectrum_file(file, A, N + 1, &why).has_value());
    CHECK_FALSE(load_spectrum_file(file, A.inverse(), N, &why).has_value());
}

TEST_CASE("corrupt cache entries are reported and rebuilt") {
    TempDir tmp("corrupt");
    CatMap A = default_cat_map();
    const int N = 16;

    {
        SpectralCache cache(tmp.path);
        cache.get(A, N);
        CHECK(cache.events().empty());
    }
    // flip one payload byte
    fs::path file = tmp.path / (spectrum_cache_key(A, N, Orientation::Forward) + ".spec");
    REQUIRE(fs::exists(file));
    std::string bytes = slurp(file);
    bytes[bytes.size() - 5] ^= 0x40;
    std::ofstream(file, std::ios::binary | std::ios::trunc) << bytes;

    SpectralCache cache(tmp.path);
    const SpectralDecomposition& dec = cache.get(A, N);
    REQUIRE(cache.events().size() == 1);
    CHECK(cache.events()[0].find("checksum mismatch") != std::string::npos);
    CHECK(max_residual(propagator(N, A).matrix, dec) < 1e-10);

    // rebuilt file is valid again
    SpectralCache fresh(tmp.path);
    fresh.get(A, N);
    CHECK(fresh.events().empty());
}

TEST_CASE("cache reuse returns identical data") {
    TempDir tmp("reuse");
    CatMap A = default_cat_map();
    SpectralDecomposition direct = spectrum(propagator(20, A));
    SpectralCache c1(tmp.path);
    const SpectralDecomposition& first = c1.get(A, 20);
    CHECK((first.vectors - direct.vectors).cwiseAbs().maxCoeff() == 0.0);
    SpectralCache c2(tmp.path);  // second process: reads the file
    const SpectralDecomposition& second = c2.get(A, 20);
    CHECK((second.vectors - direct.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("config validation") {
    auto valid = nlohmann::json::parse(R"({
        "experiment": "qe-catmap", "map": [2,1,3,2], "N": [16, 24],
        "observable": {"modes": [{"m":1,"n":0,"re":0.5},{"m":-1,"n":0,"re":0.5}]}
    })");
    CHECK(validate_config(valid).ok());

    auto missing_n = valid;
    missing_n.erase("N");
    auto r1 = validate_config(missing_n);
    REQUIRE_FALSE(r1.ok());
    CHECK(r1.errors[0].find("N") != std::string::npos);

    auto unknown = valid;
    unknown["extra_knob"] = 3;
    auto r2 = validate_config(unknown);
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.errors[0].find("unknown key") != std::string::npos);

    auto bad_map = valid;
    bad_map["map"] = {3, 2, 4, 3};
    auto r3 = validate_config(bad_map);
    REQUIRE_FALSE(r3.ok());
    CHECK(r3.errors[0].find("|b| = 1") != std::string::npos);

    auto odd_map = valid;
    odd_map["map"] = {3, 1, 2, 1};  // b = 1 but odd diagonal
    CHECK_FALSE(validate_config(odd_map).ok());

    CHECK_FALSE(validate_config(nlohmann::json{{"experiment", "warp"}}).ok());

    auto laplace = nlohmann::json::parse(R"({
        "experiment": "qe-laplace",
        "domain": {"kind": "rectangle", "L1": 1.0, "L2": 1.0},
        "R": [50.0], "observable": {"family": "position-cosine", "p": 1}
    })");
    CHECK(validate_config(laplace).ok());
    laplace["observable"]["family"] = "phase";
    CHECK_FALSE(validate_config(laplace).ok());  // phase needs circle/torus
}

TEST_CASE("experiment runs write deterministic artifacts") {
    TempDir tmp("run");
    auto config = nlohmann::json::parse(R"({
        "experiment": "weyl-count",
        "domain": {"kind": "rectangle", "L1": 1.0, "L2": 1.0},
        "R": [50.0, 100.0]
    })");
    RunOptions opts;
    opts.out_dir = tmp.path / "out1";
    RunManifest m1 = run_experiment(config, opts);
    REQUIRE(m1.artifacts.size() == 2);
    CHECK(m1.artifacts[0].name == "weyl_count.csv");
    CHECK(m1.artifacts[1].name == "eigen_data.csv");
    CHECK(fs::exists(tmp.path / "out1" / "weyl_count.csv"));
    CHECK(fs::exists(tmp.path / "out1" / "eigen_data.csv"));
    CHECK(fs::exists(tmp.path / "out1" / "manifest.json"));

    opts.out_dir = tmp.path / "out2";
    RunManifest m2 = run_experiment(config, opts);
    CHECK(m1.config_hash == m2.config_hash);
    CHECK(m1.artifacts[0].checksum == m2.artifacts[0].checksum);
    CHECK(slurp(tmp.path / "out1" / "weyl_count.csv") ==
          slurp(tmp.path / "out2" / "weyl_count.csv"));

    // invalid configs throw ConfigError before touching the experiment
    auto bad = config;
    bad["R"] = {5.0};
    opts.out_dir = tmp.path / "out3";
    CHECK_THROWS_AS(run_experiment(bad, opts), ConfigError);
}

TEST_CASE("qe-catmap run uses the spectral cache") {
    TempDir tmp("qerun");
    auto config = nlohmann::json::parse(R"({
        "experiment": "qe-catmap", "map": [2,1,3,2], "N": [16],
        "observable": {"modes": [{"m":1,"n":0,"re":0.5},{"m":-1,"n":0,"re":0.5}]}
    })");
    RunOptions opts;
    opts.out_dir = tmp.path / "out1";
    opts.cache_dir = tmp.path / "cache";
    RunManifest m1 = run_experiment(config, opts);
    CHECK(fs::exists(tmp.path / "cache" /
                     (spectrum_cache_key(default_cat_map(), 16, Orientation::Forward) + ".spec")));

    opts.out_dir = tmp.path / "out2";
    RunManifest m2 = run_experiment(config, opts);  // second run hits the cache
    REQUIRE(m1.artifacts.size() == m2.artifacts.size());
    for (size_t i = 0; i < m1.artifacts.size(); ++i)
        CHECK(m1.artifacts[i].checksum == m2.artifacts[i].checksum);
    CHECK(slurp(tmp.path / "out1" / "qe_catmap_N16.json") ==
          slurp(tmp.path / "out2" / "qe_catmap_N16.json"));
}

TEST_CASE("observable file loading") {
    TempDir tmp("obsfile");
    {
        std::ofstream out(tmp.path / "obs.json");
        out << R"({"modes": [{"m":1,"n":0,"re":0.5},{"m":-1,"n":0,"re":0.5}]})";
    }
    nlohmann::json config{{"experiment", "proof-chain"},
                          {"map", {2, 1, 3, 2}},
                          {"N", 32},
                          {"T", 2},
                          {"observable", (tmp.path / "obs.json").string()}};
    RunOptions opts;
    opts.out_dir = tmp.path / "out";
    opts.cache_dir = tmp.path / "cache";
    RunManifest m = run_experiment(config, opts);
    REQUIRE(m.artifacts.size() == 1);
    nlohmann::json rec = nlohmann::json::parse(slurp(tmp.path / "out" / "proof_chain.json"));
    CHECK(rec.at("pass_i") == true);
    CHECK(rec.at("pass_iv") == true);
    CHECK(rec.at("orbits_disjoint") == true);

    nlohmann::json missing = config;
    missing["observable"] = (tmp.path / "nope.json").string();
    opts.out_dir = tmp.path / "out2";
    CHECK_THROWS_AS(run_experiment(missing, opts), ConfigError);
}
