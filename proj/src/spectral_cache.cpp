#include "qchaos/spectral_cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace qchaos {

static_assert(std::endian::native == std::endian::little,
              "cache payload is written as little-endian float64");

uint64_t fnv1a(const void* data, size_t len, uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string fnv1a_hex(const void* data, size_t len) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(data, len)));
    return buf;
}

std::string spectrum_cache_key(const CatMap& A, int N, Orientation o) {
    std::string key = "catmap";
    for (long long e : {A.a(), A.b(), A.c(), A.d()})
        key += "_" + std::to_string(e);
    key += "_N" + std::to_string(N);
    key += o == Orientation::Forward ? "_fwd" : "_inv";
    key += "_v" + std::to_string(kCacheVersion);
    return key;
}

namespace {

std::string payload_bytes(const SpectralDecomposition& dec) {
    const size_t n = static_cast<size_t>(dec.N);
    std::string bytes;
    bytes.resize(sizeof(double) * (n + 2 * n * n));
    std::memcpy(bytes.data(), dec.phases.data(), sizeof(double) * n);
    std::memcpy(bytes.data() + sizeof(double) * n, dec.vectors.data(),
                sizeof(double) * 2 * n * n);
    return bytes;
}

}  // namespace

void save_spectrum_file(const std::filesystem::path& file, const CatMap& A, Orientation o,
                        const SpectralDecomposition& dec) {
    std::string payload = payload_bytes(dec);
    nlohmann::json header{{"version", kCacheVersion},
                          {"N", dec.N},
                          {"map", {A.a(), A.b(), A.c(), A.d()}},
                          {"orientation", o == Orientation::Forward ? "forward" : "inverse"},
                          {"checksum", fnv1a_hex(payload.data(), payload.size())}};
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file " + file.string());
    out << header.dump() << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw CacheError("short write on cache file " + file.string());
}

std::optional<SpectralDecomposition> load_spectrum_file(const std::filesystem::path& file,
                                                        const CatMap& A, int N,
                                                        std::string* why) {
    auto fail = [&](const std::string& msg) -> std::optional<SpectralDecomposition> {
        if (why) *why = msg;
        return std::nullopt;
    };
    std::ifstream in(file, std::ios::binary);
    if (!in) return fail("missing");
    std::string header_line;
    if (!std::getline(in, header_line)) return fail("truncated header");
    nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
    if (header.is_discarded()) return fail("unparseable header");
    if (header.value("version", -1) != kCacheVersion) return fail("version mismatch");
    if (header.value("N", -1) != N) return fail("dimension mismatch");
    std::vector<long long> map_entries = header.value("map", std::vector<long long>{});
    if (map_entries != std::vector<long long>{A.a(), A.b(), A.c(), A.d()})
        return fail("map mismatch");

    const size_t n = static_cast<size_t>(N);
    std::string payload(sizeof(double) * (n + 2 * n * n), '\0');
    in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (static_cast<size_t>(in.gcount()) != payload.size()) return fail("truncated payload");
    if (in.get() != std::ifstream::traits_type::eof()) return fail("trailing bytes");
    if (fnv1a_hex(payload.data(), payload.size()) != header.value("checksum", ""))
        return fail("checksum mismatch");

    SpectralDecomposition dec;
    dec.N = N;
    dec.phases.resize(N);
    dec.vectors.resize(N, N);
    std::memcpy(dec.phases.data(), payload.data(), sizeof(double) * n);
    std::memcpy(dec.vectors.data(), payload.data() + sizeof(double) * n,
                sizeof(double) * 2 * n * n);
    // cluster structure is cheap to rederive and not worth serializing
    dec.degenerate_clusters = phase_clusters(dec.phases);
    return dec;
}

SpectralCache::SpectralCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

const SpectralDecomposition& SpectralCache::get(const CatMap& A, int N) {
    Orientation o = calibrate_orientation(std::max(N, 8), A).orientation;
    std::string key = spectrum_cache_key(A, N, o);
    if (auto it = memo_.find(key); it != memo_.end()) return *it->second;

    std::filesystem::path file = dir_.empty() ? std::filesystem::path{} : dir_ / (key + ".spec");
    if (!dir_.empty() && std::filesystem::exists(file)) {
        std::string why;
        if (auto loaded = load_spectrum_file(file, A, N, &why)) {
            auto [it, ok] = memo_.emplace(key, std::make_unique<SpectralDecomposition>(
                                                   std::move(*loaded)));
            return *it->second;
        }
        events_.push_back("cache entry " + file.string() + " rejected (" + why + "); rebuilding");
    }

    auto dec = std::make_unique<SpectralDecomposition>(spectrum(propagator(N, A)));
    if (!dir_.empty()) save_spectrum_file(file, A, o, *dec);
    auto [it, ok] = memo_.emplace(key, std::move(dec));
    return *it->second;
}

}  // namespace qchaos
