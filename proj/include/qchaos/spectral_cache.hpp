#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "qchaos/spectral.hpp"

namespace qchaos {

/// FNV-1a over a byte range.
uint64_t fnv1a(const void* data, size_t len, uint64_t seed = 0xCBF29CE484222325ULL);
std::string fnv1a_hex(const void* data, size_t len);

/// Cache file layout: one JSON header line
///   {"version":1,"N":...,"map":[a,b,c,d],"orientation":"forward|inverse",
///    "checksum":"<fnv1a hex of the payload>"}
/// followed by '\n' and a raw little-endian float64 payload: the eigenphases,
/// then the eigenvector matrix as interleaved re/im pairs, column-major.
/// Eigenvector phases are canonical at write time, so files are byte-stable.
inline constexpr int kCacheVersion = 1;

std::string spectrum_cache_key(const CatMap& A, int N, Orientation o);

void save_spectrum_file(const std::filesystem::path& file, const CatMap& A, Orientation o,
                        const SpectralDecomposition& dec);

/// Loads and verifies; on any mismatch returns nullopt and fills `why`.
std::optional<SpectralDecomposition> load_spectrum_file(const std::filesystem::path& file,
                                                        const CatMap& A, int N,
                                                        std::string* why);

/// Memoizing compute-or-load cache over (map, N, orientation, version).
/// Corrupt entries are reported through the event log and rebuilt in place.
/// One experiment process owns a cache instance; access is single-threaded
/// (parallelism lives inside the kernels, not across cache calls).
class SpectralCache {
public:
    SpectralCache() = default;  // memory-only
    explicit SpectralCache(std::filesystem::path dir);

    const SpectralDecomposition& get(const CatMap& A, int N);

    const std::vector<std::string>& events() const { return events_; }
    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::unique_ptr<SpectralDecomposition>> memo_;
    std::vector<std::string> events_;
};

}  // namespace qchaos
