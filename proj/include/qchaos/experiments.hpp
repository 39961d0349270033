#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qchaos/qe_stats.hpp"
#include "qchaos/spectral_cache.hpp"

namespace qchaos {

inline constexpr const char* kCodeVersion = "qchaos 1.0.0";

/// Semantic diagnostics for a parsed config; empty errors means valid.
/// JSON parse failures are reported by the caller before this runs.
struct ValidationResult {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

ValidationResult validate_config(const nlohmann::json& config);

struct RunOptions {
    std::filesystem::path config_path;          // for resolving relative paths
    std::filesystem::path out_dir;              // overrides config "out"
    std::filesystem::path cache_dir;            // overrides config "cache" / $QCHAOS_CACHE
    std::optional<uint64_t> seed;               // overrides config "seed"
};

struct ArtifactRecord {
    std::string name;
    size_t bytes = 0;
    std::string checksum;  // fnv1a of the file contents
};

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::vector<ArtifactRecord> artifacts;
    std::vector<std::string> cache_events;
    double wall_seconds = 0.0;
    nlohmann::json to_json() const;
};

/// Runs config["experiment"], writes its artifacts plus manifest.json under
/// the output directory, reuses spectra from the cache directory.
/// Throws ConfigError for config problems and Error subtypes for numerical
/// failures.
RunManifest run_experiment(const nlohmann::json& config, const RunOptions& opts);

}  // namespace qchaos
