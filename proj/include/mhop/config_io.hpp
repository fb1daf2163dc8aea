#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mhop/montecarlo.hpp"
#include "mhop/topology.hpp"

namespace mhop {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<double> target_rate;
    std::optional<double> snr;
};

// The resolved configuration with every default materialized, plus the
// identity used to stamp output files.  Re-running from the manifest JSON
// reproduces the original run bit for bit: the hash covers exactly the
// resolved config, never timestamps.
struct RunManifest {
    nlohmann::json resolved_config;
    std::string hash;
};

struct ParsedRun {
    NetworkConfig net;
    McConfig mc;
    RunManifest manifest;
};

// Parses a config object.  Unknown keys are rejected by name; missing keys
// fall back to defaults (single flat-fading hop, unit distance and snr,
// fourth-power path loss).  A missing seed is drawn once from the system
// entropy source and recorded so the run stays reproducible.  Accepts both
// plain config objects and full manifests (identified by a "config" key).
ParsedRun parse_config_json(const nlohmann::json& doc, const Overrides& o = {});
ParsedRun parse_config(const std::optional<std::filesystem::path>& file,
                       const Overrides& o = {});

// 64-bit FNV-1a over the canonical (sorted-key) serialization.
std::string manifest_hash(const nlohmann::json& resolved_config);

// Manifest for configs assembled in code (scenario sweeps build their
// NetworkConfig directly instead of going through JSON).
RunManifest make_manifest(const NetworkConfig& net, const McConfig& mc);

// Full manifest document: resolved config, tool version, normalization
// notes, hash, timestamp.
nlohmann::json manifest_json(const ParsedRun& run);

nlohmann::json realization_to_json(const ChannelRealization& real);
ChannelRealization realization_from_json(const nlohmann::json& doc,
                                         const NetworkConfig& cfg,
                                         const ReusePlan& plan);

nlohmann::json summary_to_json(const McSummary& summary);

// Shortest decimal form that parses back to the identical double.
std::string format_g17(double value);

}  // namespace mhop
