#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbm/harness/studies.hpp"
#include "cbm/integrate.hpp"

namespace cbm {

/// %.17g, so every double survives a text round trip.
std::string format_double(double v);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Hash of the canonical (sorted-key, compact) dump of a JSON value.
std::string config_hash(const nlohmann::json& config);

void write_dt_trace(const std::filesystem::path& path, const TrajectoryRecord& rec);
void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& rec);
void write_errors(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);
void write_cost(const std::filesystem::path& path, const std::vector<CostRow>& rows);
void write_sweep_m(const std::filesystem::path& path, const std::vector<SweepMRow>& rows);
void write_sweep_n(const std::filesystem::path& path, const std::vector<SweepNRow>& rows);

/// Run manifest: command, config, its hash, seed and library version. No
/// timestamps or host data, so equal runs give equal manifests.
nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config,
                             std::uint64_t seed, const std::vector<std::string>& outputs);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::string_view library_version();

}  // namespace cbm
