#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace countreg {

inline constexpr const char* kToolVersion = "0.1.0";

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

/// Hash of the compact serialization of `config`. Object keys are sorted
/// by the JSON library, so equal configurations hash equally.
std::string config_hash(const nlohmann::json& config);

/// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;

  /// Fills the hash and start time from `config`.
  static RunManifest begin(std::string command, nlohmann::json config, std::uint64_t seed);
  void finish();
  nlohmann::json to_json() const;
};

}  // namespace countreg
