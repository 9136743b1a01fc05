#include "countreg/manifest.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "countreg/errors.hpp"

namespace countreg {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 computation failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string config_hash(const nlohmann::json& config) { return sha256_hex(config.dump()); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

RunManifest RunManifest::begin(std::string command, nlohmann::json config, std::uint64_t seed) {
  RunManifest m;
  m.command = std::move(command);
  m.config_hash = countreg::config_hash(config);
  m.config = std::move(config);
  m.seed = seed;
  m.started_at = utc_timestamp();
  return m;
}

void RunManifest::finish() { finished_at = utc_timestamp(); }

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},         {"config", config},         {"config_hash", config_hash},
          {"seed", seed},               {"tool_version", tool_version}, {"started_at", started_at},
          {"finished_at", finished_at}};
}

}  // namespace countreg
