#pragma once

#include <map>
#include <optional>
#include <string>

#include "motedit/common.hpp"

namespace motedit {

// Versioned `key = value` run config with typed getters. Later set() calls
// (flag overrides) win over file values.
class KeyValueConfig {
 public:
  static KeyValueConfig load(const std::string& path);
  static KeyValueConfig from_string(const std::string& content,
                                    const std::string& origin = "<memory>");
  KeyValueConfig() = default;

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& def) const;
  int get_int(const std::string& key, int def) const;
  double get_double(const std::string& key, double def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;

  std::string dump() const;

 private:
  std::map<std::string, std::string> values_;
};

// Data-root resolution: absolute paths pass through; otherwise the
// MOTEDIT_DATA_ROOT environment variable (when set) prefixes the path.
std::string resolve_data_path(const std::string& path);

}  // namespace motedit
