#include "motedit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "motedit/io.hpp"

namespace motedit {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_string(const std::string& content,
                                           const std::string& origin) {
  KeyValueConfig cfg;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config " + origin + ":" + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("config " + origin + ":" + std::to_string(lineno) +
                       ": empty key");
    }
    if (key == "version") {
      if (value != "1") {
        throw ParseError("config " + origin + ": unsupported version " + value);
      }
      saw_version = true;
      continue;
    }
    cfg.values_[key] = value;
  }
  if (!saw_version) {
    throw ParseError("config " + origin + ": missing 'version = 1' line");
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  return from_string(read_file(path), path);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& def) const {
  return get(key).value_or(def);
}

int KeyValueConfig::get_int(const std::string& key, int def) const {
  const auto v = get(key);
  if (!v) return def;
  try {
    return std::stoi(*v);
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' is not an integer: " + *v);
  }
}

double KeyValueConfig::get_double(const std::string& key, double def) const {
  const auto v = get(key);
  if (!v) return def;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' is not a number: " + *v);
  }
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t def) const {
  const auto v = get(key);
  if (!v) return def;
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' is not an integer: " + *v);
  }
}

std::string KeyValueConfig::dump() const {
  std::ostringstream out;
  out << "version = 1\n";
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
  return out.str();
}

std::string resolve_data_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* root = std::getenv("MOTEDIT_DATA_ROOT");
  if (root == nullptr || root[0] == '\0') return path;
  return std::string(root) + "/" + path;
}

}  // namespace motedit
