#include "support.hpp"

#include "hsap/errors.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hsap::tool {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

double parse_double_or_throw(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw UsageError("config: bad numeric value for '" + key + "': " + text);
  return v;
}

template <typename T>
T parse_integer_or_throw(const std::string& key, const std::string& text) {
  T v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw UsageError("config: bad integer value for '" + key + "': " + text);
  return v;
}

bool parse_bool_or_throw(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError("config: bad boolean value for '" + key + "': " + text);
}

}  // namespace

std::string sha256_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("EVP_DigestInit_ex failed");
  }

  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx, buf, static_cast<size_t>(got)) != 1) {
      EVP_MD_CTX_free(ctx);
      throw std::runtime_error("EVP_DigestUpdate failed");
    }
  }
  if (in.bad()) {
    EVP_MD_CTX_free(ctx);
    throw DataError("read error while hashing: " + path);
  }

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("EVP_DigestFinal_ex failed");
  }
  EVP_MD_CTX_free(ctx);

  std::string hex(2 * len, '0');
  static const char* digits = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex[2 * i] = digits[digest[i] >> 4];
    hex[2 * i + 1] = digits[digest[i] & 0xf];
  }
  return hex;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);

  std::map<std::string, std::string> out;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw UsageError("config " + path + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    std::string key = trim(text.substr(0, eq));
    std::string value = text.substr(eq + 1);
    const auto hash = value.find(" #");
    if (hash != std::string::npos) value = value.substr(0, hash);
    value = trim(value);
    if (key.empty())
      throw UsageError("config " + path + ":" + std::to_string(line_no) + ": empty key");
    if (out.count(key))
      throw UsageError("config " + path + ":" + std::to_string(line_no) +
                       ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf, ptr);
}

const std::string* ParamSet::config_value(const std::string& key) {
  auto it = config_.find(key);
  if (it == config_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

void ParamSet::record(const std::string& key, const std::string& value,
                      const std::string& source) {
  if (source != "default") set_keys_.insert(key);
  entries_.push_back({key, value, source});
}

void ParamSet::resolve(const CLI::Option* opt, const std::string& key, std::string& var) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    var = *conf;
    source = "config";
  }
  record(key, var, source);
}

void ParamSet::resolve(const CLI::Option* opt, const std::string& key, double& var) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    var = parse_double_or_throw(key, *conf);
    source = "config";
  }
  record(key, format_double(var), source);
}

void ParamSet::resolve(const CLI::Option* opt, const std::string& key, Index& var) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    var = parse_integer_or_throw<Index>(key, *conf);
    source = "config";
  }
  record(key, std::to_string(var), source);
}

void ParamSet::resolve(const CLI::Option* opt, const std::string& key, std::uint64_t& var) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    var = parse_integer_or_throw<std::uint64_t>(key, *conf);
    source = "config";
  }
  record(key, std::to_string(var), source);
}

void ParamSet::resolve(const CLI::Option* opt, const std::string& key, int& var) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    var = parse_integer_or_throw<int>(key, *conf);
    source = "config";
  }
  record(key, std::to_string(var), source);
}

void ParamSet::resolve(const CLI::Option* opt, const std::string& key, bool& var) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    var = parse_bool_or_throw(key, *conf);
    source = "config";
  }
  record(key, var ? "true" : "false", source);
}

void ParamSet::resolve_range(const CLI::Option* opt, const std::string& key, double& lo,
                             double& hi) {
  std::string source = "default";
  const std::string* conf = config_value(key);
  if (opt != nullptr && opt->count() > 0) {
    source = "flag";
  } else if (conf != nullptr) {
    std::istringstream ss(*conf);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw UsageError("config: '" + key + "' needs exactly two numbers");
    lo = parse_double_or_throw(key, a);
    hi = parse_double_or_throw(key, b);
    source = "config";
  }
  record(key, format_double(lo) + " " + format_double(hi), source);
}

bool ParamSet::was_set(const std::string& key) const { return set_keys_.count(key) > 0; }

void ParamSet::note(const std::string& key, const std::string& value,
                    const std::string& source) {
  for (auto& entry : entries_) {
    if (entry[0] == key) {
      entry[1] = value;
      entry[2] = source;
      return;
    }
  }
  entries_.push_back({key, value, source});
}

void ParamSet::drop(const std::string& key) {
  std::erase_if(entries_, [&](const ResolvedParam& e) { return e[0] == key; });
}

void ParamSet::check_unused_config() const {
  for (const auto& [key, value] : config_) {
    if (!consumed_.count(key))
      throw UsageError("config: unknown key '" + key + "'");
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<ResolvedParam>& params,
                    const std::vector<std::pair<std::string, std::string>>& digests) {
  std::string text;
  text += "# hsap " + command + " run manifest\n";
  text += "# tool_version = " + std::string(HSAP_TOOL_VERSION) + "\n";
  for (const auto& [name, hex] : digests)
    text += "# sha256 " + name + " = " + hex + "\n";

  size_t width = 0;
  for (const auto& entry : params) width = std::max(width, entry[0].size() + entry[1].size());
  for (const auto& entry : params) {
    std::string line = entry[0] + " = " + entry[1];
    line.append(width + 4 - entry[0].size() - entry[1].size(), ' ');
    line += "# source: " + entry[2] + "\n";
    text += line;
  }
  write_text_file(path, text);
}

}  // namespace hsap::tool
