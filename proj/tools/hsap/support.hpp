#pragma once

#include "hsap/linalg.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hsap::tool {

/// Bad flag combinations, malformed config files: exit code 1 territory.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string sha256_file_hex(const std::string& path);

/// `key = value` lines, # comments (full-line or trailing), keys matching
/// flag names with dashes turned to underscores. The manifest this tool
/// writes parses back through here.
std::map<std::string, std::string> parse_config_file(const std::string& path);

std::string format_double(double v);

/// One resolved parameter for the manifest: key, value, provenance.
using ResolvedParam = std::array<std::string, 3>;

/// Applies the precedence flags > config file > defaults, remembering where
/// every value came from.
class ParamSet {
 public:
  explicit ParamSet(std::map<std::string, std::string> config)
      : config_(std::move(config)) {}

  void resolve(const CLI::Option* opt, const std::string& key, std::string& var);
  void resolve(const CLI::Option* opt, const std::string& key, double& var);
  void resolve(const CLI::Option* opt, const std::string& key, Index& var);
  void resolve(const CLI::Option* opt, const std::string& key, std::uint64_t& var);
  void resolve(const CLI::Option* opt, const std::string& key, int& var);
  void resolve(const CLI::Option* opt, const std::string& key, bool& var);
  void resolve_range(const CLI::Option* opt, const std::string& key, double& lo,
                     double& hi);

  /// True when the value came from a flag or the config file, not a default.
  bool was_set(const std::string& key) const;

  /// Overrides a recorded entry (e.g. a cluster count inferred from a
  /// labels file).
  void note(const std::string& key, const std::string& value, const std::string& source);

  /// Removes a recorded entry. Optional or irrelevant parameters stay out
  /// of the manifest so it reproduces the run verbatim.
  void drop(const std::string& key);

  /// Unconsumed config keys are typos; refuses them.
  void check_unused_config() const;

  const std::vector<ResolvedParam>& entries() const { return entries_; }

 private:
  const std::string* config_value(const std::string& key);
  void record(const std::string& key, const std::string& value, const std::string& source);

  std::map<std::string, std::string> config_;
  std::set<std::string> consumed_;
  std::set<std::string> set_keys_;
  std::vector<ResolvedParam> entries_;
};

void write_text_file(const std::string& path, const std::string& content);

void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<ResolvedParam>& params,
                    const std::vector<std::pair<std::string, std::string>>& digests);

}  // namespace hsap::tool
