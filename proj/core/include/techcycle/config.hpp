#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace techcycle {

/// Ordered `key = value` file, the format shared by groups.cfg, scenario
/// files and riaa_study.cfg.
///
/// Blank lines and lines starting with `#` are ignored; keys and values are
/// whitespace-trimmed; a repeated key is a parse error. Entry order is kept so
/// that files like groups.cfg define a stable technology order.
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  static KeyValueConfig load(const std::string& path);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  std::string require(std::string_view key) const;
  double get_double(std::string_view key, double fallback) const;
  double require_double(std::string_view key) const;
  long long get_int(std::string_view key, long long fallback) const;

  /// Entries whose key starts with `prefix`, with the prefix stripped.
  std::vector<std::pair<std::string, std::string>> with_prefix(std::string_view prefix) const;

  const std::string& source() const noexcept { return source_; }

private:
  std::string source_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string> split_list(std::string_view s, char sep = ';');

/// Strict decimal parse of the whole string; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string read_file(const std::string& path);

}  // namespace techcycle
