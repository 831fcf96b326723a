#include "techcycle/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "techcycle/error.hpp"

namespace techcycle {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Duplicate: return "duplication error";
    case ErrorKind::MissingCpiYear: return "missing CPI year";
    case ErrorKind::EmptyGroup: return "empty group";
    case ErrorKind::UnknownTechnology: return "unknown technology";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::DegenerateRegressor: return "degenerate regressor";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::NoCycle: return "no cycle";
    case ErrorKind::DegenerateCycle: return "degenerate cycle";
    case ErrorKind::NotYetDefined: return "not yet defined";
    case ErrorKind::Window: return "window error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

std::string_view trim(std::string_view s) noexcept {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto piece = trim(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
  KeyValueConfig cfg;
  cfg.source_ = std::string(source);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Parse, cfg.source_ + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorKind::Parse, cfg.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    if (cfg.contains(key)) {
      throw Error(ErrorKind::Parse, cfg.source_ + ":" + std::to_string(line_no) +
                                        ": duplicate key '" + key + "'");
    }
    cfg.entries_.emplace_back(std::move(key), std::move(value));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  return parse(read_file(path), path);
}

bool KeyValueConfig::contains(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string KeyValueConfig::require(std::string_view key) const {
  auto v = get(key);
  if (!v) throw Error(ErrorKind::Parse, source_ + ": missing key '" + std::string(key) + "'");
  return *v;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto d = parse_double(*v);
  if (!d) {
    throw Error(ErrorKind::Parse, source_ + ": key '" + std::string(key) + "' is not a number: '" + *v + "'");
  }
  return *d;
}

double KeyValueConfig::require_double(std::string_view key) const {
  const auto v = require(key);
  const auto d = parse_double(v);
  if (!d) {
    throw Error(ErrorKind::Parse, source_ + ": key '" + std::string(key) + "' is not a number: '" + v + "'");
  }
  return *d;
}

long long KeyValueConfig::get_int(std::string_view key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto i = parse_int(*v);
  if (!i) {
    throw Error(ErrorKind::Parse, source_ + ": key '" + std::string(key) + "' is not an integer: '" + *v + "'");
  }
  return *i;
}

std::vector<std::pair<std::string, std::string>> KeyValueConfig::with_prefix(std::string_view prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : entries_) {
    if (k.size() > prefix.size() && std::string_view(k).substr(0, prefix.size()) == prefix)
      out.emplace_back(k.substr(prefix.size()), v);
  }
  return out;
}

}  // namespace techcycle
