#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace gwcut {

// key=value lines; '#' starts a comment, blank lines are ignored and
// surrounding whitespace is trimmed. Later keys override earlier ones.
class Config {
 public:
  static Config parse(std::string_view text);  // throws ParseError
  static Config load(const std::filesystem::path& path);  // throws IoError or ParseError

  std::optional<std::string> get(std::string_view key) const;
  bool contains(std::string_view key) const { return get(key).has_value(); }
  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace gwcut
