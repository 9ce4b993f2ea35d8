#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ridecomfort {

/// Machine-readable report: one `key=value` pair per line, in insertion order.
class KeyValueReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, int value) { add(key, static_cast<long long>(value)); }
  void add(const std::string& key, std::size_t value) { add(key, static_cast<long long>(value)); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parses report text; blank lines and '#' comments are skipped. Throws
/// ParseError for a line without '=' or with an empty key.
std::vector<std::pair<std::string, std::string>> parse_report(const std::string& text);

}  // namespace ridecomfort
