#include "ridecomfort/report.hpp"

#include <sstream>

#include "ridecomfort/error.hpp"
#include "ridecomfort/trip_io.hpp"

namespace ridecomfort {

void KeyValueReport::add(const std::string& key, const std::string& value) {
  if (key.empty() || key.find_first_of("= \t\n") != std::string::npos) {
    throw ValidationError("key", "report keys must be non-empty without '=' or whitespace");
  }
  if (value.find('\n') != std::string::npos) throw ValidationError("value", "must be a single line");
  entries_.emplace_back(key, value);
}

void KeyValueReport::add(const std::string& key, double value) { add(key, format_double(value)); }

void KeyValueReport::add(const std::string& key, long long value) { add(key, std::to_string(value)); }

std::string KeyValueReport::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_report(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(n, "expected key=value");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace ridecomfort
