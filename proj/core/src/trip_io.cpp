#include "ridecomfort/trip_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

long parse_int(const std::string& token, std::size_t line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected integer, got '" + token + "'");
  }
  return v;
}

void parse_meta(const std::vector<std::string>& toks, std::size_t line, TripMeta& meta) {
  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "meta field without '=': " + toks[i]);
    auto key = toks[i].substr(0, eq);
    auto val = toks[i].substr(eq + 1);
    if (key == "trip_id") {
      meta.trip_id = val;
    } else if (key == "commuter_id") {
      meta.commuter_id = val;
    } else if (key == "start_clock") {
      meta.start_clock = parse_clock(val);
    } else if (key == "window") {
      meta.sample_window = parse_double(val, line);
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (res.ec != std::errc()) {
    // Only reachable for values beyond ~1e300; fall back to round-trip general.
    res = std::to_chars(buf, buf + sizeof buf, v);
  }
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected number, got '" + token + "'");
  }
  return v;
}

TripRecord parse_trip(std::istream& in) {
  TripRecord rec;
  bool have_meta = false;
  std::vector<std::pair<long, bool>> anomalies;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const auto& tag = toks[0];
    if (tag == "#meta") {
      parse_meta(toks, lineno, rec.meta);
      have_meta = true;
    } else if (tag[0] == '#') {
      continue;
    } else if (tag == "S") {
      if (toks.size() < 5) throw ParseError(lineno, "sample line needs t accel_y lat lon [speed]");
      SensorSample s;
      s.t = parse_double(toks[1], lineno);
      s.accel_y = parse_double(toks[2], lineno);
      s.lat = parse_double(toks[3], lineno);
      s.lon = parse_double(toks[4], lineno);
      if (toks.size() >= 6 && toks[5] != "-") s.speed = parse_double(toks[5], lineno);
      rec.samples.push_back(s);
    } else if (tag == "L") {
      if (toks.size() < 3) throw ParseError(lineno, "label line needs t level");
      ComfortLabel l;
      l.t = parse_double(toks[1], lineno);
      l.level = static_cast<int>(parse_int(toks[2], lineno));
      rec.labels.push_back(l);
    } else if (tag == "A") {
      if (toks.size() < 3) throw ParseError(lineno, "anomaly line needs window_index flag");
      long idx = parse_int(toks[1], lineno);
      long flag = parse_int(toks[2], lineno);
      if (flag != 0 && flag != 1) throw ParseError(lineno, "anomaly flag must be 0 or 1");
      anomalies.emplace_back(idx, flag == 1);
    } else {
      throw ParseError(lineno, "unknown record tag '" + tag + "'");
    }
  }
  if (!have_meta) throw ParseError(0, "missing #meta header");

  if (!anomalies.empty()) {
    std::vector<bool> flags;
    flags.reserve(anomalies.size());
    for (std::size_t i = 0; i < anomalies.size(); ++i) {
      if (anomalies[i].first != static_cast<long>(i)) {
        throw ValidationError("ground_truth_anomaly", "window indices must run 0..n-1 in order");
      }
      flags.push_back(anomalies[i].second);
    }
    rec.ground_truth_anomaly = std::move(flags);
  }
  validate(rec);
  return rec;
}

TripRecord parse_trip(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trip file '" + path.string() + "'");
  return parse_trip(in);
}

std::string format_trip(const TripRecord& record) {
  validate(record);
  std::string out;
  out.reserve(64 * (record.samples.size() + record.labels.size() + 1));
  const auto& m = record.meta;
  out += "#meta trip_id=" + m.trip_id + " commuter_id=" + m.commuter_id +
         " start_clock=" + format_clock(m.start_clock) +
         " window=" + format_double(m.sample_window) + "\n";
  for (const auto& s : record.samples) {
    out += "S ";
    out += format_double(s.t);
    out += ' ';
    out += format_double(s.accel_y);
    out += ' ';
    out += format_double(s.lat);
    out += ' ';
    out += format_double(s.lon);
    out += ' ';
    out += s.speed ? format_double(*s.speed) : std::string("-");
    out += '\n';
  }
  for (const auto& l : record.labels) {
    out += "L " + format_double(l.t) + " " + std::to_string(l.level) + "\n";
  }
  if (record.ground_truth_anomaly) {
    const auto& flags = *record.ground_truth_anomaly;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      out += "A " + std::to_string(i) + (flags[i] ? " 1\n" : " 0\n");
    }
  }
  return out;
}

void write_trip(const TripRecord& record, std::ostream& out) {
  out << format_trip(record);
  if (!out) throw IoError("trip write failed");
}

void write_trip(const TripRecord& record, const std::filesystem::path& path) {
  write_file_atomic(path, format_trip(record));
}

}  // namespace ridecomfort
