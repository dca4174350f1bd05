#include "forecast/app/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "forecast/error.hpp"

namespace forecast {
namespace {

std::vector<std::string> split_fields(std::string_view line, const std::string& where) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError(where + ": unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA"; }

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

CsvReadResult parse_csv(std::string_view text, const CsvSchema& schema, const std::string& source) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;  // (1-based line number, text)
  std::size_t pos = 0, number = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.emplace_back(number, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) throw DataError(source + ": empty file, header row required");

  const auto header = split_fields(lines[0].second, source + ":" + std::to_string(lines[0].first));
  std::vector<std::string> names;
  for (const auto& h : header) names.emplace_back(trim(h));
  const auto date_it = std::find(names.begin(), names.end(), "date");
  if (date_it == names.end()) throw SchemaError(source + ": header has no `date` column");
  const std::size_t date_col = static_cast<std::size_t>(date_it - names.begin());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw SchemaError(source + ": header column " + std::to_string(i + 1) + " is unnamed");
    if (std::find(names.begin(), names.begin() + i, names[i]) != names.begin() + i) {
      throw SchemaError(source + ": duplicate column `" + names[i] + "`");
    }
  }
  if (std::find(names.begin(), names.end(), schema.target) == names.end()) {
    throw SchemaError(source + ": target column `" + schema.target + "` not found");
  }
  for (const auto& c : schema.categorical) {
    if (c == schema.target) throw SchemaError(source + ": target column `" + c + "` cannot be categorical");
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw SchemaError(source + ": categorical column `" + c + "` not found");
    }
  }

  // column index -> (is categorical, slot in the typed column list)
  TimeSeriesFrame frame;
  frame.target = schema.target;
  std::vector<std::pair<bool, std::size_t>> slot(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i == date_col) continue;
    const bool cat = std::find(schema.categorical.begin(), schema.categorical.end(), names[i]) !=
                     schema.categorical.end();
    if (cat) {
      slot[i] = {true, frame.categorical.size()};
      frame.categorical.push_back({names[i], {}});
    } else {
      slot[i] = {false, frame.numeric.size()};
      frame.numeric.push_back({names[i], {}});
    }
  }

  std::vector<std::size_t> line_of_row;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string where = source + ":" + std::to_string(lines[li].first);
    const auto fields = split_fields(lines[li].second, where);
    if (fields.size() != names.size()) {
      throw DataError(where + ": expected " + std::to_string(names.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    const auto date_text = trim(fields[date_col]);
    const auto date = Date::parse(date_text);
    if (!date) throw DataError(where + ": unparseable date `" + std::string(date_text) + "`");
    frame.dates.push_back(*date);
    line_of_row.push_back(lines[li].first);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == date_col) continue;
      const auto cell = trim(fields[i]);
      const auto [cat, s] = slot[i];
      if (cat) {
        frame.categorical[s].values.push_back(is_missing(cell) ? std::nullopt
                                                               : std::optional<std::string>(cell));
      } else if (is_missing(cell)) {
        frame.numeric[s].values.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        const auto v = parse_number(cell);
        if (!v) {
          throw DataError(where + ": column `" + names[i] + "` has non-numeric value `" +
                          std::string(cell) + "`");
        }
        frame.numeric[s].values.push_back(*v);
      }
    }
  }

  CsvReadResult result;
  const std::size_t n = frame.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (!std::is_sorted(frame.dates.begin(), frame.dates.end())) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frame.dates[a] < frame.dates[b]; });
    result.warnings.push_back(source + ": rows were not in date order and have been sorted");
  }
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t a = order[k - 1], b = order[k];
    if (frame.dates[a] == frame.dates[b]) {
      throw DataError(source + ": duplicate date " + frame.dates[b].to_string() + " on lines " +
                      std::to_string(line_of_row[a]) + " and " + std::to_string(line_of_row[b]));
    }
  }
  if (!std::is_sorted(frame.dates.begin(), frame.dates.end())) {
    auto permute = [&](auto& v) {
      auto copy = v;
      for (std::size_t k = 0; k < n; ++k) v[k] = copy[order[k]];
    };
    permute(frame.dates);
    for (auto& c : frame.numeric) permute(c.values);
    for (auto& c : frame.categorical) permute(c.values);
  }
  frame.validate();
  result.frame = std::move(frame);
  return result;
}

CsvReadResult read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), schema, path.string());
}

std::string format_csv(const TimeSeriesFrame& frame) {
  std::string out = "date";
  for (const auto& c : frame.numeric) out += "," + quote_if_needed(c.name);
  for (const auto& c : frame.categorical) out += "," + quote_if_needed(c.name);
  out += '\n';
  char buf[40];
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    out += frame.dates[r].to_string();
    for (const auto& c : frame.numeric) {
      out += ',';
      if (std::isnan(c.values[r])) {
        out += "NA";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", c.values[r]);
        out += buf;
      }
    }
    for (const auto& c : frame.categorical) {
      out += ',';
      out += c.values[r] ? quote_if_needed(*c.values[r]) : "NA";
    }
    out += '\n';
  }
  return out;
}

}  // namespace forecast
