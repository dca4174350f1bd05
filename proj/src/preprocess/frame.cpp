#include "forecast/preprocess/frame.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "forecast/error.hpp"

namespace forecast {

namespace chr = std::chrono;

std::optional<Date> Date::parse(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = from; i < from + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  const auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const chr::year_month_day ymd{chr::year{*y}, chr::month{static_cast<unsigned>(*m)},
                                chr::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{static_cast<std::int32_t>(
      chr::sys_days{ymd}.time_since_epoch().count())};
}

std::string Date::to_string() const {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

const NumericColumn* TimeSeriesFrame::find_numeric(std::string_view name) const {
  for (const auto& c : numeric) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

NumericColumn* TimeSeriesFrame::find_numeric(std::string_view name) {
  for (auto& c : numeric) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const CategoricalColumn* TimeSeriesFrame::find_categorical(
    std::string_view name) const {
  for (const auto& c : categorical) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const NumericColumn& TimeSeriesFrame::target_column() const {
  const auto* c = find_numeric(target);
  if (!c) throw SchemaError("target column '" + target + "' is not numeric or missing");
  return *c;
}

TimeSeriesFrame TimeSeriesFrame::slice(std::size_t begin, std::size_t end) const {
  TimeSeriesFrame out;
  out.target = target;
  out.dates.assign(dates.begin() + begin, dates.begin() + end);
  for (const auto& c : numeric) {
    out.numeric.push_back(
        {c.name, {c.values.begin() + begin, c.values.begin() + end}});
  }
  for (const auto& c : categorical) {
    out.categorical.push_back(
        {c.name, {c.values.begin() + begin, c.values.begin() + end}});
  }
  return out;
}

TimeSeriesFrame TimeSeriesFrame::keep_rows(const std::vector<bool>& keep) const {
  TimeSeriesFrame out;
  out.target = target;
  for (const auto& c : numeric) out.numeric.push_back({c.name, {}});
  for (const auto& c : categorical) out.categorical.push_back({c.name, {}});
  for (std::size_t r = 0; r < rows(); ++r) {
    if (!keep[r]) continue;
    out.dates.push_back(dates[r]);
    for (std::size_t c = 0; c < numeric.size(); ++c) {
      out.numeric[c].values.push_back(numeric[c].values[r]);
    }
    for (std::size_t c = 0; c < categorical.size(); ++c) {
      out.categorical[c].values.push_back(categorical[c].values[r]);
    }
  }
  return out;
}

void TimeSeriesFrame::validate() const {
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) {
      throw DataError("dates not strictly increasing at " + dates[i].to_string());
    }
  }
  for (const auto& c : numeric) {
    if (c.values.size() != rows()) {
      throw DataError("column '" + c.name + "' has " +
                      std::to_string(c.values.size()) + " rows, expected " +
                      std::to_string(rows()));
    }
  }
  for (const auto& c : categorical) {
    if (c.values.size() != rows()) {
      throw DataError("column '" + c.name + "' has " +
                      std::to_string(c.values.size()) + " rows, expected " +
                      std::to_string(rows()));
    }
  }
  target_column();
}

bool operator==(const TimeSeriesFrame& a, const TimeSeriesFrame& b) {
  if (a.target != b.target || a.dates != b.dates ||
      a.numeric.size() != b.numeric.size() || a.categorical.size() != b.categorical.size()) {
    return false;
  }
  for (std::size_t c = 0; c < a.numeric.size(); ++c) {
    const auto& x = a.numeric[c];
    const auto& y = b.numeric[c];
    if (x.name != y.name || x.values.size() != y.values.size()) return false;
    for (std::size_t r = 0; r < x.values.size(); ++r) {
      const bool nx = std::isnan(x.values[r]), ny = std::isnan(y.values[r]);
      if (nx != ny || (!nx && x.values[r] != y.values[r])) return false;
    }
  }
  for (std::size_t c = 0; c < a.categorical.size(); ++c) {
    if (a.categorical[c].name != b.categorical[c].name ||
        a.categorical[c].values != b.categorical[c].values) {
      return false;
    }
  }
  return true;
}

}  // namespace forecast
