#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forecast {

// Calendar day, stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  static std::optional<Date> parse(std::string_view iso);  // YYYY-MM-DD
  std::string to_string() const;
  Date plus_days(std::int32_t n) const { return Date{days + n}; }

  auto operator<=>(const Date&) const = default;
};

struct NumericColumn {
  std::string name;
  std::vector<double> values;  // NaN marks a missing cell
};

struct CategoricalColumn {
  std::string name;
  std::vector<std::optional<std::string>> values;
};

struct TimeSeriesFrame {
  std::vector<Date> dates;
  std::vector<NumericColumn> numeric;
  std::vector<CategoricalColumn> categorical;
  std::string target;

  std::size_t rows() const noexcept { return dates.size(); }
  std::size_t cell_columns() const noexcept {
    return numeric.size() + categorical.size();
  }

  const NumericColumn* find_numeric(std::string_view name) const;
  NumericColumn* find_numeric(std::string_view name);
  const CategoricalColumn* find_categorical(std::string_view name) const;
  const NumericColumn& target_column() const;

  // Rows [begin, end).
  TimeSeriesFrame slice(std::size_t begin, std::size_t end) const;
  TimeSeriesFrame keep_rows(const std::vector<bool>& keep) const;

  // Throws DataError/SchemaError when an invariant is broken.
  void validate() const;

  friend bool operator==(const TimeSeriesFrame& a, const TimeSeriesFrame& b);
};

}  // namespace forecast
