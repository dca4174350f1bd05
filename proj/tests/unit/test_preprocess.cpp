#include <doctest.h>

#include <cmath>
#include <limits>

#include "forecast/error.hpp"
#include "forecast/numeric/rng.hpp"
#include "forecast/preprocess/clean.hpp"
#include "forecast/preprocess/onehot.hpp"
#include "forecast/preprocess/scaler.hpp"
#include "forecast/preprocess/split.hpp"

using namespace forecast;

namespace {

constexpr double NA = std::numeric_limits<double>::quiet_NaN();

TimeSeriesFrame frame_of(std::vector<NumericColumn> cols, std::string target = "y") {
  TimeSeriesFrame f;
  const std::size_t n = cols.front().values.size();
  const Date d0 = *Date::parse("2021-03-01");
  for (std::size_t i = 0; i < n; ++i) f.dates.push_back(d0.plus_days(static_cast<int>(i)));
  f.numeric = std::move(cols);
  f.target = std::move(target);
  return f;
}

TimeSeriesFrame ramp(std::size_t n) {
  std::vector<double> y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<double>(i);
    x[i] = 100.0 + static_cast<double>(i);
  }
  return frame_of({{"x", x}, {"y", y}});
}

}  // namespace

TEST_CASE("dates parse and print in ISO form") {
  const auto d = Date::parse("2024-02-29");
  REQUIRE(d);
  CHECK(d->to_string() == "2024-02-29");
  CHECK(d->plus_days(1).to_string() == "2024-03-01");
  CHECK_FALSE(Date::parse("2023-02-29"));
  CHECK_FALSE(Date::parse("2023-1-01"));
  CHECK_FALSE(Date::parse("not a date"));
  CHECK(Date::parse("1970-01-01")->days == 0);
}

TEST_CASE("frame validation") {
  TimeSeriesFrame f = ramp(5);
  CHECK_NOTHROW(f.validate());
  std::swap(f.dates[1], f.dates[2]);
  CHECK_THROWS_AS(f.validate(), DataError);
  TimeSeriesFrame g = ramp(5);
  g.numeric[0].values.pop_back();
  CHECK_THROWS_AS(g.validate(), DataError);
  TimeSeriesFrame h = ramp(5);
  h.target = "missing";
  CHECK_THROWS_AS(h.validate(), SchemaError);
}

TEST_CASE("clean: constant column flags nothing") {
  const auto flags = flag_outliers(std::vector<double>(50, 7.0), 3.0);
  CHECK(std::count(flags.begin(), flags.end(), true) == 0);
  auto [out, report] = clean(frame_of({{"y", std::vector<double>(40, 3.0)}}));
  CHECK(report.outliers.empty());
}

TEST_CASE("clean: an injected spike is flagged against brute-force bounds and replaced") {
  RngStream rng(4);
  std::vector<double> v(100);
  for (auto& x : v) x = rng.normal();
  v[60] = 10.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= 100.0;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / 100.0);
  CHECK(std::abs(10.0 - mean) > 3.0 * sd);

  const auto flags = flag_outliers(v, 3.0);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(flags[i] == (std::abs(v[i] - mean) > 3.0 * sd));
  auto [out, report] = clean(frame_of({{"y", v}}));
  REQUIRE_FALSE(report.outliers.empty());
  CHECK(report.outliers.front().row == 60);
  CHECK(report.outliers.front().original == 10.0);
  CHECK(out.numeric[0].values[60] == v[59]);
}

TEST_CASE("clean: rows with more than 10% missing cells are dropped") {
  std::vector<NumericColumn> cols;
  for (int c = 0; c < 10; ++c) {
    cols.push_back({"c" + std::to_string(c), std::vector<double>(6, double(c))});
  }
  cols[0].name = "y";
  cols[3].values[2] = NA;
  cols[7].values[2] = NA;  // row 2: 2 of 10 missing
  cols[5].values[4] = NA;  // row 4: 1 of 10, kept and filled
  auto [out, report] = clean(frame_of(cols));
  CHECK(out.rows() == 5);
  REQUIRE(report.dropped_rows.size() == 1);
  CHECK(report.dropped_rows[0] == *Date::parse("2021-03-03"));
  REQUIRE(report.filled_cells.size() == 1);
  CHECK(report.filled_cells[0].column == "c5");
  CHECK(out.numeric[5].values[3] == 5.0);
}

TEST_CASE("clean: forward fill, leading gaps back-filled") {
  auto [out, report] = clean(frame_of({{"y", {NA, 2.0, NA, 4.0, 5.0, 6.0}}}),
                             CleaningOptions{1.0, 3.0});
  CHECK(out.numeric[0].values == std::vector<double>{2.0, 2.0, 2.0, 4.0, 5.0, 6.0});
  CHECK(report.filled_cells.size() == 2);
  CHECK_THROWS_AS(clean(frame_of({{"y", {NA, NA, NA}}}), CleaningOptions{1.0, 3.0}), DataError);
  CHECK_THROWS_AS(clean(frame_of({{"y", {NA, NA}}, {"x", {NA, NA}}})), DataError);
}

TEST_CASE("clean is idempotent") {
  RngStream rng(8);
  std::vector<double> v(200);
  for (auto& x : v) x = rng.normal();
  v[10] = 9.0;
  v[11] = -7.0;
  v[150] = 5.0;
  const auto once = clean(frame_of({{"y", v}})).first;
  const auto twice = clean(once).first;
  CHECK(once == twice);
}

TEST_CASE("scaler fit, transform, inverse") {
  const auto f = frame_of({{"y", {2, 4, 6}}});
  const auto s = MinMaxScaler::fit(f);
  CHECK(s.column("y").min == 2);
  CHECK(s.column("y").max == 6);
  CHECK(s.transform(f).numeric[0].values == std::vector<double>{0, 0.5, 1});
  const auto s2 = MinMaxScaler::fit(f, {-1, 1});
  CHECK(s2.transform(f).numeric[0].values == std::vector<double>{-1, 0, 1});
  CHECK(s2.inverse(s2.transform(f)) == f);

  const auto c = MinMaxScaler::fit(frame_of({{"y", {5, 5, 5}}}));
  CHECK(c.column("y").degenerate());
  CHECK(c.transform_value(c.column("y"), 5) == 0.0);
  CHECK(c.inverse_value(c.column("y"), 0.3) == 5.0);
  CHECK_THROWS_AS(s.column("nope"), SchemaError);
  CHECK_THROWS_AS(s.transform(frame_of({{"z", {1, 2}}}, "z")), SchemaError);
}

TEST_CASE("scaler fitted on training rows leaves later rows outside the range") {
  const auto full = frame_of({{"y", {1, 2, 3, 4, 10}}});
  const auto split = chrono_split(full, {0.6, 0.2, 0.2});
  const auto s = MinMaxScaler::fit(split.train);
  CHECK(s.transform(split.test).numeric[0].values[0] > 1.0);
  CHECK_FALSE(s == MinMaxScaler::fit(full));
}

TEST_CASE("one-hot encoding") {
  TimeSeriesFrame f = frame_of({{"y", {1, 2, 3}}});
  f.categorical.push_back({"kind", {"B", "A", "B"}});
  f.categorical[0].values = {"A", "B", "A"};
  auto [enc, out] = OneHotEncoder::fit_transform(f, {"kind"});
  REQUIRE(enc.vocabularies().size() == 1);
  CHECK(enc.vocabularies()[0].categories == std::vector<std::string>{"A", "B"});
  CHECK(enc.indicator_names() == std::vector<std::string>{"kind=A", "kind=B"});
  REQUIRE(out.numeric.size() == 3);
  CHECK(out.numeric[1].values == std::vector<double>{1, 0, 1});
  CHECK(out.numeric[2].values == std::vector<double>{0, 1, 0});
  CHECK(out.categorical.empty());

  TimeSeriesFrame g = frame_of({{"y", {1}}});
  g.categorical.push_back({"kind", {"C"}});
  const auto r = enc.transform(g);
  CHECK(r.unknown == 1);
  CHECK(r.frame.numeric[1].values[0] == 0.0);
  CHECK(r.frame.numeric[2].values[0] == 0.0);

  TimeSeriesFrame empty = frame_of({{"y", {1, 2}}});
  empty.categorical.push_back({"kind", {std::nullopt, std::nullopt}});
  CHECK_THROWS_AS(OneHotEncoder::fit_transform(empty, {"kind"}), DataError);
  CHECK_THROWS_AS(OneHotEncoder::fit_transform(f, {"missing"}), SchemaError);
}

TEST_CASE("chronological split sizes") {
  auto sizes = split_sizes(100, {});
  CHECK(sizes.train == 70);
  CHECK(sizes.val == 15);
  CHECK(sizes.test == 15);
  sizes = split_sizes(101, {});
  CHECK(sizes.train == 70);
  CHECK(sizes.val == 15);
  CHECK(sizes.test == 16);
  CHECK_THROWS_AS(split_sizes(100, {0.5, 0.3, 0.3}), ConfigError);
  CHECK_THROWS_AS(chrono_split(ramp(2)), DataError);
  CHECK_THROWS_AS(chrono_split(ramp(4)), DataError);

  const auto s = chrono_split(ramp(50));
  CHECK(s.train.dates.back() < s.val.dates.front());
  CHECK(s.val.dates.back() < s.test.dates.front());
  CHECK(s.train.rows() + s.val.rows() + s.test.rows() == 50);
}

TEST_CASE("sliding windows") {
  CHECK(make_windows(ramp(37)).count() == 1);
  const auto none = make_windows(ramp(36));
  CHECK(none.count() == 0);
  CHECK(none.warning.has_value());

  const auto ds = make_windows(ramp(44));
  REQUIRE(ds.count() == 8);
  CHECK(ds.features() == 2);
  // window 0: input rows 0..29, target rows 30..36 of y (= row index)
  CHECK(ds.input(0).at(0, 1) == 0.0);
  CHECK(ds.input(0).at(29, 1) == 29.0);
  CHECK(ds.input(0).at(29, 0) == 129.0);
  CHECK(ds.target(0)[0] == 30.0);
  CHECK(ds.target(0)[6] == 36.0);
  CHECK(ds.target(7)[6] == 43.0);
  CHECK(ds.target_start[0] == ramp(44).dates[30]);

  const auto sub = ds.select({2, 5});
  CHECK(sub.count() == 2);
  CHECK(sub.target(1) == ds.target(5));
}
