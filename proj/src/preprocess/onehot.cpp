#include "forecast/preprocess/onehot.hpp"

#include <algorithm>
#include <set>

#include "forecast/error.hpp"

namespace forecast {

OneHotEncoder::OneHotEncoder(std::vector<Vocabulary> vocabularies)
    : vocab_(std::move(vocabularies)) {
  for (const auto& v : vocab_) {
    if (v.categories.empty()) {
      throw DataError("one-hot: column '" + v.column + "' has an empty vocabulary");
    }
  }
}

std::pair<OneHotEncoder, TimeSeriesFrame> OneHotEncoder::fit_transform(
    const TimeSeriesFrame& frame, const std::vector<std::string>& declared) {
  std::vector<Vocabulary> vocab;
  for (const auto& name : declared) {
    const auto* col = frame.find_categorical(name);
    if (!col) throw SchemaError("one-hot: declared column '" + name + "' not found");
    std::set<std::string> seen;
    for (const auto& v : col->values) {
      if (v) seen.insert(*v);
    }
    vocab.push_back({name, {seen.begin(), seen.end()}});
  }
  OneHotEncoder enc(std::move(vocab));
  auto result = enc.transform(frame);
  return {std::move(enc), std::move(result.frame)};
}

OneHotEncoder::Result OneHotEncoder::transform(const TimeSeriesFrame& frame) const {
  Result out;
  out.frame.dates = frame.dates;
  out.frame.target = frame.target;
  out.frame.numeric = frame.numeric;
  for (const auto& c : frame.categorical) {
    const bool encoded = std::any_of(vocab_.begin(), vocab_.end(),
                                     [&](const auto& v) { return v.column == c.name; });
    if (!encoded) out.frame.categorical.push_back(c);
  }
  for (const auto& v : vocab_) {
    const auto* col = frame.find_categorical(v.column);
    if (!col) throw SchemaError("one-hot: column '" + v.column + "' not found");
    const std::size_t base = out.frame.numeric.size();
    for (const auto& cat : v.categories) {
      out.frame.numeric.push_back(
          {v.column + "=" + cat, std::vector<double>(frame.rows(), 0.0)});
    }
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      const auto& cell = col->values[r];
      const auto it = cell ? std::lower_bound(v.categories.begin(), v.categories.end(), *cell)
                           : v.categories.end();
      if (it == v.categories.end() || *it != *cell) {
        ++out.unknown;
        continue;
      }
      out.frame.numeric[base + static_cast<std::size_t>(it - v.categories.begin())]
          .values[r] = 1.0;
    }
  }
  return out;
}

std::vector<std::string> OneHotEncoder::indicator_names() const {
  std::vector<std::string> names;
  for (const auto& v : vocab_) {
    for (const auto& cat : v.categories) names.push_back(v.column + "=" + cat);
  }
  return names;
}

}  // namespace forecast
