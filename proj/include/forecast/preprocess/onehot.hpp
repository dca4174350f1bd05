#pragma once

#include <string>
#include <utility>
#include <vector>

#include "forecast/preprocess/frame.hpp"

namespace forecast {

struct Vocabulary {
  std::string column;
  std::vector<std::string> categories;  // lexicographically sorted

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

// Replaces declared categorical columns with `column=category` indicator
// columns appended after the numeric ones.
class OneHotEncoder {
 public:
  struct Result {
    TimeSeriesFrame frame;
    std::size_t unknown = 0;  // cells whose category was not in the vocabulary
  };

  OneHotEncoder() = default;
  explicit OneHotEncoder(std::vector<Vocabulary> vocabularies);

  static std::pair<OneHotEncoder, TimeSeriesFrame> fit_transform(
      const TimeSeriesFrame& frame, const std::vector<std::string>& declared);

  // Unknown categories encode to all zeros and are counted in Result::unknown.
  Result transform(const TimeSeriesFrame& frame) const;

  const std::vector<Vocabulary>& vocabularies() const noexcept { return vocab_; }
  std::vector<std::string> indicator_names() const;

  friend bool operator==(const OneHotEncoder&, const OneHotEncoder&) = default;

 private:
  std::vector<Vocabulary> vocab_;
};

}  // namespace forecast
