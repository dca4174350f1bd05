#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "forecast/app/config.hpp"
#include "forecast/nn/model.hpp"
#include "forecast/preprocess/onehot.hpp"
#include "forecast/preprocess/scaler.hpp"

namespace forecast {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  RunConfig config;
  ModelState model;
  MinMaxScaler scaler;
  OneHotEncoder encoder;
  std::vector<std::string> feature_columns;  // model input order
  std::size_t best_epoch = 0;
};

// Line-oriented text; floats carry 17 significant digits so loading is
// bit-exact and save(load(save(x))) == save(x).
std::string serialize_checkpoint(const Checkpoint& ck);
Checkpoint parse_checkpoint(std::string_view text, const std::string& source = "<checkpoint>");

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace forecast
