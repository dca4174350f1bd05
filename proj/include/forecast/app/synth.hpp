#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace forecast {

enum class SynthKind { Sinusoid, TrendSeasonNoise, Ar1 };

// "sinusoid", "trend_season_noise" or "ar1"; throws ConfigError otherwise.
SynthKind parse_synth_kind(std::string_view name);
std::string_view synth_kind_name(SynthKind kind);

// Smallest accepted row count: default window + horizon + 10.
inline constexpr std::size_t kMinSynthRows = 30 + 7 + 10;

// CSV text with columns date, lag1, lag7, ma7, target; daily dates from
// 2020-01-01. The features are the target lagged by 1 and 7 days and its
// trailing 7-day mean (excluding today). Identical arguments give identical
// bytes.
//   sinusoid:           50 + 10 sin(2 pi t / 30) + N(0, 0.5^2)
//   trend_season_noise: 20 + 0.05 t + 5 sin(2 pi t / 7) + N(0, 1)
//   ar1:                x_t = 0.9 x_{t-1} + N(0, 1)
std::string synth_generate(SynthKind kind, std::size_t rows, std::uint64_t seed);

}  // namespace forecast
