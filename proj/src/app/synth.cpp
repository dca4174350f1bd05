#include "forecast/app/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "forecast/error.hpp"
#include "forecast/numeric/rng.hpp"
#include "forecast/preprocess/frame.hpp"

namespace forecast {

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "sinusoid") return SynthKind::Sinusoid;
  if (name == "trend_season_noise") return SynthKind::TrendSeasonNoise;
  if (name == "ar1") return SynthKind::Ar1;
  throw ConfigError("unknown synthetic kind `" + std::string(name) +
                    "` (expected sinusoid, trend_season_noise or ar1)");
}

std::string_view synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::Sinusoid: return "sinusoid";
    case SynthKind::TrendSeasonNoise: return "trend_season_noise";
    case SynthKind::Ar1: return "ar1";
  }
  return "?";
}

std::string synth_generate(SynthKind kind, std::size_t rows, std::uint64_t seed) {
  if (rows < kMinSynthRows) {
    throw ConfigError("synth needs at least " + std::to_string(kMinSynthRows) + " rows, got " +
                      std::to_string(rows));
  }
  // Burn-in rows give every lag a value and let the AR(1) chain settle.
  constexpr std::size_t burn = 100;
  RngStream noise = RngStream(seed).child(synth_kind_name(kind));
  std::vector<double> y(rows + burn);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double prev = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = static_cast<double>(i) - static_cast<double>(burn);
    switch (kind) {
      case SynthKind::Sinusoid:
        y[i] = 50.0 + 10.0 * std::sin(two_pi * t / 30.0) + 0.5 * noise.normal();
        break;
      case SynthKind::TrendSeasonNoise:
        y[i] = 20.0 + 0.05 * t + 5.0 * std::sin(two_pi * t / 7.0) + noise.normal();
        break;
      case SynthKind::Ar1:
        prev = 0.9 * prev + noise.normal();
        y[i] = prev;
        break;
    }
  }

  std::string out = "date,lag1,lag7,ma7,target\n";
  const Date start = *Date::parse("2020-01-01");
  char buf[160];
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = r + burn;
    double ma = 0.0;
    for (std::size_t k = 1; k <= 7; ++k) ma += y[i - k];
    ma /= 7.0;
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f\n",
                  start.plus_days(static_cast<std::int32_t>(r)).to_string().c_str(), y[i - 1],
                  y[i - 7], ma, y[i]);
    out += buf;
  }
  return out;
}

}  // namespace forecast
