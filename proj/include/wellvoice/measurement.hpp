#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace wellvoice {

enum class Measurement { kStai, kGad7, kPsqi, kPanas };

inline constexpr std::array<Measurement, 4> kAllMeasurements = {
    Measurement::kStai, Measurement::kGad7, Measurement::kPsqi,
    Measurement::kPanas};

struct ScoreRange {
  int min;
  int max;
};

/// Possible questionnaire score range.
constexpr ScoreRange RangeOf(Measurement m) {
  switch (m) {
    case Measurement::kStai: return {20, 80};
    case Measurement::kGad7: return {0, 21};
    case Measurement::kPsqi: return {0, 21};
    case Measurement::kPanas: return {10, 50};
  }
  return {0, 0};
}

constexpr std::string_view MeasurementName(Measurement m) {
  switch (m) {
    case Measurement::kStai: return "STAI";
    case Measurement::kGad7: return "GAD7";
    case Measurement::kPsqi: return "PSQI";
    case Measurement::kPanas: return "PANAS";
  }
  return "";
}

/// Case-insensitive.
std::optional<Measurement> ParseMeasurement(std::string_view name);

}  // namespace wellvoice
