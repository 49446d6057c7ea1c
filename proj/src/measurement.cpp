#include "wellvoice/measurement.hpp"

#include <cctype>
#include <string>

namespace wellvoice {

std::optional<Measurement> ParseMeasurement(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Measurement m : kAllMeasurements) {
    if (MeasurementName(m) == upper) return m;
  }
  return std::nullopt;
}

}  // namespace wellvoice
