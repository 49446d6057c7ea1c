#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wellvoice/features.hpp"
#include "wellvoice/measurement.hpp"

namespace wellvoice {

struct Scores {
  int stai = 0;
  int gad7 = 0;
  int psqi = 0;
  int panas = 0;

  int get(Measurement m) const;
  /// Empty when every score lies in its questionnaire range, otherwise a
  /// reason such as "psqi out of range [0,21]".
  std::optional<std::string> range_violation() const;
};

struct ResponseRef {
  std::filesystem::path audio;
  std::filesystem::path transcript;
  ResponseKind kind = ResponseKind::kSentence;
};

struct Session {
  std::string subject_id;
  int session_index = 1;
  std::map<int, ResponseRef> responses;  // question 1..7
  Scores scores;
};

struct Exclusion {
  std::string subject_id;
  int session_index = 0;
  std::string reason;
};

struct ManifestContents {
  std::vector<Session> sessions;
  std::vector<Exclusion> exclusions;
};

/// Parses and validates a manifest; paths resolve against `base_dir`.
/// Sessions failing range or completeness checks are excluded, not fatal.
ManifestContents ParseManifest(std::string_view json_text,
                               const std::filesystem::path& base_dir);
ManifestContents LoadManifest(const std::filesystem::path& path);

struct SynthSpec {
  int n_subjects = 30;
  int sessions_per_subject = 5;
  std::uint64_t seed = 42;
  double noise_level = 0.2;
};

inline constexpr int kLatentTraits = 4;
using Traits = std::array<double, kLatentTraits>;

/// Planted score mapping: center + spread * (w . traits + noise), rounded and
/// clipped to the questionnaire range.
struct ScoreLoading {
  double center;
  double spread;
  Traits weights;  // unit-norm
};
const ScoreLoading& LoadingFor(Measurement m);

/// Generates WAVs, transcripts, lexicons and manifest.json under `out_dir`.
/// Each session also records its latent traits under "latent".
void GenerateSynthetic(const SynthSpec& spec,
                       const std::filesystem::path& out_dir);

}  // namespace wellvoice
