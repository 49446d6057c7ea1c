#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wellvoice/features_types.hpp"

namespace wellvoice {

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kPron, kOther };

std::optional<PosTag> ParsePosTag(std::string_view tag);

struct Token {
  std::string text;  // lowercase
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<PosTag> pos;
};

struct Transcript {
  std::vector<Token> tokens;
  std::optional<std::string> prompt_text;
};

/// Throws MalformedFile when times are negative, starts decrease, or a token
/// ends before it starts.
void ValidateTranscript(const Transcript& t);

Transcript ParseTranscriptJson(std::string_view json_text);
Transcript LoadTranscript(const std::filesystem::path& path);
std::string TranscriptToJson(const Transcript& t);

class LexiconSet {
 public:
  std::unordered_map<std::string, std::int64_t> word_frequency;
  std::unordered_set<std::string> depression_terms;
  std::unordered_set<std::string> positive_valence;
  std::unordered_set<std::string> negative_valence;
  std::unordered_set<std::string> fillers = DefaultFillers();

  static std::unordered_set<std::string> DefaultFillers();

  /// Rank percentile of the word's corpus count among the vocabulary, in
  /// (0, 1]; 0 for out-of-vocabulary words.
  double Popularity(std::string_view word) const;

  /// Must be called after word_frequency changes.
  void IndexFrequencies();

  /// Directory layout: frequency.tsv, depression.txt, positive.txt,
  /// negative.txt and optionally fillers.txt.
  static LexiconSet LoadDirectory(const std::filesystem::path& dir);

 private:
  std::vector<std::int64_t> sorted_counts_;
};

std::unordered_set<std::string> LoadTermList(const std::filesystem::path& path);
std::unordered_map<std::string, std::int64_t> LoadFrequencyTable(
    const std::filesystem::path& path);

/// Lowercases and strips punctuation (apostrophes kept), splitting on space.
std::vector<std::string> NormalizeWords(std::string_view text);

/// Vowel-group syllable estimate (a, e, i, o, u, y), minimum 1.
int CountSyllables(std::string_view word);

/// Closed-class fallback tagger used when a token carries no tag.
PosTag FallbackPos(std::string_view word);

struct AlignmentCounts {
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t substitutions = 0;
  std::int64_t hits = 0;
  std::int64_t ref_len = 0;

  std::int64_t errors() const {
    return insertions + deletions + substitutions;
  }
};

/// Unit-cost minimum edit alignment of hypothesis against reference.
AlignmentCounts Align(const std::vector<std::string>& ref,
                      const std::vector<std::string>& hyp);

inline constexpr std::size_t kCommonLinguisticDim = 17;
inline constexpr std::size_t kReadLinguisticDim = 3;
inline constexpr std::size_t kSpontaneousLinguisticDim = 10;
inline constexpr double kPauseThresholdS = 0.15;

FeatureVector CommonFeatures(const Transcript& t, double audio_duration_s,
                             const LexiconSet& lex);
FeatureVector ReadFeatures(const Transcript& t, const LexiconSet& lex);
FeatureVector SpontaneousFeatures(const Transcript& t, const LexiconSet& lex);

}  // namespace wellvoice
