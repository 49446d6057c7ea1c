#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wellvoice/features_types.hpp"
#include "wellvoice/linguistic.hpp"
#include "wellvoice/signal_io.hpp"

namespace wellvoice {

enum class ResponseKind { kSpontaneous, kSentence, kParagraph };

inline constexpr int kQuestionCount = 7;
inline constexpr std::size_t kReadResponseDim = 2357;
inline constexpr std::size_t kSpontaneousResponseDim = 2364;
inline constexpr std::size_t kSessionDim =
    kSpontaneousResponseDim + 6 * kReadResponseDim;  // 16,506

std::string_view KindName(ResponseKind kind);
std::optional<ResponseKind> ParseKind(std::string_view name);

/// "Q1".."Q7" <-> 1..7.
std::string QuestionName(int question);
std::optional<int> ParseQuestion(std::string_view name);
/// Protocol: Q1 spontaneous, Q2-Q5 sentence, Q6-Q7 paragraph.
ResponseKind ProtocolKind(int question);

std::size_t ExpectedDim(ResponseKind kind);

struct ResponseFeatures {
  int question = 0;
  ResponseKind kind = ResponseKind::kSentence;
  FeatureVector vector;
};

struct SessionFeatures {
  std::map<int, ResponseFeatures> per_question;
  FeatureVector concatenated;
};

/// Acoustic functionals, common linguistic features, then read-specific or
/// spontaneous-specific features, in that order.
ResponseFeatures ExtractResponse(const Waveform& audio,
                                 const Transcript& transcript,
                                 ResponseKind kind, int question,
                                 const LexiconSet& lex);

/// Throws IncompleteSession unless Q1..Q7 are all present with protocol
/// kinds. Names become "<Qi>.<name>".
SessionFeatures Concatenate(std::vector<ResponseFeatures> responses);

/// Names of a response vector for a kind (acoustic + linguistic).
std::vector<std::string> ResponseFeatureNames(ResponseKind kind);

/// Tabular feature cache: one row per (subject, session, question).
struct FeatureTable {
  struct Row {
    std::string subject_id;
    int session_index = 0;
    std::string question_id;  // "Q1".."Q7" or "ALL" for concatenated rows
    std::vector<double> values;
  };
  std::vector<std::string> names;
  std::vector<Row> rows;
};

void WriteFeatureCsv(const std::filesystem::path& path, const FeatureTable& t);
FeatureTable ReadFeatureCsv(const std::filesystem::path& path);

/// Compact little-endian binary with an embedded name table.
void WriteFeatureBinary(const std::filesystem::path& path,
                        const FeatureTable& t);
FeatureTable ReadFeatureBinary(const std::filesystem::path& path);

}  // namespace wellvoice
