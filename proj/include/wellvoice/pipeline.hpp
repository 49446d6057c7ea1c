#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wellvoice/data.hpp"
#include "wellvoice/eval.hpp"
#include "wellvoice/features.hpp"

namespace wellvoice {

/// Loads the seven responses of a session and extracts its features.
SessionFeatures ExtractSession(const Session& session, const LexiconSet& lex);

struct SessionError {
  std::string subject_id;
  int session_index = 0;
  std::string message;
};

struct ExtractReport {
  std::size_t extracted = 0;
  std::size_t cached = 0;
  std::vector<SessionError> errors;

  bool ok() const { return errors.empty(); }
};

struct ExtractOptions {
  std::filesystem::path cache_dir;
  std::filesystem::path lexicon_dir;
  bool force = false;
  bool write_csv = true;
  std::size_t workers = 1;
};

/// Extracts every session into `cache_dir/sessions/`, skipping sessions
/// whose cache is newer than their inputs, then writes the per-kind and
/// concatenated tables (.bin and optionally .csv) plus scores.csv for the
/// sessions that succeeded.
ExtractReport RunExtraction(const ManifestContents& manifest,
                            const ExtractOptions& options);

/// Table file stem for a source: "spontaneous", "sentence", "paragraph" or
/// "concatenated".
std::string TableStem(const std::string& source);

/// Canonical source names: "Q1".."Q7", "concatenated".
std::vector<std::string> AllSources();

/// Joins a cached table with scores.csv; rows ordered by subject, session.
Dataset LoadDataset(const std::filesystem::path& cache_dir,
                    const std::string& source, Measurement measurement);

}  // namespace wellvoice
