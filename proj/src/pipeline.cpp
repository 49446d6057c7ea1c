#include "wellvoice/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "wellvoice/error.hpp"
#include "wellvoice/parallel.hpp"

namespace wellvoice {
namespace {

namespace fs = std::filesystem;

std::string SessionKey(const std::string& subject, int session) {
  return subject + "_s" + std::to_string(session);
}

fs::path SessionCachePath(const fs::path& cache_dir, const Session& s) {
  return cache_dir / "sessions" / (SessionKey(s.subject_id, s.session_index) + ".bin");
}

fs::file_time_type NewestInput(const Session& s, const fs::path& lexicon_dir) {
  fs::file_time_type newest = fs::file_time_type::min();
  auto consider = [&](const fs::path& p) {
    std::error_code ec;
    const auto t = fs::last_write_time(p, ec);
    if (ec) {
      newest = fs::file_time_type::max();
    } else {
      newest = std::max(newest, t);
    }
  };
  for (const auto& [q, ref] : s.responses) {
    consider(ref.audio);
    consider(ref.transcript);
  }
  if (!lexicon_dir.empty()) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(lexicon_dir, ec)) {
      consider(entry.path());
    }
  }
  return newest;
}

bool UpToDate(const fs::path& cache, fs::file_time_type newest_input) {
  std::error_code ec;
  const auto t = fs::last_write_time(cache, ec);
  return !ec && t >= newest_input;
}

// Slices a concatenated session row back into per-question vectors.
std::map<int, std::vector<double>> SplitConcatenated(const std::vector<double>& all) {
  std::map<int, std::vector<double>> out;
  std::size_t offset = 0;
  for (int q = 1; q <= kQuestionCount; ++q) {
    const std::size_t dim = ExpectedDim(ProtocolKind(q));
    out[q].assign(all.begin() + offset, all.begin() + offset + dim);
    offset += dim;
  }
  return out;
}

}  // namespace

SessionFeatures ExtractSession(const Session& session, const LexiconSet& lex) {
  std::vector<ResponseFeatures> responses;
  for (int q = 1; q <= kQuestionCount; ++q) {
    const auto it = session.responses.find(q);
    if (it == session.responses.end()) {
      throw Error(ErrorCode::kIncompleteSession, "missing " + QuestionName(q));
    }
    const ResponseRef& ref = it->second;
    try {
      const Waveform audio = DecodeWav(ref.audio);
      const Transcript transcript = LoadTranscript(ref.transcript);
      responses.push_back(ExtractResponse(audio, transcript, ref.kind, q, lex));
    } catch (const Error& e) {
      throw Error(e.code(), QuestionName(q) + ": " + e.what());
    }
  }
  return Concatenate(std::move(responses));
}

std::string TableStem(const std::string& source) {
  if (source == "concatenated") return "concatenated";
  const auto q = ParseQuestion(source);
  if (!q) throw Error(ErrorCode::kInvalidArgument, "unknown source " + source);
  return std::string(KindName(ProtocolKind(*q)));
}

std::vector<std::string> AllSources() {
  std::vector<std::string> out;
  for (int q = 1; q <= kQuestionCount; ++q) out.push_back(QuestionName(q));
  out.push_back("concatenated");
  return out;
}

ExtractReport RunExtraction(const ManifestContents& manifest,
                            const ExtractOptions& options) {
  const LexiconSet lex = LexiconSet::LoadDirectory(options.lexicon_dir);
  fs::create_directories(options.cache_dir / "sessions");

  const auto& sessions = manifest.sessions;
  std::vector<char> was_cached(sessions.size(), 0);
  std::vector<std::string> failure(sessions.size());
  std::vector<FeatureTable::Row> rows(sessions.size());
  const std::vector<std::string> all_names = [] {
    std::vector<std::string> names;
    for (int q = 1; q <= kQuestionCount; ++q) {
      for (const auto& n : ResponseFeatureNames(ProtocolKind(q))) {
        names.push_back(QuestionName(q) + "." + n);
      }
    }
    return names;
  }();

  ParallelFor(sessions.size(), options.workers, [&](std::size_t i) {
    const Session& s = sessions[i];
    const fs::path cache = SessionCachePath(options.cache_dir, s);
    try {
      if (!options.force && UpToDate(cache, NewestInput(s, options.lexicon_dir))) {
        FeatureTable t = ReadFeatureBinary(cache);
        if (t.rows.size() == 1 && t.names == all_names) {
          rows[i] = std::move(t.rows[0]);
          was_cached[i] = 1;
          return;
        }
      }
      SessionFeatures f = ExtractSession(s, lex);
      FeatureTable t;
      t.names = f.concatenated.names;
      t.rows.push_back({s.subject_id, s.session_index, "ALL", f.concatenated.values});
      WriteFeatureBinary(cache, t);
      rows[i] = std::move(t.rows[0]);
    } catch (const std::exception& e) {
      failure[i] = e.what();
    }
  });

  ExtractReport report;
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (!failure[i].empty()) {
      report.errors.push_back(
          {sessions[i].subject_id, sessions[i].session_index, failure[i]});
      continue;
    }
    (was_cached[i] ? report.cached : report.extracted) += 1;
    good.push_back(i);
  }
  std::sort(good.begin(), good.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(sessions[a].subject_id, sessions[a].session_index) <
           std::tie(sessions[b].subject_id, sessions[b].session_index);
  });

  std::map<std::string, FeatureTable> tables;
  for (ResponseKind kind : {ResponseKind::kSpontaneous, ResponseKind::kSentence,
                            ResponseKind::kParagraph}) {
    tables[std::string(KindName(kind))].names = ResponseFeatureNames(kind);
  }
  FeatureTable& concatenated = tables["concatenated"];
  concatenated.names = all_names;
  std::ostringstream scores;
  scores << "subject_id,session_index,stai,gad7,psqi,panas\n";
  for (std::size_t i : good) {
    const Session& s = sessions[i];
    for (auto& [q, values] : SplitConcatenated(rows[i].values)) {
      tables[std::string(KindName(ProtocolKind(q)))].rows.push_back(
          {s.subject_id, s.session_index, QuestionName(q), std::move(values)});
    }
    concatenated.rows.push_back(std::move(rows[i]));
    scores << s.subject_id << ',' << s.session_index << ',' << s.scores.stai << ','
           << s.scores.gad7 << ',' << s.scores.psqi << ',' << s.scores.panas << '\n';
  }
  for (const auto& [stem, table] : tables) {
    WriteFeatureBinary(options.cache_dir / (stem + ".bin"), table);
    if (options.write_csv) WriteFeatureCsv(options.cache_dir / (stem + ".csv"), table);
  }
  std::ofstream out(options.cache_dir / "scores.csv", std::ios::trunc);
  out << scores.str();
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write scores.csv");
  return report;
}

Dataset LoadDataset(const fs::path& cache_dir, const std::string& source,
                    Measurement measurement) {
  const FeatureTable table = ReadFeatureBinary(cache_dir / (TableStem(source) + ".bin"));
  const std::string question = source == "concatenated" ? "ALL" : source;

  std::ifstream in(cache_dir / "scores.csv");
  if (!in) throw Error(ErrorCode::kIoFailure, "missing scores.csv in " + cache_dir.string());
  std::map<std::pair<std::string, int>, Scores> scores;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string subject, field;
    std::vector<int> v;
    std::getline(ls, subject, ',');
    while (std::getline(ls, field, ',')) v.push_back(std::stoi(field));
    if (v.size() != 5) throw Error(ErrorCode::kMalformedFile, "scores.csv: " + line);
    scores[{subject, v[0]}] = {v[1], v[2], v[3], v[4]};
  }

  std::vector<const FeatureTable::Row*> picked;
  for (const auto& row : table.rows) {
    if (row.question_id == question) picked.push_back(&row);
  }
  std::sort(picked.begin(), picked.end(), [](const auto* a, const auto* b) {
    return std::tie(a->subject_id, a->session_index) <
           std::tie(b->subject_id, b->session_index);
  });

  Dataset data;
  data.names = table.names;
  data.features.resize(static_cast<Eigen::Index>(picked.size()),
                       static_cast<Eigen::Index>(table.names.size()));
  for (std::size_t r = 0; r < picked.size(); ++r) {
    const auto& row = *picked[r];
    const auto it = scores.find({row.subject_id, row.session_index});
    if (it == scores.end()) {
      throw Error(ErrorCode::kMalformedFile,
                  "no scores for " + SessionKey(row.subject_id, row.session_index));
    }
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          row.values[c];
    }
    data.subject_ids.push_back(row.subject_id);
    data.targets.push_back(it->second.get(measurement));
  }
  return data;
}

}  // namespace wellvoice
