#include "wellvoice/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "wellvoice/acoustic.hpp"
#include "wellvoice/error.hpp"
#include "wellvoice/functionals.hpp"

namespace wellvoice {
namespace {

constexpr char kBinaryMagic[4] = {'W', 'V', 'F', 'T'};
constexpr std::uint32_t kBinaryVersion = 1;

void CheckFinite(const FeatureVector& v, std::string_view what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v.values[i])) {
      throw Error(ErrorCode::kMalformedFile,
                  std::string(what) + ": non-finite value in " + v.names[i]);
    }
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

void WriteU32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t ReadU32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorCode::kMalformedFile, "truncated feature binary");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void WriteString(std::ostream& out, const std::string& s) {
  WriteU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string ReadString(std::istream& in) {
  const std::uint32_t n = ReadU32(in);
  if (n > (1u << 20)) {
    throw Error(ErrorCode::kMalformedFile, "implausible string length");
  }
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) {
    throw Error(ErrorCode::kMalformedFile, "truncated feature binary");
  }
  return s;
}

void WriteF64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double ReadF64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw Error(ErrorCode::kMalformedFile, "truncated feature binary");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace

void FeatureVector::append(const FeatureVector& other,
                           const std::string& prefix) {
  names.reserve(names.size() + other.size());
  for (const auto& n : other.names) names.push_back(prefix + n);
  values.insert(values.end(), other.values.begin(), other.values.end());
}

std::string_view KindName(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::kSpontaneous: return "spontaneous";
    case ResponseKind::kSentence: return "sentence";
    case ResponseKind::kParagraph: return "paragraph";
  }
  return "sentence";
}

std::optional<ResponseKind> ParseKind(std::string_view name) {
  if (name == "spontaneous") return ResponseKind::kSpontaneous;
  if (name == "sentence") return ResponseKind::kSentence;
  if (name == "paragraph") return ResponseKind::kParagraph;
  return std::nullopt;
}

std::string QuestionName(int question) {
  return "Q" + std::to_string(question);
}

std::optional<int> ParseQuestion(std::string_view name) {
  if (name.size() != 2 || name[0] != 'Q') return std::nullopt;
  const int q = name[1] - '0';
  if (q < 1 || q > kQuestionCount) return std::nullopt;
  return q;
}

ResponseKind ProtocolKind(int question) {
  if (question == 1) return ResponseKind::kSpontaneous;
  if (question >= 2 && question <= 5) return ResponseKind::kSentence;
  if (question >= 6 && question <= 7) return ResponseKind::kParagraph;
  throw Error(ErrorCode::kInvalidArgument,
              "question out of range: " + std::to_string(question));
}

std::size_t ExpectedDim(ResponseKind kind) {
  return kind == ResponseKind::kSpontaneous ? kSpontaneousResponseDim
                                            : kReadResponseDim;
}

ResponseFeatures ExtractResponse(const Waveform& audio,
                                 const Transcript& transcript,
                                 ResponseKind kind, int question,
                                 const LexiconSet& lex) {
  const FrameStream frames = Frame(audio);
  FeatureVector v = ApplyFunctionals(ExtractFrameFeatures(frames));
  v.append(CommonFeatures(transcript, audio.duration_s(), lex));
  if (kind == ResponseKind::kSpontaneous) {
    v.append(SpontaneousFeatures(transcript, lex));
  } else {
    v.append(ReadFeatures(transcript, lex));
  }
  if (v.size() != ExpectedDim(kind)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "response vector has " + std::to_string(v.size()) +
                    " dims, expected " + std::to_string(ExpectedDim(kind)));
  }
  CheckFinite(v, QuestionName(question));
  return {question, kind, std::move(v)};
}

SessionFeatures Concatenate(std::vector<ResponseFeatures> responses) {
  SessionFeatures s;
  for (auto& r : responses) {
    if (r.question < 1 || r.question > kQuestionCount) {
      throw Error(ErrorCode::kIncompleteSession,
                  "question id out of range: " + std::to_string(r.question));
    }
    if (r.kind != ProtocolKind(r.question)) {
      throw Error(ErrorCode::kIncompleteSession,
                  QuestionName(r.question) + " has kind " +
                      std::string(KindName(r.kind)) + ", protocol expects " +
                      std::string(KindName(ProtocolKind(r.question))));
    }
    if (r.vector.size() != ExpectedDim(r.kind)) {
      throw Error(ErrorCode::kIncompleteSession,
                  QuestionName(r.question) + " has wrong dimension");
    }
    if (!s.per_question.emplace(r.question, std::move(r)).second) {
      throw Error(ErrorCode::kIncompleteSession, "duplicate question");
    }
  }
  for (int q = 1; q <= kQuestionCount; ++q) {
    if (!s.per_question.contains(q)) {
      throw Error(ErrorCode::kIncompleteSession,
                  "missing " + QuestionName(q));
    }
  }
  s.concatenated.names.reserve(kSessionDim);
  s.concatenated.values.reserve(kSessionDim);
  for (const auto& [q, r] : s.per_question) {
    s.concatenated.append(r.vector, QuestionName(q) + ".");
  }
  return s;
}

std::vector<std::string> ResponseFeatureNames(ResponseKind kind) {
  std::vector<std::string> names;
  for (const auto& col : FrameFeatureNames()) {
    for (auto f : kFunctionalNames) names.push_back(col + "." + std::string(f));
  }
  // Linguistic names are fixed; derive them from a minimal transcript.
  Transcript t;
  t.tokens.push_back({"a", 0.0, 0.1, std::nullopt});
  t.prompt_text = "a";
  LexiconSet lex;
  lex.word_frequency["a"] = 1;
  lex.IndexFrequencies();
  for (const auto& n : CommonFeatures(t, 1.0, lex).names) names.push_back(n);
  const auto extra = kind == ResponseKind::kSpontaneous
                         ? SpontaneousFeatures(t, lex)
                         : ReadFeatures(t, lex);
  for (const auto& n : extra.names) names.push_back(n);
  return names;
}

void WriteFeatureCsv(const std::filesystem::path& path, const FeatureTable& t) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << "subject_id,session_index,question_id";
  for (const auto& n : t.names) out << ',' << n;
  out << '\n';
  for (const auto& row : t.rows) {
    if (row.values.size() != t.names.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "row width differs from header");
    }
    if (row.subject_id.find(',') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "subject id contains a comma");
    }
    out << row.subject_id << ',' << row.session_index << ',' << row.question_id;
    for (double v : row.values) out << ',' << FormatDouble(v);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

FeatureTable ReadFeatureCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  FeatureTable t;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": empty file");
  }
  auto header = SplitCsv(line);
  if (header.size() < 3 || header[0] != "subject_id" ||
      header[1] != "session_index" || header[2] != "question_id") {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": bad header");
  }
  t.names.assign(std::make_move_iterator(header.begin() + 3),
                 std::make_move_iterator(header.end()));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitCsv(line);
    if (fields.size() != t.names.size() + 3) {
      throw Error(ErrorCode::kMalformedFile,
                  path.string() + ":" + std::to_string(line_no) +
                      ": wrong field count");
    }
    FeatureTable::Row row;
    row.subject_id = fields[0];
    row.session_index = std::stoi(fields[1]);
    row.question_id = fields[2];
    row.values.resize(t.names.size());
    for (std::size_t i = 0; i < t.names.size(); ++i) {
      const auto& f = fields[i + 3];
      const auto res =
          std::from_chars(f.data(), f.data() + f.size(), row.values[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw Error(ErrorCode::kMalformedFile,
                    path.string() + ":" + std::to_string(line_no) +
                        ": bad number '" + f + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void WriteFeatureBinary(const std::filesystem::path& path,
                        const FeatureTable& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(kBinaryMagic, 4);
  WriteU32(out, kBinaryVersion);
  WriteU32(out, static_cast<std::uint32_t>(t.names.size()));
  for (const auto& n : t.names) WriteString(out, n);
  WriteU32(out, static_cast<std::uint32_t>(t.rows.size()));
  for (const auto& row : t.rows) {
    if (row.values.size() != t.names.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "row width differs from header");
    }
    WriteString(out, row.subject_id);
    WriteU32(out, static_cast<std::uint32_t>(row.session_index));
    WriteString(out, row.question_id);
    for (double v : row.values) WriteF64(out, v);
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

FeatureTable ReadFeatureBinary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": bad magic");
  }
  if (ReadU32(in) != kBinaryVersion) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": bad version");
  }
  FeatureTable t;
  const std::uint32_t n_names = ReadU32(in);
  t.names.reserve(n_names);
  for (std::uint32_t i = 0; i < n_names; ++i) t.names.push_back(ReadString(in));
  const std::uint32_t n_rows = ReadU32(in);
  for (std::uint32_t r = 0; r < n_rows; ++r) {
    FeatureTable::Row row;
    row.subject_id = ReadString(in);
    row.session_index = static_cast<int>(ReadU32(in));
    row.question_id = ReadString(in);
    row.values.resize(n_names);
    for (auto& v : row.values) v = ReadF64(in);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace wellvoice
