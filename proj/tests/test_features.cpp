#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "helpers.hpp"
#include "wellvoice/error.hpp"
#include "wellvoice/features.hpp"

using namespace wellvoice;
using namespace wellvoice::testing;

namespace {

LexiconSet Lex() {
  LexiconSet lex;
  lex.word_frequency = {{"the", 100}, {"sun", 10}, {"is", 80}, {"warm", 5}};
  lex.depression_terms = {"tired"};
  lex.IndexFrequencies();
  return lex;
}

Transcript Said(bool read) {
  Transcript t;
  t.tokens = {{"the", 0.1, 0.3, {}}, {"sun", 0.35, 0.6, {}}, {"is", 0.8, 0.9, {}},
              {"warm", 1.0, 1.4, {}}};
  if (read) t.prompt_text = "The sun is very warm.";
  return t;
}

ResponseFeatures Fake(int q, double fill) {
  const ResponseKind kind = ProtocolKind(q);
  ResponseFeatures r{q, kind, {}};
  for (const auto& n : ResponseFeatureNames(kind)) r.vector.push(n, fill + q);
  return r;
}

std::vector<ResponseFeatures> FullSession() {
  std::vector<ResponseFeatures> v;
  for (int q = 7; q >= 1; --q) v.push_back(Fake(q, 0.5));
  return v;
}

}  // namespace

TEST_CASE("dimension constants") {
  CHECK(kReadResponseDim == 2337 + 17 + 3);
  CHECK(kSpontaneousResponseDim == 2337 + 17 + 10);
  CHECK(kSessionDim == 16506);
  CHECK(ResponseFeatureNames(ResponseKind::kSentence).size() == 2357);
  CHECK(ResponseFeatureNames(ResponseKind::kParagraph).size() == 2357);
  CHECK(ResponseFeatureNames(ResponseKind::kSpontaneous).size() == 2364);
}

TEST_CASE("protocol and names") {
  CHECK(ProtocolKind(1) == ResponseKind::kSpontaneous);
  for (int q = 2; q <= 5; ++q) CHECK(ProtocolKind(q) == ResponseKind::kSentence);
  CHECK(ProtocolKind(6) == ResponseKind::kParagraph);
  CHECK(ProtocolKind(7) == ResponseKind::kParagraph);
  CHECK(QuestionName(3) == "Q3");
  CHECK(ParseQuestion("Q7") == 7);
  CHECK(!ParseQuestion("Q8"));
  CHECK(!ParseQuestion("x"));
  CHECK(ParseKind(KindName(ResponseKind::kParagraph)) == ResponseKind::kParagraph);
}

TEST_CASE("response extraction dims and names") {
  const auto lex = Lex();
  const Waveform w = Wave(Sawtooth(140.0, 1.5));
  const auto read = ExtractResponse(w, Said(true), ResponseKind::kSentence, 2, lex);
  CHECK(read.vector.size() == 2357);
  CHECK(read.vector.names == ResponseFeatureNames(ResponseKind::kSentence));
  const auto spont = ExtractResponse(w, Said(false), ResponseKind::kSpontaneous, 1, lex);
  CHECK(spont.vector.size() == 2364);
  CHECK(spont.vector.names == ResponseFeatureNames(ResponseKind::kSpontaneous));
  for (double v : spont.vector.values) CHECK(std::isfinite(v));
  // Read responses need a prompt.
  CHECK_THROWS_AS(ExtractResponse(w, Said(false), ResponseKind::kSentence, 2, lex), Error);
}

TEST_CASE("concatenation orders Q1..Q7 and prefixes names") {
  const auto s = Concatenate(FullSession());
  REQUIRE(s.concatenated.size() == kSessionDim);
  CHECK(s.concatenated.names.front() == "Q1.mfcc_c0.mean");
  CHECK(s.concatenated.values.front() == 1.5);
  CHECK(s.concatenated.values.back() == 7.5);
  CHECK(s.concatenated.names[kSpontaneousResponseDim].rfind("Q2.", 0) == 0);
  CHECK(std::set<std::string>(s.concatenated.names.begin(), s.concatenated.names.end()).size() ==
        kSessionDim);
}

TEST_CASE("concatenation rejects incomplete sessions") {
  auto missing = FullSession();
  missing.erase(missing.begin() + 4);  // drops Q3
  try {
    Concatenate(missing);
    FAIL("expected IncompleteSession");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIncompleteSession);
    CHECK(std::string(e.what()).find("Q3") != std::string::npos);
  }

  auto wrong_kind = FullSession();
  wrong_kind[0].kind = ResponseKind::kSentence;  // Q7 should be a paragraph
  CHECK_THROWS_AS(Concatenate(wrong_kind), Error);

  auto dup = FullSession();
  dup.push_back(Fake(3, 0.0));
  CHECK_THROWS_AS(Concatenate(dup), Error);

  auto short_vec = FullSession();
  short_vec[0].vector.values.pop_back();
  short_vec[0].vector.names.pop_back();
  CHECK_THROWS_AS(Concatenate(short_vec), Error);
}

TEST_CASE("feature tables round trip through CSV and binary") {
  FeatureTable t;
  t.names = {"a.mean", "b.slope", "c"};
  t.rows.push_back({"S001", 1, "Q1", {1.0, -2.5e-300, 0.1}});
  t.rows.push_back({"S002", 3, "ALL", {std::numeric_limits<double>::max(), 1.0 / 3, -0.0}});
  TempDir dir("tables");
  WriteFeatureCsv(dir.path() / "t.csv", t);
  WriteFeatureBinary(dir.path() / "t.bin", t);
  for (const auto& back : {ReadFeatureCsv(dir.path() / "t.csv"),
                           ReadFeatureBinary(dir.path() / "t.bin")}) {
    CHECK(back.names == t.names);
    REQUIRE(back.rows.size() == 2);
    for (std::size_t r = 0; r < 2; ++r) {
      CHECK(back.rows[r].subject_id == t.rows[r].subject_id);
      CHECK(back.rows[r].session_index == t.rows[r].session_index);
      CHECK(back.rows[r].question_id == t.rows[r].question_id);
      CHECK(back.rows[r].values == t.rows[r].values);  // bit-exact
    }
  }
}

TEST_CASE("corrupt tables are rejected") {
  TempDir dir("bad");
  WriteText(dir.path() / "bad.bin", "WVFT\x01");
  CHECK_THROWS_AS(ReadFeatureBinary(dir.path() / "bad.bin"), Error);
  WriteText(dir.path() / "magic.bin", "NOPE0000");
  CHECK_THROWS_AS(ReadFeatureBinary(dir.path() / "magic.bin"), Error);
  WriteText(dir.path() / "bad.csv", "subject_id,session_index,question_id,a\nS1,1,Q1\n");
  CHECK_THROWS_AS(ReadFeatureCsv(dir.path() / "bad.csv"), Error);
  CHECK_THROWS_AS(ReadFeatureCsv(dir.path() / "none.csv"), Error);
}
