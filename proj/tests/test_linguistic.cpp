#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "wellvoice/error.hpp"
#include "wellvoice/linguistic.hpp"
#include "wellvoice/rng.hpp"

using namespace wellvoice;

namespace {

Transcript Make(std::vector<std::tuple<std::string, double, double>> words) {
  Transcript t;
  for (auto& [w, s, e] : words) t.tokens.push_back({w, s, e, std::nullopt});
  return t;
}

double Get(const FeatureVector& fv, const std::string& name) {
  const auto it = std::find(fv.names.begin(), fv.names.end(), name);
  REQUIRE_MESSAGE(it != fv.names.end(), name);
  return fv.values[static_cast<std::size_t>(it - fv.names.begin())];
}

std::vector<std::string> Words(const std::string& s) { return NormalizeWords(s); }

// Textbook Levenshtein distance.
std::int64_t Levenshtein(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::vector<std::int64_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

LexiconSet SmallLexicon() {
  LexiconSet lex;
  lex.word_frequency = {{"the", 1000}, {"cat", 50}, {"sad", 20}, {"happy", 20},
                        {"tired", 5},  {"i", 900}, {"feel", 100}};
  lex.depression_terms = {"sad", "tired", "hopeless"};
  lex.positive_valence = {"happy", "good"};
  lex.negative_valence = {"sad", "bad"};
  lex.IndexFrequencies();
  return lex;
}

}  // namespace

TEST_CASE("normalization and syllables") {
  CHECK(Words("The cat, sat-down!") == std::vector<std::string>{"the", "cat", "sat", "down"});
  CHECK(Words("don't") == std::vector<std::string>{"don't"});
  CHECK(CountSyllables("beautiful") == 3);
  CHECK(CountSyllables("cat") == 1);
  CHECK(CountSyllables("happy") == 2);  // y counts as a vowel
  CHECK(CountSyllables("rhythm") == 1);
  CHECK(CountSyllables("hmm") == 1);
}

TEST_CASE("alignment examples") {
  auto c = Align(Words("the cat sat"), Words("the dog sat down"));
  CHECK(c.substitutions == 1);
  CHECK(c.insertions == 1);
  CHECK(c.deletions == 0);
  CHECK(c.hits == 2);
  CHECK(c.ref_len == 3);

  c = Align(Words("a b c d"), Words("a c d"));
  CHECK(c.deletions == 1);
  CHECK(c.errors() == 1);

  c = Align(Words("a b"), {});
  CHECK(c.deletions == 2);
  CHECK_THROWS_AS(Align({}, Words("a")), Error);
}

TEST_CASE("alignment totals equal Levenshtein distance") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> ref(1 + UniformIndex(rng, 12)), hyp(UniformIndex(rng, 12));
    for (auto& w : ref) w = vocab[UniformIndex(rng, vocab.size())];
    for (auto& w : hyp) w = vocab[UniformIndex(rng, vocab.size())];
    const auto c = Align(ref, hyp);
    CHECK(c.errors() == Levenshtein(ref, hyp));
    CHECK(c.hits + c.substitutions + c.deletions == static_cast<std::int64_t>(ref.size()));
    CHECK(c.hits + c.substitutions + c.insertions == static_cast<std::int64_t>(hyp.size()));
  }
}

TEST_CASE("read features are rates over reference length") {
  auto t = Make({{"the", 0, 0.2}, {"dog", 0.3, 0.5}, {"sat", 0.6, 0.8}, {"down", 0.9, 1.1}});
  t.prompt_text = "The cat sat.";
  const auto fv = ReadFeatures(t, LexiconSet{});
  REQUIRE(fv.size() == kReadLinguisticDim);
  CHECK(Get(fv, "read.insertion_rate") == doctest::Approx(1.0 / 3));
  CHECK(Get(fv, "read.deletion_rate") == 0.0);
  CHECK(Get(fv, "read.substitution_rate") == doctest::Approx(1.0 / 3));

  t.prompt_text.reset();
  CHECK_THROWS_AS(ReadFeatures(t, LexiconSet{}), Error);
}

TEST_CASE("common features on a hand-built transcript") {
  const auto t = Make({{"uh", 0.0, 0.3}, {"the", 0.4, 0.6}, {"the", 0.7, 0.9}, {"cat", 1.2, 1.6}});
  const auto fv = CommonFeatures(t, 2.0, LexiconSet{});
  REQUIRE(fv.size() == kCommonLinguisticDim);
  CHECK(Get(fv, "ling.filler_ratio") == doctest::Approx(0.25));
  CHECK(Get(fv, "ling.repetition_ratio") == doctest::Approx(0.25));
  CHECK(Get(fv, "ling.type_token_ratio") == doctest::Approx(0.75));
  CHECK(Get(fv, "ling.speech_rate") == doctest::Approx(2.0));
  CHECK(Get(fv, "ling.articulation_rate") == doctest::Approx(4.0 / 1.1));
  CHECK(Get(fv, "ling.pause_ratio") == doctest::Approx(0.45));
  CHECK(Get(fv, "ling.mean_pause_dur") == doctest::Approx(0.3));
  CHECK(Get(fv, "ling.pauses_per_min") == doctest::Approx(30.0));
  CHECK(Get(fv, "ling.mean_word_dur") == doctest::Approx(1.1 / 4));
  // "the" is not in the fallback closed classes; "uh" neither.
  CHECK(Get(fv, "ling.pos_other") == doctest::Approx(1.0));
  double pos_sum = 0;
  for (const char* p : {"noun", "verb", "adj", "adv", "pron", "other"}) {
    pos_sum += Get(fv, std::string("ling.pos_") + p);
  }
  CHECK(pos_sum == doctest::Approx(1.0));
}

TEST_CASE("supplied POS tags take precedence over the fallback") {
  auto t = Make({{"i", 0, 0.1}, {"run", 0.2, 0.4}, {"fast", 0.5, 0.7}});
  t.tokens[1].pos = PosTag::kVerb;
  t.tokens[2].pos = PosTag::kAdv;
  const auto fv = CommonFeatures(t, 1.0, LexiconSet{});
  CHECK(Get(fv, "ling.pos_pron") == doctest::Approx(1.0 / 3));
  CHECK(Get(fv, "ling.pos_verb") == doctest::Approx(1.0 / 3));
  CHECK(Get(fv, "ling.pos_adv") == doctest::Approx(1.0 / 3));
}

TEST_CASE("overlapping tokens do not double count speech") {
  const auto t = Make({{"a", 0.0, 1.0}, {"b", 0.5, 1.5}});
  const auto fv = CommonFeatures(t, 2.0, LexiconSet{});
  CHECK(Get(fv, "ling.pause_ratio") == doctest::Approx(0.25));
}

TEST_CASE("common feature errors") {
  CHECK_THROWS_AS(CommonFeatures(Transcript{}, 1.0, LexiconSet{}), Error);
  CHECK_THROWS_AS(CommonFeatures(Make({{"a", 0, 1}}), 0.0, LexiconSet{}), Error);
}

TEST_CASE("spontaneous features on a hand-built transcript") {
  const auto lex = SmallLexicon();
  const auto t = Make({{"i", 0, 0.1}, {"feel", 0.2, 0.4}, {"sad", 0.5, 0.7},
                       {"sad", 0.8, 1.0}, {"zzz", 1.1, 1.3}});
  const auto fv = SpontaneousFeatures(t, lex);
  REQUIRE(fv.size() == kSpontaneousLinguisticDim);
  CHECK(Get(fv, "spont.depression_term_ratio") == doctest::Approx(0.4));
  CHECK(Get(fv, "spont.depression_term_types") == doctest::Approx(0.25));
  CHECK(Get(fv, "spont.sentiment_pos") == 0.0);
  CHECK(Get(fv, "spont.sentiment_neg") == doctest::Approx(0.4));
  // Sorted popularities: zzz 0, sad 3/7, sad 3/7, feel 5/7, i 6/7.
  CHECK(Get(fv, "spont.popularity_p50") == doctest::Approx(3.0 / 7));
  CHECK(Get(fv, "spont.popularity_mean") == doctest::Approx((6.0 + 5 + 3 + 3) / 35));
}

TEST_CASE("popularity is the rank percentile of the count") {
  const auto lex = SmallLexicon();
  CHECK(lex.Popularity("the") == 1.0);
  CHECK(lex.Popularity("tired") == doctest::Approx(1.0 / 7));
  CHECK(lex.Popularity("happy") == doctest::Approx(3.0 / 7));
  CHECK(lex.Popularity("unknown") == 0.0);
  CHECK(lex.Popularity("THE") == 1.0);
}

TEST_CASE("spontaneous features match a recount over random transcripts") {
  const auto lex = SmallLexicon();
  const std::vector<std::string> vocab{"the", "cat", "sad", "happy", "tired", "i",
                                       "feel", "hopeless", "good", "bad", "zzz"};
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    Transcript t;
    const std::size_t n = 1 + UniformIndex(rng, 40);
    for (std::size_t i = 0; i < n; ++i) {
      t.tokens.push_back({vocab[UniformIndex(rng, vocab.size())], 0.3 * i, 0.3 * i + 0.2, {}});
    }
    std::size_t dep = 0, pos = 0, neg = 0;
    std::set<std::string> types, dep_types;
    double pop_sum = 0;
    for (const auto& tok : t.tokens) {
      types.insert(tok.text);
      if (lex.depression_terms.count(tok.text)) {
        ++dep;
        dep_types.insert(tok.text);
      }
      pos += lex.positive_valence.count(tok.text);
      neg += lex.negative_valence.count(tok.text);
      std::size_t le = 0;
      const auto it = lex.word_frequency.find(tok.text);
      if (it != lex.word_frequency.end()) {
        for (const auto& [w, c] : lex.word_frequency) le += c <= it->second;
        pop_sum += static_cast<double>(le) / lex.word_frequency.size();
      }
    }
    const auto fv = SpontaneousFeatures(t, lex);
    CHECK(Get(fv, "spont.depression_term_ratio") == doctest::Approx(double(dep) / n));
    CHECK(Get(fv, "spont.depression_term_types") ==
          doctest::Approx(double(dep_types.size()) / types.size()));
    CHECK(Get(fv, "spont.sentiment_pos") == doctest::Approx(double(pos) / n));
    CHECK(Get(fv, "spont.sentiment_neg") == doctest::Approx(double(neg) / n));
    CHECK(Get(fv, "spont.popularity_mean") == doctest::Approx(pop_sum / n));
    for (double v : fv.values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("spontaneous features need a frequency table") {
  CHECK_THROWS_AS(SpontaneousFeatures(Make({{"a", 0, 1}}), LexiconSet{}), Error);
}

TEST_CASE("transcript JSON round trip and validation") {
  auto t = Make({{"hello", 0.1, 0.4}, {"world", 0.5, 0.9}});
  t.tokens[0].pos = PosTag::kOther;
  t.prompt_text = "Hello world";
  const auto back = ParseTranscriptJson(TranscriptToJson(t));
  REQUIRE(back.tokens.size() == 2);
  CHECK(back.tokens[1].text == "world");
  CHECK(back.tokens[1].end_s == 0.9);
  CHECK(back.tokens[0].pos == PosTag::kOther);
  CHECK(!back.tokens[1].pos);
  CHECK(back.prompt_text == "Hello world");

  CHECK(ParseTranscriptJson(R"({"tokens":[{"text":"HeLLo","start_s":0,"end_s":1}]})")
            .tokens[0].text == "hello");
  CHECK_THROWS_AS(ParseTranscriptJson("{"), Error);
  CHECK_THROWS_AS(ParseTranscriptJson(R"({"tokens":[{"text":"a","start_s":1,"end_s":0.5}]})"), Error);
  CHECK_THROWS_AS(ParseTranscriptJson(
                      R"({"tokens":[{"text":"a","start_s":1,"end_s":2},{"text":"b","start_s":0.5,"end_s":2}]})"),
                  Error);
  CHECK_THROWS_AS(ParseTranscriptJson(
                      R"({"tokens":[{"text":"a","start_s":0,"end_s":1,"pos":"BOGUS"}]})"),
                  Error);
}

TEST_CASE("lexicon directory loading") {
  testing::TempDir dir("lex");
  testing::WriteText(dir.path() / "frequency.tsv", "The\t10\ncat\t3\nthe\t5\n\n");
  testing::WriteText(dir.path() / "depression.txt", "# comment\nSad\n\n");
  testing::WriteText(dir.path() / "positive.txt", "happy\n");
  testing::WriteText(dir.path() / "negative.txt", "bad\n");
  auto lex = LexiconSet::LoadDirectory(dir.path());
  CHECK(lex.word_frequency.at("the") == 15);
  CHECK(lex.depression_terms == std::unordered_set<std::string>{"sad"});
  CHECK(lex.fillers.count("um") == 1);
  CHECK(lex.Popularity("cat") == doctest::Approx(0.5));

  testing::WriteText(dir.path() / "fillers.txt", "erm\n");
  CHECK(LexiconSet::LoadDirectory(dir.path()).fillers ==
        std::unordered_set<std::string>{"erm"});

  testing::WriteText(dir.path() / "frequency.tsv", "nocount\n");
  CHECK_THROWS_AS(LexiconSet::LoadDirectory(dir.path()), Error);
  CHECK_THROWS_AS(LexiconSet::LoadDirectory(dir.path() / "missing"), Error);
}
