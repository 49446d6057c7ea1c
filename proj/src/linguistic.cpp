#include "wellvoice/linguistic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "wellvoice/error.hpp"
#include "wellvoice/functionals.hpp"

namespace wellvoice {
namespace {

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

const char* PosName(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kAdv: return "ADV";
    case PosTag::kPron: return "PRON";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

bool IsVowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

double MeanOf(const std::vector<double>& v) {
  return v.empty() ? 0.0
                   : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double StdOf(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = MeanOf(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / v.size());
}

}  // namespace

std::optional<PosTag> ParsePosTag(std::string_view tag) {
  const std::string t = ToLower(tag);
  if (t == "noun") return PosTag::kNoun;
  if (t == "verb") return PosTag::kVerb;
  if (t == "adj") return PosTag::kAdj;
  if (t == "adv") return PosTag::kAdv;
  if (t == "pron") return PosTag::kPron;
  if (t == "other") return PosTag::kOther;
  return std::nullopt;
}

void ValidateTranscript(const Transcript& t) {
  double prev_start = 0.0;
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    const auto& tok = t.tokens[i];
    if (!(tok.start_s >= 0.0) || !(tok.end_s >= tok.start_s)) {
      throw Error(ErrorCode::kMalformedFile,
                  "token " + std::to_string(i) + " has invalid times");
    }
    if (tok.start_s < prev_start) {
      throw Error(ErrorCode::kMalformedFile,
                  "token starts decrease at index " + std::to_string(i));
    }
    prev_start = tok.start_s;
  }
}

Transcript ParseTranscriptJson(std::string_view json_text) {
  Transcript t;
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& tok : j.at("tokens")) {
      Token token;
      token.text = ToLower(tok.at("text").get<std::string>());
      token.start_s = tok.at("start_s").get<double>();
      token.end_s = tok.at("end_s").get<double>();
      if (tok.contains("pos") && !tok["pos"].is_null()) {
        token.pos = ParsePosTag(tok["pos"].get<std::string>());
        if (!token.pos) {
          throw Error(ErrorCode::kMalformedFile,
                      "unknown POS tag " + tok["pos"].get<std::string>());
        }
      }
      t.tokens.push_back(std::move(token));
    }
    if (j.contains("prompt_text") && !j["prompt_text"].is_null()) {
      t.prompt_text = j["prompt_text"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile,
                std::string("transcript JSON: ") + e.what());
  }
  ValidateTranscript(t);
  return t;
}

Transcript LoadTranscript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseTranscriptJson(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string TranscriptToJson(const Transcript& t) {
  nlohmann::json j;
  j["tokens"] = nlohmann::json::array();
  for (const auto& tok : t.tokens) {
    nlohmann::json jt{{"text", tok.text},
                      {"start_s", tok.start_s},
                      {"end_s", tok.end_s}};
    if (tok.pos) jt["pos"] = PosName(*tok.pos);
    j["tokens"].push_back(std::move(jt));
  }
  if (t.prompt_text) j["prompt_text"] = *t.prompt_text;
  return j.dump(1);
}

std::unordered_set<std::string> LexiconSet::DefaultFillers() {
  return {"uh", "um", "er", "ah", "hmm", "like"};
}

void LexiconSet::IndexFrequencies() {
  sorted_counts_.clear();
  sorted_counts_.reserve(word_frequency.size());
  for (const auto& [word, count] : word_frequency) {
    sorted_counts_.push_back(count);
  }
  std::sort(sorted_counts_.begin(), sorted_counts_.end());
}

double LexiconSet::Popularity(std::string_view word) const {
  const auto it = word_frequency.find(ToLower(word));
  if (it == word_frequency.end()) return 0.0;
  if (sorted_counts_.size() != word_frequency.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "frequency index stale; call IndexFrequencies()");
  }
  const auto at_or_below = std::upper_bound(sorted_counts_.begin(),
                                            sorted_counts_.end(), it->second) -
                           sorted_counts_.begin();
  return static_cast<double>(at_or_below) / sorted_counts_.size();
}

std::unordered_set<std::string> LoadTermList(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::unordered_set<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    const std::string term = ToLower(Trim(line));
    if (term.empty() || term[0] == '#') continue;
    terms.insert(term);
  }
  return terms;
}

std::unordered_map<std::string, std::int64_t> LoadFrequencyTable(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::unordered_map<std::string, std::int64_t> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kMalformedFile,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected word<TAB>count");
    }
    const std::string word = ToLower(Trim(line.substr(0, tab)));
    try {
      table[word] += std::stoll(Trim(line.substr(tab + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kMalformedFile,
                  path.string() + ":" + std::to_string(line_no) +
                      ": bad count");
    }
  }
  return table;
}

LexiconSet LexiconSet::LoadDirectory(const std::filesystem::path& dir) {
  LexiconSet lex;
  lex.word_frequency = LoadFrequencyTable(dir / "frequency.tsv");
  lex.depression_terms = LoadTermList(dir / "depression.txt");
  lex.positive_valence = LoadTermList(dir / "positive.txt");
  lex.negative_valence = LoadTermList(dir / "negative.txt");
  if (std::filesystem::exists(dir / "fillers.txt")) {
    lex.fillers = LoadTermList(dir / "fillers.txt");
  }
  lex.IndexFrequencies();
  return lex;
}

std::vector<std::string> NormalizeWords(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c) || c == '\'') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c) || c == '-') {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

int CountSyllables(std::string_view word) {
  int groups = 0;
  bool in_group = false;
  for (char raw : word) {
    const bool v =
        IsVowel(static_cast<char>(std::tolower(static_cast<unsigned char>(raw))));
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return std::max(groups, 1);
}

PosTag FallbackPos(std::string_view word) {
  static const std::unordered_set<std::string> kPronouns{
      "i",     "me",    "my",     "mine",  "myself", "you",   "your",
      "yours", "he",    "him",    "his",   "she",    "her",   "hers",
      "it",    "its",   "we",     "us",    "our",    "ours",  "they",
      "them",  "their", "theirs", "this",  "that",   "these", "those",
      "who",   "whom",  "what",   "which", "someone", "something",
      "everyone", "everything", "nobody", "nothing"};
  static const std::unordered_set<std::string> kVerbs{
      "is",   "am",   "are",  "was",  "were", "be",    "been",  "being",
      "have", "has",  "had",  "do",   "does", "did",   "will",  "would",
      "can",  "could", "shall", "should", "may", "might", "must", "go",
      "went", "get",  "got",  "feel", "felt", "think", "know",  "said",
      "say",  "make", "made", "want", "see",  "saw",   "sleep", "slept"};
  static const std::unordered_set<std::string> kAdverbs{
      "very", "really", "not", "never", "always", "often", "just", "so",
      "too",  "also",   "quite", "still", "almost", "again", "here",
      "there", "now",   "then", "today", "usually", "sometimes"};
  const std::string w = ToLower(word);
  if (kPronouns.contains(w)) return PosTag::kPron;
  if (kVerbs.contains(w)) return PosTag::kVerb;
  if (kAdverbs.contains(w)) return PosTag::kAdv;
  return PosTag::kOther;
}

AlignmentCounts Align(const std::vector<std::string>& ref,
                      const std::vector<std::string>& hyp) {
  if (ref.empty()) {
    throw Error(ErrorCode::kEmptyReference, "reference has no words");
  }
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::vector<std::int64_t>> cost(
      m + 1, std::vector<std::int64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) cost[i][0] = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= n; ++j) cost[0][j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t diag =
          cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  // Backtrace preferring the diagonal, so substitutions win ties against
  // insertion/deletion pairs.
  AlignmentCounts counts;
  counts.ref_len = static_cast<std::int64_t>(m);
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (cost[i][j] == cost[i - 1][j - 1] + (same ? 0 : 1)) {
        same ? ++counts.hits : ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

FeatureVector CommonFeatures(const Transcript& t, double audio_duration_s,
                             const LexiconSet& lex) {
  if (t.tokens.empty()) {
    throw Error(ErrorCode::kEmptyTranscript, "no tokens");
  }
  if (!(audio_duration_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "audio duration must be > 0");
  }
  const auto& tokens = t.tokens;
  const double n = static_cast<double>(tokens.size());

  std::array<double, 6> pos_counts{};
  std::size_t fillers = 0, repeats = 0;
  std::unordered_set<std::string> types;
  std::vector<double> word_durs, syllable_durs;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    const PosTag tag = tok.pos.value_or(FallbackPos(tok.text));
    pos_counts[static_cast<std::size_t>(tag)] += 1.0;
    if (lex.fillers.contains(tok.text)) ++fillers;
    if (i > 0 && tok.text == tokens[i - 1].text) ++repeats;
    types.insert(tok.text);
    const double dur = tok.end_s - tok.start_s;
    word_durs.push_back(dur);
    syllable_durs.push_back(dur / CountSyllables(tok.text));
  }

  // Union of token spans (tokens are sorted by start).
  double speech = 0.0;
  double span_start = tokens.front().start_s, span_end = tokens.front().end_s;
  std::vector<double> pauses;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const double gap = tokens[i].start_s - tokens[i - 1].end_s;
    if (gap > kPauseThresholdS) pauses.push_back(gap);
    if (tokens[i].start_s > span_end) {
      speech += span_end - span_start;
      span_start = tokens[i].start_s;
      span_end = tokens[i].end_s;
    } else {
      span_end = std::max(span_end, tokens[i].end_s);
    }
  }
  speech += span_end - span_start;
  const double spoken = std::accumulate(word_durs.begin(), word_durs.end(), 0.0);

  FeatureVector out;
  static constexpr const char* kPosNames[] = {"noun", "verb", "adj",
                                              "adv",  "pron", "other"};
  for (std::size_t k = 0; k < 6; ++k) {
    out.push(std::string("ling.pos_") + kPosNames[k], pos_counts[k] / n);
  }
  out.push("ling.speech_rate", n / audio_duration_s);
  out.push("ling.articulation_rate", spoken > 0.0 ? n / spoken : 0.0);
  out.push("ling.mean_syllable_dur", MeanOf(syllable_durs));
  out.push("ling.std_syllable_dur", StdOf(syllable_durs));
  out.push("ling.filler_ratio", fillers / n);
  out.push("ling.repetition_ratio", repeats / n);
  out.push("ling.mean_word_dur", MeanOf(word_durs));
  out.push("ling.pause_ratio",
           std::clamp((audio_duration_s - speech) / audio_duration_s, 0.0, 1.0));
  out.push("ling.mean_pause_dur", MeanOf(pauses));
  out.push("ling.pauses_per_min",
           static_cast<double>(pauses.size()) / (audio_duration_s / 60.0));
  out.push("ling.type_token_ratio", static_cast<double>(types.size()) / n);
  return out;
}

FeatureVector ReadFeatures(const Transcript& t, const LexiconSet&) {
  if (!t.prompt_text) {
    throw Error(ErrorCode::kMissingPrompt, "read response without prompt");
  }
  std::vector<std::string> hyp;
  hyp.reserve(t.tokens.size());
  for (const auto& tok : t.tokens) {
    auto words = NormalizeWords(tok.text);
    hyp.insert(hyp.end(), words.begin(), words.end());
  }
  const auto counts = Align(NormalizeWords(*t.prompt_text), hyp);
  const double ref_len = static_cast<double>(counts.ref_len);
  FeatureVector out;
  out.push("read.insertion_rate", counts.insertions / ref_len);
  out.push("read.deletion_rate", counts.deletions / ref_len);
  out.push("read.substitution_rate", counts.substitutions / ref_len);
  return out;
}

FeatureVector SpontaneousFeatures(const Transcript& t, const LexiconSet& lex) {
  if (t.tokens.empty()) {
    throw Error(ErrorCode::kEmptyTranscript, "no tokens");
  }
  if (lex.word_frequency.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty frequency table");
  }
  const double n = static_cast<double>(t.tokens.size());
  std::vector<double> popularity;
  std::size_t depression_hits = 0, pos_hits = 0, neg_hits = 0;
  std::unordered_set<std::string> distinct, distinct_depression;
  for (const auto& tok : t.tokens) {
    popularity.push_back(lex.Popularity(tok.text));
    distinct.insert(tok.text);
    if (lex.depression_terms.contains(tok.text)) {
      ++depression_hits;
      distinct_depression.insert(tok.text);
    }
    if (lex.positive_valence.contains(tok.text)) ++pos_hits;
    if (lex.negative_valence.contains(tok.text)) ++neg_hits;
  }
  std::sort(popularity.begin(), popularity.end());

  FeatureVector out;
  for (int p : {10, 25, 50, 75, 90}) {
    out.push("spont.popularity_p" + std::to_string(p),
             SortedPercentile(popularity, p));
  }
  out.push("spont.popularity_mean", MeanOf(popularity));
  out.push("spont.depression_term_ratio", depression_hits / n);
  out.push("spont.depression_term_types",
           static_cast<double>(distinct_depression.size()) / distinct.size());
  out.push("spont.sentiment_pos", pos_hits / n);
  out.push("spont.sentiment_neg", neg_hits / n);
  return out;
}

}  // namespace wellvoice
