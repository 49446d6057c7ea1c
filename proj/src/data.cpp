#include "wellvoice/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wellvoice/error.hpp"
#include "wellvoice/linguistic.hpp"
#include "wellvoice/parallel.hpp"
#include "wellvoice/rng.hpp"
#include "wellvoice/signal_io.hpp"

namespace wellvoice {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kScoreKeys = {"stai", "gad7", "psqi",
                                                   "panas"};

// ---- lexicon material for the synthetic corpus ---------------------------

const std::vector<std::string>& NeutralWords() {
  static const std::vector<std::string> words{
      "the",     "and",     "to",      "of",      "a",       "i",
      "in",      "was",     "it",      "that",    "my",      "we",
      "went",    "day",     "time",    "work",    "home",    "today",
      "morning", "evening", "weekend", "friend",  "family",  "dinner",
      "lunch",   "coffee",  "walk",    "park",    "city",    "store",
      "book",    "movie",   "music",   "game",    "team",    "office",
      "meeting", "project", "email",   "phone",   "car",     "bus",
      "train",   "street",  "house",   "kitchen", "garden",  "weather",
      "rain",    "sun",     "cold",    "warm",    "week",    "month",
      "year",    "school",  "class",   "teacher", "student", "dog",
      "cat",     "children", "brother", "sister", "mother",  "father",
      "people",  "room",    "table",   "window",  "door",    "water",
      "food",    "bread",   "apple",   "breakfast", "plan",  "trip",
      "visit",   "call",    "talk",    "read",    "write",   "cook",
      "clean",   "drive",   "watch",   "listen",  "play",    "start",
      "finish",  "about",   "after",   "before",  "then",    "there",
      "some",    "many",    "little",  "big",     "small",   "long",
      "short",   "new",     "old",     "next",    "last",    "first",
      "usually", "sometimes", "really", "quite",  "also",    "just",
      "is",      "are",     "have",    "had",     "do",      "did",
      "think",   "know",    "said",    "get",     "got",     "make"};
  return words;
}

const std::vector<std::string>& DepressionWords() {
  static const std::vector<std::string> words{
      "sad",      "tired",    "lonely",   "hopeless", "worthless", "empty",
      "anxious",  "worried",  "exhausted", "depressed", "cry",     "hurt",
      "alone",    "afraid",   "guilty",   "numb",     "miserable", "stressed",
      "insomnia", "failure",  "pointless", "burden",  "overwhelmed", "nervous"};
  return words;
}

const std::vector<std::string>& PositiveWords() {
  static const std::vector<std::string> words{
      "happy", "good", "great", "love", "enjoy", "fun", "calm", "relaxed",
      "excited", "wonderful", "nice", "glad", "beautiful", "peaceful",
      "grateful", "laugh"};
  return words;
}

const std::vector<std::string>& NegativeWords() {
  static const std::vector<std::string> words{
      "bad",   "sad",     "terrible", "awful",  "hate",   "angry",
      "upset", "worried", "tired",    "hurt",   "boring", "annoying",
      "miserable", "afraid", "stressed", "nervous"};
  return words;
}

const std::vector<std::string>& FillerWords() {
  static const std::vector<std::string> words{"uh", "um", "er", "ah", "hmm"};
  return words;
}

const std::array<std::string, 4>& SentencePrompts() {
  static const std::array<std::string, 4> prompts{
      "The birch canoe slid on the smooth planks today.",
      "Glue the sheet to the dark blue background please.",
      "It is easy to tell the depth of a well.",
      "These days a chicken leg is a rare dish."};
  return prompts;
}

// Fixed paragraph prompts, independent of the corpus seed.
const std::array<std::string, 2>& ParagraphPrompts() {
  static const std::array<std::string, 2> prompts = [] {
    std::array<std::string, 2> out;
    std::mt19937_64 rng(0x5eed2024ULL);
    const auto& vocab = NeutralWords();
    for (auto& p : out) {
      for (int w = 0; w < 120; ++w) {
        if (w > 0) p += (w % 11 == 10) ? ". " : " ";
        p += vocab[UniformIndex(rng, vocab.size())];
      }
      p += ".";
    }
    return out;
  }();
  return prompts;
}

// ---- voice synthesis ---------------------------------------------------

struct VoiceParams {
  double f0_mean_hz;
  double intonation_depth;  // relative f0 swing
  double amplitude;
  double syllable_s;
  double pause_prob;
  double breath;  // aspiration noise relative to voicing
  double filler_rate;
  double depression_rate;
  double positive_rate;
  double misread_rate;
};

VoiceParams VoiceFromState(const Traits& s, double f0_offset_hz) {
  VoiceParams v;
  v.f0_mean_hz = std::clamp(150.0 + f0_offset_hz + 30.0 * s[0], 80.0, 300.0);
  v.intonation_depth = std::clamp(0.08 + 0.03 * s[0], 0.01, 0.18);
  v.amplitude = 0.22 * std::exp(0.35 * s[1]);
  v.syllable_s = 0.18 * std::exp(-0.2 * s[2]);
  v.pause_prob = std::clamp(0.18 - 0.08 * s[2], 0.02, 0.5);
  v.breath = std::clamp(0.12 * std::exp(0.45 * s[3]), 0.02, 0.6);
  v.filler_rate = std::clamp(0.05 + 0.03 * s[3], 0.0, 0.2);
  v.depression_rate = std::clamp(0.04 + 0.035 * s[3], 0.0, 0.25);
  v.positive_rate = std::clamp(0.05 - 0.025 * s[3], 0.0, 0.2);
  v.misread_rate = std::clamp(0.04 + 0.025 * s[2], 0.0, 0.2);
  return v;
}

class SineTable {
 public:
  SineTable() : table_(kSize + 1) {
    for (std::size_t i = 0; i <= kSize; ++i) {
      table_[i] = std::sin(2.0 * std::numbers::pi * i / kSize);
    }
  }
  // phase in cycles, [0, 1)
  double operator()(double phase) const {
    const double pos = phase * kSize;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  static constexpr std::size_t kSize = 8192;
  std::vector<double> table_;
};

const SineTable& Sines() {
  static const SineTable table;
  return table;
}

struct SynthResponse {
  std::vector<double> samples;
  Transcript transcript;
};

class ResponseSynth {
 public:
  ResponseSynth(const VoiceParams& voice, std::mt19937_64& rng)
      : voice_(voice), rng_(rng) {}

  // Appends background noise up to time `until_s`.
  void SilenceUntil(double until_s) {
    const auto target = static_cast<std::size_t>(until_s * kCanonicalRateHz);
    while (samples_.size() < target) {
      samples_.push_back(0.002 * StandardNormal(rng_));
    }
  }

  double now() const {
    return static_cast<double>(samples_.size()) / kCanonicalRateHz;
  }

  double WordDuration(const std::string& word) {
    const int syllables = std::max(1, CountSyllables(word));
    return syllables * voice_.syllable_s * Uniform(rng_, 0.85, 1.15);
  }

  void SpeakWord(const std::string& word, double duration_s) {
    const double start = now();
    const auto n = static_cast<std::size_t>(duration_s * kCanonicalRateHz);
    const std::size_t burst = std::min<std::size_t>(n / 5, 400);
    const std::size_t ramp = std::min<std::size_t>(n / 4, 480);
    const auto& sines = Sines();
    const double fs = kCanonicalRateHz;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(samples_.size()) / fs;
      // Slow intonation plus a small cycle-level perturbation.
      wander_ = 0.995 * wander_ + 0.0004 * StandardNormal(rng_);
      const double f0 = voice_.f0_mean_hz *
                        (1.0 + voice_.intonation_depth *
                                   std::sin(2.0 * std::numbers::pi * 0.6 * t +
                                            intonation_phase_) +
                         wander_);
      phase_ += f0 / fs;
      phase_ -= std::floor(phase_);
      double voiced = 0.0;
      const int harmonics = std::min(12, static_cast<int>(6500.0 / f0));
      for (int h = 1; h <= harmonics; ++h) {
        double ph = phase_ * h;
        ph -= std::floor(ph);
        voiced += sines(ph) / h;
      }
      double env = 1.0;
      if (i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
      if (n - i <= ramp) {
        env = std::min(env, 0.5 - 0.5 * std::cos(std::numbers::pi * (n - i) / ramp));
      }
      double s = voice_.amplitude * env *
                 (0.45 * voiced + voice_.breath * StandardNormal(rng_));
      if (i < burst) s = 0.35 * voice_.amplitude * StandardNormal(rng_);
      samples_.push_back(s + 0.002 * StandardNormal(rng_));
    }
    transcript_.tokens.push_back(
        {word, start, start + static_cast<double>(n) / fs, std::nullopt});
  }

  void Gap() {
    double gap = Uniform(rng_, 0.04, 0.09);
    if (Uniform(rng_, 0.0, 1.0) < voice_.pause_prob) {
      gap = Uniform(rng_, 0.25, 0.75);
    }
    SilenceUntil(now() + gap);
  }

  SynthResponse Finish(double duration_s,
                       std::optional<std::string> prompt) {
    SilenceUntil(duration_s);
    for (auto& s : samples_) s = std::clamp(s, -1.0, 1.0);
    transcript_.prompt_text = std::move(prompt);
    return {std::move(samples_), std::move(transcript_)};
  }

 private:
  VoiceParams voice_;
  std::mt19937_64& rng_;
  std::vector<double> samples_;
  Transcript transcript_;
  double phase_ = 0.0;
  double wander_ = 0.0;
  double intonation_phase_ = 0.0;
};

double DrawDuration(std::mt19937_64& rng, double mean, double sd, double lo,
                    double hi) {
  return std::clamp(mean + sd * StandardNormal(rng), lo, hi);
}

SynthResponse SynthSpontaneous(const VoiceParams& voice, std::mt19937_64& rng) {
  const double duration = DrawDuration(rng, 64.0, 10.3, 45.0, 85.0);
  ResponseSynth synth(voice, rng);
  synth.SilenceUntil(Uniform(rng, 0.3, 0.6));
  const auto& vocab = NeutralWords();
  while (true) {
    const double u = Uniform(rng, 0.0, 1.0);
    std::string word;
    if (u < voice.filler_rate) {
      word = FillerWords()[UniformIndex(rng, FillerWords().size())];
    } else if (u < voice.filler_rate + voice.depression_rate) {
      word = DepressionWords()[UniformIndex(rng, DepressionWords().size())];
    } else if (u < voice.filler_rate + voice.depression_rate + voice.positive_rate) {
      word = PositiveWords()[UniformIndex(rng, PositiveWords().size())];
    } else {
      // Skewed toward the frequent end of the vocabulary.
      const double r = Uniform(rng, 0.0, 1.0);
      word = vocab[static_cast<std::size_t>(r * r * vocab.size())];
    }
    const double d = synth.WordDuration(word);
    if (synth.now() + d > duration - 0.4) break;
    synth.SpeakWord(word, d);
    synth.Gap();
  }
  return synth.Finish(duration, std::nullopt);
}

SynthResponse SynthRead(const VoiceParams& voice, const std::string& prompt,
                        double mean_s, double sd_s, double lo_s, double hi_s,
                        std::mt19937_64& rng) {
  const double drawn = DrawDuration(rng, mean_s, sd_s, lo_s, hi_s);
  ResponseSynth synth(voice, rng);
  synth.SilenceUntil(Uniform(rng, 0.3, 0.5));
  const auto& vocab = NeutralWords();
  for (const auto& word : NormalizeWords(prompt)) {
    std::string spoken = word;
    const double u = Uniform(rng, 0.0, 1.0);
    if (u < voice.misread_rate / 2) continue;  // skipped
    if (u < voice.misread_rate) spoken = vocab[UniformIndex(rng, vocab.size())];
    if (Uniform(rng, 0.0, 1.0) < voice.filler_rate) {
      const auto& filler = FillerWords()[UniformIndex(rng, FillerWords().size())];
      const double fd = synth.WordDuration(filler);
      if (synth.now() + fd > hi_s - 0.4) break;
      synth.SpeakWord(filler, fd);
      synth.Gap();
    }
    const double d = synth.WordDuration(spoken);
    if (synth.now() + d > hi_s - 0.4) break;
    synth.SpeakWord(spoken, d);
    synth.Gap();
  }
  const double duration = std::clamp(std::max(drawn, synth.now() + 0.3), lo_s, hi_s);
  return synth.Finish(duration, prompt);
}

std::vector<std::string> SortedUnion() {
  std::vector<std::string> all;
  for (const auto* list : {&NeutralWords(), &DepressionWords(), &PositiveWords(),
                           &NegativeWords(), &FillerWords()}) {
    all.insert(all.end(), list->begin(), list->end());
  }
  std::vector<std::string> unique;
  for (const auto& w : all) {
    if (std::find(unique.begin(), unique.end(), w) == unique.end()) unique.push_back(w);
  }
  return unique;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

void WriteLexicons(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream freq;
  const auto words = SortedUnion();
  // Zipf-like counts in list order; neutral function words come first.
  for (std::size_t rank = 0; rank < words.size(); ++rank) {
    freq << words[rank] << '\t' << static_cast<long long>(1000000.0 / (rank + 1))
         << '\n';
  }
  WriteText(dir / "frequency.tsv", freq.str());
  auto list = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& w : v) s += w + "\n";
    return s;
  };
  WriteText(dir / "depression.txt", list(DepressionWords()));
  WriteText(dir / "positive.txt", list(PositiveWords()));
  WriteText(dir / "negative.txt", list(NegativeWords()));
  std::vector<std::string> fillers(FillerWords());
  fillers.push_back("like");
  WriteText(dir / "fillers.txt", list(fillers));
}

std::string SubjectId(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "S%03d", index + 1);
  return buf;
}

}  // namespace

int Scores::get(Measurement m) const {
  switch (m) {
    case Measurement::kStai: return stai;
    case Measurement::kGad7: return gad7;
    case Measurement::kPsqi: return psqi;
    case Measurement::kPanas: return panas;
  }
  return 0;
}

std::optional<std::string> Scores::range_violation() const {
  for (std::size_t i = 0; i < kAllMeasurements.size(); ++i) {
    const Measurement m = kAllMeasurements[i];
    const auto r = RangeOf(m);
    const int v = get(m);
    if (v < r.min || v > r.max) {
      return std::string(kScoreKeys[i]) + " out of range [" +
             std::to_string(r.min) + "," + std::to_string(r.max) + "]";
    }
  }
  return std::nullopt;
}

ManifestContents ParseManifest(std::string_view json_text,
                               const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedManifest, e.what());
  }
  if (!root.is_object() || !root.contains("subjects") || !root["subjects"].is_array()) {
    throw Error(ErrorCode::kMalformedManifest, "expected {\"subjects\": [...]}");
  }

  ManifestContents out;
  for (const auto& subj : root["subjects"]) {
    if (!subj.is_object() || !subj.contains("subject_id") ||
        !subj["subject_id"].is_string() || !subj.contains("sessions") ||
        !subj["sessions"].is_array()) {
      throw Error(ErrorCode::kMalformedManifest,
                  "subject entries need subject_id and sessions");
    }
    const std::string subject_id = subj["subject_id"].get<std::string>();
    for (const auto& sess : subj["sessions"]) {
      Session s;
      s.subject_id = subject_id;
      if (!sess.is_object() || !sess.contains("session_index") ||
          !sess["session_index"].is_number_integer()) {
        throw Error(ErrorCode::kMalformedManifest,
                    subject_id + ": session without integer session_index");
      }
      s.session_index = sess["session_index"].get<int>();
      auto exclude = [&](std::string reason) {
        out.exclusions.push_back({subject_id, s.session_index, std::move(reason)});
      };

      bool complete = sess.contains("scores") && sess["scores"].is_object() &&
                      sess.contains("responses") && sess["responses"].is_object();
      std::array<int, 4> scores{};
      if (complete) {
        for (std::size_t i = 0; i < kScoreKeys.size(); ++i) {
          const auto& sc = sess["scores"];
          if (!sc.contains(kScoreKeys[i]) || !sc[kScoreKeys[i]].is_number()) {
            complete = false;
            break;
          }
          const double v = sc[kScoreKeys[i]].get<double>();
          if (v != std::floor(v)) {
            complete = false;
            break;
          }
          scores[i] = static_cast<int>(v);
        }
      }
      std::optional<std::string> mismatch;
      if (complete) {
        const auto& resp = sess["responses"];
        for (int q = 1; q <= kQuestionCount && complete; ++q) {
          const std::string key = QuestionName(q);
          if (!resp.contains(key) || !resp[key].is_object()) {
            complete = false;
            break;
          }
          const auto& r = resp[key];
          for (const char* field : {"audio", "transcript", "kind"}) {
            if (!r.contains(field) || !r[field].is_string() ||
                r[field].get<std::string>().empty()) {
              complete = false;
            }
          }
          if (!complete) break;
          const auto kind = ParseKind(r["kind"].get<std::string>());
          if (!kind || *kind != ProtocolKind(q)) {
            mismatch = key + " kind mismatch (expected " +
                       std::string(KindName(ProtocolKind(q))) + ")";
            break;
          }
          s.responses[q] = {base_dir / r["audio"].get<std::string>(),
                            base_dir / r["transcript"].get<std::string>(), *kind};
        }
      }
      if (!complete) {
        exclude("incomplete");
        continue;
      }
      if (mismatch) {
        exclude(*mismatch);
        continue;
      }
      s.scores = {scores[0], scores[1], scores[2], scores[3]};
      if (auto violation = s.scores.range_violation()) {
        exclude(*violation);
        continue;
      }
      out.sessions.push_back(std::move(s));
    }
  }
  return out;
}

ManifestContents LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseManifest(ss.str(), path.parent_path());
}

const ScoreLoading& LoadingFor(Measurement m) {
  // One trait per score so the top-ranked features can carry all of it.
  // Traits: 0 arousal/pitch, 1 vocal energy, 2 tempo, 3 negativity.
  static const std::array<ScoreLoading, 4> loadings{{
      {42.0, 11.0, {1.0, 0.0, 0.0, 0.0}},
      {8.0, 4.0, {0.0, 0.0, 1.0, 0.0}},
      {7.0, 3.0, {0.0, 1.0, 0.0, 0.0}},
      {25.0, 6.5, {0.0, 0.0, 0.0, 1.0}},
  }};
  return loadings[static_cast<std::size_t>(m)];
}

void GenerateSynthetic(const SynthSpec& spec,
                       const std::filesystem::path& out_dir) {
  if (spec.n_subjects < 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic corpus needs at least 5 subjects");
  }
  if (spec.sessions_per_subject < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sessions_per_subject must be >= 1");
  }
  if (!(spec.noise_level >= 0.0 && spec.noise_level <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_level must be in [0, 1]");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out_dir.string());
  WriteLexicons(out_dir / "lexicon");

  struct Job {
    int subject;
    int session;
    Traits state;
    double f0_offset;
    Scores scores;
  };
  std::vector<Job> jobs;
  std::mt19937_64 master(spec.seed);
  for (int s = 0; s < spec.n_subjects; ++s) {
    Traits trait;
    for (auto& t : trait) t = StandardNormal(master);
    const double f0_offset = 4.0 * StandardNormal(master);
    for (int k = 1; k <= spec.sessions_per_subject; ++k) {
      Job job{s, k, {}, f0_offset, {}};
      for (int j = 0; j < kLatentTraits; ++j) {
        job.state[j] = 0.8 * trait[j] + 0.6 * StandardNormal(master);
      }
      std::array<int, 4> values{};
      for (std::size_t m = 0; m < kAllMeasurements.size(); ++m) {
        const auto& load = LoadingFor(kAllMeasurements[m]);
        double u = 0.0;
        for (int j = 0; j < kLatentTraits; ++j) u += load.weights[j] * job.state[j];
        u += spec.noise_level * StandardNormal(master);
        const auto range = RangeOf(kAllMeasurements[m]);
        values[m] = static_cast<int>(std::clamp(
            std::lround(load.center + load.spread * u), static_cast<long>(range.min),
            static_cast<long>(range.max)));
      }
      job.scores = {values[0], values[1], values[2], values[3]};
      jobs.push_back(job);
    }
  }

  auto rel_audio = [](const Job& j, int q) {
    return std::filesystem::path("audio") / SubjectId(j.subject) /
           ("s" + std::to_string(j.session)) / (QuestionName(q) + ".wav");
  };
  auto rel_transcript = [](const Job& j, int q) {
    return std::filesystem::path("transcripts") / SubjectId(j.subject) /
           ("s" + std::to_string(j.session)) / (QuestionName(q) + ".json");
  };

  ParallelFor(jobs.size(), DefaultWorkers(), [&](std::size_t idx) {
    const Job& job = jobs[idx];
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(job.subject),
                      static_cast<std::uint32_t>(job.session)};
    std::mt19937_64 rng(seq);
    const VoiceParams voice = VoiceFromState(job.state, job.f0_offset);
    for (int q = 1; q <= kQuestionCount; ++q) {
      SynthResponse resp;
      switch (ProtocolKind(q)) {
        case ResponseKind::kSpontaneous:
          resp = SynthSpontaneous(voice, rng);
          break;
        case ResponseKind::kSentence:
          resp = SynthRead(voice, SentencePrompts()[q - 2], 5.4, 1.5, 3.0, 8.0, rng);
          break;
        case ResponseKind::kParagraph:
          resp = SynthRead(voice, ParagraphPrompts()[q - 6], 48.6, 8.6, 32.0, 70.0,
                           rng);
          break;
      }
      const auto audio = out_dir / rel_audio(job, q);
      const auto transcript = out_dir / rel_transcript(job, q);
      std::filesystem::create_directories(audio.parent_path());
      std::filesystem::create_directories(transcript.parent_path());
      WriteWav16(audio, resp.samples, kCanonicalRateHz);
      WriteText(transcript, TranscriptToJson(resp.transcript));
    }
  });

  json subjects = json::array();
  for (std::size_t i = 0; i < jobs.size();) {
    json subject{{"subject_id", SubjectId(jobs[i].subject)},
                 {"sessions", json::array()}};
    const int current = jobs[i].subject;
    for (; i < jobs.size() && jobs[i].subject == current; ++i) {
      const Job& job = jobs[i];
      json responses = json::object();
      for (int q = 1; q <= kQuestionCount; ++q) {
        responses[QuestionName(q)] = {
            {"audio", rel_audio(job, q).generic_string()},
            {"transcript", rel_transcript(job, q).generic_string()},
            {"kind", std::string(KindName(ProtocolKind(q)))}};
      }
      subject["sessions"].push_back(
          {{"session_index", job.session},
           {"scores",
            {{"stai", job.scores.stai},
             {"gad7", job.scores.gad7},
             {"psqi", job.scores.psqi},
             {"panas", job.scores.panas}}},
           {"latent", job.state},
           {"responses", responses}});
    }
    subjects.push_back(std::move(subject));
  }
  json manifest{{"subjects", subjects},
                {"generator",
                 {{"seed", spec.seed},
                  {"noise_level", spec.noise_level},
                  {"n_subjects", spec.n_subjects},
                  {"sessions_per_subject", spec.sessions_per_subject}}}};
  WriteText(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace wellvoice
