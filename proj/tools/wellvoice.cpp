#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wellvoice/data.hpp"
#include "wellvoice/error.hpp"
#include "wellvoice/eval.hpp"
#include "wellvoice/model.hpp"
#include "wellvoice/parallel.hpp"
#include "wellvoice/pipeline.hpp"
#include "wellvoice/report.hpp"
#include "wellvoice/selection.hpp"

namespace fs = std::filesystem;
using namespace wellvoice;

namespace {

struct RunConfig {
  fs::path manifest;
  fs::path lexicon_dir;
  fs::path cache_dir = "cache";
  fs::path out_dir = "results";
  std::size_t n_select = kDefaultSelectCount;
  std::uint64_t seed = 42;
  std::vector<std::string> measurements;
  std::vector<std::string> sources;
  bool clip_predictions = false;
  bool fold_averaged = false;
  int n_perm = kDefaultPermutations;
  int epochs = Hyperparams{}.epochs;
  bool force = false;
  bool no_csv = false;
  std::size_t workers = 0;

  // synth
  SynthSpec synth;
  fs::path pairs;
  fs::path output_file;
};

std::vector<Measurement> ResolveMeasurements(const std::vector<std::string>& names) {
  if (names.empty()) return {kAllMeasurements.begin(), kAllMeasurements.end()};
  std::vector<Measurement> out;
  for (const auto& n : names) {
    const auto m = ParseMeasurement(n);
    if (!m) throw Error(ErrorCode::kInvalidArgument, "unknown measurement " + n);
    out.push_back(*m);
  }
  return out;
}

std::vector<std::string> ResolveSources(const std::vector<std::string>& names) {
  if (names.empty()) return AllSources();
  std::vector<std::string> out;
  for (const auto& n : names) {
    std::string canonical = n;
    if (canonical == "Concatenated" || canonical == "concat" || canonical == "all") {
      canonical = "concatenated";
    }
    TableStem(canonical);  // validates
    out.push_back(canonical);
  }
  return out;
}

Measurement SingleMeasurement(const RunConfig& cfg) {
  const auto ms = ResolveMeasurements(cfg.measurements);
  if (ms.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "exactly one --measurement required");
  }
  return ms[0];
}

std::string SingleSource(const RunConfig& cfg) {
  if (cfg.sources.empty()) return "concatenated";
  const auto ss = ResolveSources(cfg.sources);
  if (ss.size() != 1) throw Error(ErrorCode::kInvalidArgument, "one --source only");
  return ss[0];
}

void RequireDir(const fs::path& p, const char* what) {
  if (!fs::is_directory(p)) {
    throw Error(ErrorCode::kIoFailure, std::string(what) + " not found: " + p.string());
  }
}

std::string Lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

int CmdSynth(const RunConfig& cfg) {
  GenerateSynthetic(cfg.synth, cfg.out_dir);
  std::printf("wrote %d subjects x %d sessions to %s\n", cfg.synth.n_subjects,
              cfg.synth.sessions_per_subject, cfg.out_dir.string().c_str());
  return 0;
}

int CmdExtract(const RunConfig& cfg) {
  if (!fs::is_regular_file(cfg.manifest)) {
    throw Error(ErrorCode::kIoFailure, "manifest not found: " + cfg.manifest.string());
  }
  const fs::path lexicon =
      cfg.lexicon_dir.empty() ? cfg.manifest.parent_path() / "lexicon" : cfg.lexicon_dir;
  RequireDir(lexicon, "lexicon directory");
  const ManifestContents manifest = LoadManifest(cfg.manifest);
  for (const auto& ex : manifest.exclusions) {
    std::fprintf(stderr, "excluded %s session %d: %s\n", ex.subject_id.c_str(),
                 ex.session_index, ex.reason.c_str());
  }
  ExtractOptions options;
  options.cache_dir = cfg.cache_dir;
  options.lexicon_dir = lexicon;
  options.force = cfg.force;
  options.write_csv = !cfg.no_csv;
  options.workers = cfg.workers;
  const ExtractReport report = RunExtraction(manifest, options);
  std::printf("%zu extracted, %zu cached\n", report.extracted, report.cached);
  if (!report.ok()) {
    std::fprintf(stderr, "%zu session(s) failed:\n", report.errors.size());
    for (const auto& e : report.errors) {
      std::fprintf(stderr, "  %s session %d: %s\n", e.subject_id.c_str(),
                   e.session_index, e.message.c_str());
    }
    return 1;
  }
  return 0;
}

int CmdSelect(const RunConfig& cfg) {
  RequireDir(cfg.cache_dir, "cache directory");
  const Measurement m = SingleMeasurement(cfg);
  const std::string source = SingleSource(cfg);
  const Dataset data = LoadDataset(cfg.cache_dir, source, m);
  SelectionMask mask = SelectTopN(data.features, data.targets, data.names, cfg.n_select);
  mask.measurement = m;
  mask.source = source;
  const fs::path out = cfg.output_file.empty()
                           ? cfg.out_dir / ("mask_" + Lower(std::string(MeasurementName(m))) +
                                            "_" + source + ".json")
                           : cfg.output_file;
  WriteMask(out, mask);
  std::printf("kept %zu of %zu features -> %s\n", mask.size(), data.names.size(),
              out.string().c_str());
  return 0;
}

int CmdTrain(const RunConfig& cfg) {
  RequireDir(cfg.cache_dir, "cache directory");
  const Measurement m = SingleMeasurement(cfg);
  const std::string source = SingleSource(cfg);
  const Dataset data = LoadDataset(cfg.cache_dir, source, m);
  SelectionMask mask = SelectTopN(data.features, data.targets, data.names, cfg.n_select);
  mask.measurement = m;
  mask.source = source;
  Hyperparams hyper;
  hyper.seed = cfg.seed;
  hyper.epochs = cfg.epochs;
  const TrainResult result =
      Train(ApplyMask(mask, data.features), data.targets, mask.kept_names, hyper);
  const std::string stem = Lower(std::string(MeasurementName(m))) + "_" + source;
  const fs::path out =
      cfg.output_file.empty() ? cfg.out_dir / ("model_" + stem + ".json") : cfg.output_file;
  SaveModel(out, result.model);
  WriteMask(out.parent_path() / ("mask_" + stem + ".json"), mask);
  std::printf("trained on %zu sessions, final training MSE %.4f -> %s\n",
              data.targets.size(), result.report.epoch_mse.back(), out.string().c_str());
  return 0;
}

int CmdCv(const RunConfig& cfg) {
  RequireDir(cfg.cache_dir, "cache directory");
  const auto measurements = ResolveMeasurements(cfg.measurements);
  const auto sources = ResolveSources(cfg.sources);
  fs::create_directories(cfg.out_dir);

  std::vector<EvalResult> results;
  for (const auto& source : sources) {
    for (Measurement m : measurements) {
      const auto start = std::chrono::steady_clock::now();
      const Dataset data = LoadDataset(cfg.cache_dir, source, m);
      CvOptions options;
      options.measurement = m;
      options.source = source;
      options.n_select = cfg.n_select;
      options.hyper.epochs = cfg.epochs;
      options.seed = cfg.seed;
      options.n_perm = cfg.n_perm;
      options.clip_predictions = cfg.clip_predictions;
      options.fold_averaged = cfg.fold_averaged;
      options.workers = cfg.workers;
      EvalResult r = CrossValidate(data, options);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::fprintf(stderr, "%-5s %-12s CCC %.3f%-2s r %.3f p %.2e (%zu sessions, %.1fs)\n",
                   std::string(MeasurementName(m)).c_str(), source.c_str(), r.ccc,
                   SignificanceStars(r.p_value).c_str(), r.pearson, r.p_value,
                   r.n_sessions, secs);
      const std::string stem = Lower(std::string(MeasurementName(m))) + "_" + source;
      WriteTextFile(cfg.out_dir / ("pairs_" + stem + ".csv"), PairsCsv(r));
      if (source == "concatenated") {
        WriteTextFile(cfg.out_dir / ("scatter_" + stem + ".svg"), DensityScatterSvg(r));
      }
      results.push_back(std::move(r));
    }
  }
  WriteTextFile(cfg.out_dir / "results.json", ResultsToJson(results));
  WriteTextFile(cfg.out_dir / "table3.csv", Table3Csv(results));
  std::fputs(Table3Csv(results).c_str(), stdout);
  return 0;
}

EvalResult PairsFromCsv(const fs::path& path, Measurement m) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  EvalResult r;
  r.measurement = m;
  r.source = "concatenated";
  std::string line;
  std::getline(in, line);
  std::vector<double> x, y;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ": " + line);
    }
    x.push_back(std::stod(line.substr(0, comma)));
    y.push_back(std::stod(line.substr(comma + 1)));
    r.pairs.emplace_back(x.back(), y.back());
  }
  if (x.size() >= 2) r.ccc = Ccc(x, y);
  r.n_sessions = x.size();
  return r;
}

int CmdPlot(const RunConfig& cfg) {
  const Measurement m = SingleMeasurement(cfg);
  const EvalResult r = PairsFromCsv(cfg.pairs, m);
  const fs::path out = cfg.output_file.empty()
                           ? cfg.pairs.parent_path() / (cfg.pairs.stem().string() + ".svg")
                           : cfg.output_file;
  WriteTextFile(out, DensityScatterSvg(r));
  std::printf("%s\n", out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Well-being score regression from voice recordings"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.workers = DefaultWorkers();

  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers,
                    "Worker threads (default: WELLVOICE_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--out,-o", cfg.out_dir, "Corpus directory")->required();
  synth->add_option("--subjects", cfg.synth.n_subjects, "Number of subjects")
      ->check(CLI::Range(5, 100000));
  synth->add_option("--sessions", cfg.synth.sessions_per_subject, "Sessions per subject")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", cfg.synth.seed, "Random seed");
  synth->add_option("--noise", cfg.synth.noise_level, "Score noise level")
      ->check(CLI::Range(0.0, 1.0));

  auto* extract = app.add_subcommand("extract", "Extract feature caches");
  extract->add_option("--manifest,-m", cfg.manifest, "manifest.json")->required();
  extract->add_option("--lexicon", cfg.lexicon_dir,
                      "Lexicon directory (default: <manifest dir>/lexicon)");
  extract->add_option("--cache,-c", cfg.cache_dir, "Cache directory");
  extract->add_flag("--force", cfg.force, "Re-extract up-to-date sessions");
  extract->add_flag("--no-csv", cfg.no_csv, "Only write binary tables");
  add_workers(extract);

  auto add_model_opts = [&](CLI::App* sub) {
    sub->add_option("--cache,-c", cfg.cache_dir, "Cache directory");
    sub->add_option("--measurement", cfg.measurements, "STAI, GAD7, PSQI or PANAS");
    sub->add_option("--source", cfg.sources, "Q1..Q7 or concatenated");
    sub->add_option("--n-select", cfg.n_select, "Features kept by selection")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--out,-o", cfg.out_dir, "Output directory");
  };

  auto* select = app.add_subcommand("select", "Rank features and write a mask");
  add_model_opts(select);
  select->add_option("--output", cfg.output_file, "Mask file path");

  auto* train = app.add_subcommand("train", "Train a model on all sessions");
  add_model_opts(train);
  train->add_option("--epochs", cfg.epochs)->check(CLI::PositiveNumber);
  train->add_option("--output", cfg.output_file, "Model file path");

  auto* cv = app.add_subcommand("cv", "Cross-validate and write reports");
  add_model_opts(cv);
  cv->add_option("--n-perm", cfg.n_perm, "Permutations for p-values")
      ->check(CLI::Range(kMinPermutations, 100000000));
  cv->add_option("--epochs", cfg.epochs)->check(CLI::PositiveNumber);
  cv->add_flag("--clip-predictions", cfg.clip_predictions,
               "Clip predictions to the questionnaire range");
  cv->add_flag("--fold-averaged", cfg.fold_averaged,
               "Report the mean of per-fold CCCs");
  add_workers(cv);

  auto* plot = app.add_subcommand("plot", "Density scatter from a pairs CSV");
  plot->add_option("--pairs", cfg.pairs, "pairs_*.csv from cv")->required()->check(
      CLI::ExistingFile);
  plot->add_option("--measurement", cfg.measurements, "Measurement")->required();
  plot->add_option("--output", cfg.output_file, "SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return CmdSynth(cfg);
    if (*extract) return CmdExtract(cfg);
    if (*select) return CmdSelect(cfg);
    if (*train) return CmdTrain(cfg);
    if (*cv) return CmdCv(cfg);
    if (*plot) return CmdPlot(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
