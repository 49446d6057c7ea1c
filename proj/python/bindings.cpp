#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <string>
#include <vector>

#include "wellvoice/acoustic.hpp"
#include "wellvoice/data.hpp"
#include "wellvoice/error.hpp"
#include "wellvoice/eval.hpp"
#include "wellvoice/features.hpp"
#include "wellvoice/functionals.hpp"
#include "wellvoice/linguistic.hpp"
#include "wellvoice/model.hpp"
#include "wellvoice/pipeline.hpp"
#include "wellvoice/report.hpp"
#include "wellvoice/selection.hpp"
#include "wellvoice/signal_io.hpp"

namespace py = pybind11;
using namespace wellvoice;

namespace {

Measurement ToMeasurement(const std::string& name) {
  const auto m = ParseMeasurement(name);
  if (!m) throw Error(ErrorCode::kInvalidArgument, "unknown measurement " + name);
  return *m;
}

py::dict ResultToDict(const EvalResult& r) {
  py::dict d;
  d["measurement"] = std::string(MeasurementName(r.measurement));
  d["source"] = r.source;
  d["ccc"] = r.ccc;
  d["pearson"] = r.pearson;
  d["p_value"] = r.p_value;
  d["stars"] = SignificanceStars(r.p_value);
  d["n_sessions"] = r.n_sessions;
  d["pairs"] = r.pairs;
  d["fold_ccc"] = r.fold_ccc;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Well-being score regression from voice recordings";

  static py::exception<Error> error_type(m, "WellvoiceError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  m.attr("SESSION_DIM") = kSessionDim;
  m.attr("READ_RESPONSE_DIM") = kReadResponseDim;
  m.attr("SPONTANEOUS_RESPONSE_DIM") = kSpontaneousResponseDim;
  m.attr("ACOUSTIC_DIM") = kAcousticDim;
  m.attr("FUNCTIONAL_NAMES") = std::vector<std::string>(kFunctionalNames.begin(),
                                                         kFunctionalNames.end());
  m.attr("MEASUREMENTS") = std::vector<std::string>{"STAI", "GAD7", "PSQI", "PANAS"};

  m.def("read_wav",
        [](const std::filesystem::path& path) {
          Waveform w = DecodeWav(path);
          return py::make_tuple(w.samples, w.sample_rate_hz);
        },
        py::arg("path"), "Decode a WAV file to (samples at 16 kHz, rate).");

  m.def("frame_features",
        [](std::vector<double> samples) {
          const FrameMatrix fm =
              ExtractFrameFeatures(Frame(Waveform{std::move(samples), kCanonicalRateHz}));
          Eigen::MatrixXd out(fm.rows(), fm.cols());
          for (std::size_t r = 0; r < fm.rows(); ++r) {
            for (std::size_t c = 0; c < fm.cols(); ++c) out(r, c) = fm.at(r, c);
          }
          return py::make_tuple(out, fm.names());
        },
        py::arg("samples"), "Per-frame features (frames x 123) and column names.");

  m.def("functionals",
        [](const std::vector<double>& column) {
          const auto f = ComputeFunctionals(column);
          return std::vector<double>(f.begin(), f.end());
        },
        py::arg("column"), "The 19 functionals of one column.");

  m.def("ccc", [](const std::vector<double>& x, const std::vector<double>& y) { return Ccc(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) { return Pearson(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("permutation_p",
        [](const std::vector<double>& x, const std::vector<double>& y, int n_perm,
           std::uint64_t seed) { return PermutationP(x, y, n_perm, seed); },
        py::arg("x"), py::arg("y"), py::arg("n_perm") = kMinPermutations,
        py::arg("seed") = 42);
  m.def("significance_stars", &SignificanceStars, py::arg("p"));

  m.def("synth",
        [](const std::filesystem::path& out, int subjects, int sessions, std::uint64_t seed,
           double noise) {
          GenerateSynthetic({subjects, sessions, seed, noise}, out);
        },
        py::arg("out"), py::arg("subjects") = 30, py::arg("sessions") = 5,
        py::arg("seed") = 42, py::arg("noise") = 0.2, "Write a synthetic corpus.");

  m.def("extract",
        [](const std::filesystem::path& manifest, const std::filesystem::path& cache,
           bool force, std::size_t workers) {
          const ManifestContents contents = LoadManifest(manifest);
          ExtractOptions opt;
          opt.cache_dir = cache;
          opt.lexicon_dir = manifest.parent_path() / "lexicon";
          opt.force = force;
          opt.workers = std::max<std::size_t>(workers, 1);
          ExtractReport rep;
          {
            py::gil_scoped_release release;
            rep = RunExtraction(contents, opt);
          }
          py::list errors;
          for (const auto& e : rep.errors) {
            errors.append(py::make_tuple(e.subject_id, e.session_index, e.message));
          }
          py::dict d;
          d["extracted"] = rep.extracted;
          d["cached"] = rep.cached;
          d["excluded"] = contents.exclusions.size();
          d["errors"] = errors;
          return d;
        },
        py::arg("manifest"), py::arg("cache"), py::arg("force") = false,
        py::arg("workers") = 1, "Extract session features into a cache directory.");

  m.def("load_dataset",
        [](const std::filesystem::path& cache, const std::string& source,
           const std::string& measurement) {
          Dataset d = LoadDataset(cache, source, ToMeasurement(measurement));
          return py::make_tuple(std::move(d.features), d.names, d.subject_ids, d.targets);
        },
        py::arg("cache"), py::arg("source"), py::arg("measurement"),
        "(features, names, subject_ids, targets) for one source and measurement.");

  m.def("select_top_n",
        [](const Eigen::MatrixXd& features, const std::vector<double>& targets,
           const std::vector<std::string>& names, std::size_t n) {
          const SelectionMask mask = SelectTopN(features, targets, names, n);
          return py::make_tuple(mask.kept_names, mask.kept_indices, mask.correlations);
        },
        py::arg("features"), py::arg("targets"), py::arg("names"),
        py::arg("n") = kDefaultSelectCount,
        "Top-n features by |Pearson r|: (names, indices, signed r).");

  m.def("cross_validate",
        [](const std::filesystem::path& cache, const std::string& measurement,
           const std::string& source, std::size_t n_select, std::uint64_t seed, int n_perm,
           int epochs, std::size_t workers) {
          const Measurement meas = ToMeasurement(measurement);
          CvOptions opt;
          opt.measurement = meas;
          opt.source = source;
          opt.n_select = n_select;
          opt.seed = seed;
          opt.n_perm = n_perm;
          opt.hyper.epochs = epochs;
          opt.workers = std::max<std::size_t>(workers, 1);
          EvalResult r;
          {
            py::gil_scoped_release release;
            r = CrossValidate(LoadDataset(cache, source, meas), opt);
          }
          return ResultToDict(r);
        },
        py::arg("cache"), py::arg("measurement"), py::arg("source") = "concatenated",
        py::arg("n_select") = kDefaultSelectCount, py::arg("seed") = 42,
        py::arg("n_perm") = kDefaultPermutations, py::arg("epochs") = Hyperparams{}.epochs,
        py::arg("workers") = 1, "Subject-disjoint 5-fold cross-validation.");

  m.def("train",
        [](const Eigen::MatrixXd& features, const std::vector<double>& targets,
           const std::vector<std::string>& names, int epochs, std::uint64_t seed,
           const std::filesystem::path& output) {
          Hyperparams h;
          h.epochs = epochs;
          h.seed = seed;
          TrainResult r;
          {
            py::gil_scoped_release release;
            r = Train(features, targets, names, h);
          }
          if (!output.empty()) SaveModel(output, r.model);
          return py::make_tuple(r.model.Predict(features), r.report.epoch_mse);
        },
        py::arg("features"), py::arg("targets"), py::arg("names"),
        py::arg("epochs") = Hyperparams{}.epochs, py::arg("seed") = 42,
        py::arg("output") = std::filesystem::path(),
        "Train on all rows; returns (in-sample predictions, per-epoch MSE).");

  m.def("predict",
        [](const std::filesystem::path& model_path, const Eigen::MatrixXd& features) {
          return LoadModel(model_path).Predict(features);
        },
        py::arg("model"), py::arg("features"));
}
