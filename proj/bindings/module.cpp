// Python bindings for the neurostream core. The surface mirrors the CLI:
// synthesize or load a dataset, preprocess, featurize/train/evaluate/predict,
// run the temporal scan, and audit gradients. Enums cross the boundary as
// their canonical lowercase names so the python side never sees raw indices.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "neurostream/channels.hpp"
#include "neurostream/dataset_io.hpp"
#include "neurostream/errors.hpp"
#include "neurostream/fft.hpp"
#include "neurostream/gradsuite.hpp"
#include "neurostream/harness.hpp"
#include "neurostream/hemisplit.hpp"
#include "neurostream/json_util.hpp"
#include "neurostream/model.hpp"
#include "neurostream/preprocess.hpp"
#include "neurostream/recording.hpp"
#include "neurostream/spectral.hpp"
#include "neurostream/temporal.hpp"

namespace py = pybind11;
using namespace neurostream;

namespace {

Channel parse_channel(const std::string& name) {
    const auto c = channel_from_name(name);
    if (!c) throw ConfigError("unknown channel name: " + name);
    return *c;
}

Split parse_split(const std::string& name) {
    const auto s = split_from_name(name);
    if (!s) throw ConfigError("unknown split name: " + name);
    return *s;
}

Variant parse_variant(const std::string& name) {
    const auto v = variant_from_name(name);
    if (!v) throw ConfigError("unknown variant name: " + name);
    return *v;
}

Emotion parse_emotion(const std::string& name) {
    const auto e = emotion_from_name(name);
    if (!e) throw ConfigError("unknown emotion name: " + name);
    return *e;
}

json parse_json_str(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config json: ") + e.what());
    }
}

py::object label_to_py(const std::optional<Emotion>& label) {
    if (!label) return py::none();
    return py::str(std::string(emotion_name(*label)));
}

std::vector<std::string> names_of(const std::vector<Channel>& chans) {
    std::vector<std::string> out;
    out.reserve(chans.size());
    for (Channel c : chans) out.emplace_back(channel_name(c));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bi-hemispheric EEG emotion classification core";
    m.attr("__version__") = "0.1.0";

    const auto config_exc = py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ShapeError>(m, "ShapeError", config_exc.ptr());
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    {
        std::vector<std::string> channels;
        for (Channel c : all_channels()) channels.emplace_back(channel_name(c));
        m.attr("CHANNELS") = channels;
        std::vector<std::string> emotions;
        for (Emotion e : all_emotions()) emotions.emplace_back(emotion_name(e));
        m.attr("EMOTIONS") = emotions;
    }
    m.def("left_channels", [] { return names_of(left_channels()); },
          "Left-stream channel names, homologue-ordered.");
    m.def("right_channels", [] { return names_of(right_channels()); },
          "Right-stream channel names, homologue-ordered.");

    // ---- recordings and datasets -------------------------------------------

    py::class_<Recording>(m, "Recording")
        .def(py::init<>())
        .def_readwrite("subject_id", &Recording::subject_id)
        .def_readwrite("trial_id", &Recording::trial_id)
        .def_readwrite("fs", &Recording::fs)
        .def_property(
            "label", [](const Recording& r) { return label_to_py(r.label); },
            [](Recording& r, const py::object& v) {
                if (v.is_none())
                    r.label.reset();
                else
                    r.label = parse_emotion(v.cast<std::string>());
            },
            "Emotion name, or None for unlabeled recordings.")
        .def_property_readonly("n_samples", &Recording::n_samples)
        .def("waveform",
             [](const Recording& r, const std::string& channel) {
                 return r.waveform(parse_channel(channel));
             },
             py::arg("channel"), "Copy of one channel's samples in microvolts.")
        .def("set_waveform",
             [](Recording& r, const std::string& channel, std::vector<double> samples) {
                 r.waveform(parse_channel(channel)) = std::move(samples);
             },
             py::arg("channel"), py::arg("samples"))
        .def("validate", &Recording::validate)
        .def("__repr__", [](const Recording& r) {
            return "<Recording " + r.subject_id + "/" + r.trial_id + ", " +
                   std::to_string(r.n_samples()) + " samples>";
        });

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_property(
            "split", [](const Dataset& d) { return std::string(split_name(d.split)); },
            [](Dataset& d, const std::string& s) { d.split = parse_split(s); })
        .def("__len__", [](const Dataset& d) { return d.recordings.size(); })
        .def("recording",
             [](Dataset& d, std::size_t i) -> Recording& {
                 if (i >= d.recordings.size())
                     throw ConfigError("recording index " + std::to_string(i) +
                                       " out of range (have " +
                                       std::to_string(d.recordings.size()) + ")");
                 return d.recordings[i];
             },
             py::arg("i"), py::return_value_policy::reference_internal)
        .def("add", [](Dataset& d, const Recording& r) { d.recordings.push_back(r); },
             py::arg("recording"))
        .def("validate", &Dataset::validate)
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + std::string(split_name(d.split)) + ", " +
                   std::to_string(d.recordings.size()) + " recordings>";
        });

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("n_subjects", &SynthSpec::n_subjects)
        .def_readwrite("n_reps", &SynthSpec::n_reps)
        .def_readwrite("fs", &SynthSpec::fs)
        .def_readwrite("duration", &SynthSpec::duration)
        .def_readwrite("carrier_hz", &SynthSpec::carrier_hz)
        .def_readwrite("asymmetry", &SynthSpec::asymmetry)
        .def_readwrite("noise_sigma", &SynthSpec::noise_sigma)
        .def_property(
            "split", [](const SynthSpec& s) { return std::string(split_name(s.split)); },
            [](SynthSpec& s, const std::string& name) { s.split = parse_split(name); })
        .def("validate", &SynthSpec::validate)
        .def_static("from_json_file", &SynthSpec::from_json_file, py::arg("path"));

    py::class_<Manifest>(m, "Manifest")
        .def(py::init<>())
        .def_readwrite("fs_hz", &Manifest::fs_hz)
        .def_readwrite("units", &Manifest::units)
        .def_property(
            "split", [](const Manifest& mf) { return std::string(split_name(mf.split)); },
            [](Manifest& mf, const std::string& s) { mf.split = parse_split(s); });

    m.def("gen_synthetic", &gen_synthetic, py::arg("spec"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>(),
          "Labeled synthetic EEG, deterministic per (spec, seed).");
    m.def("load_csv", &load_csv, py::arg("csv_path"), py::arg("manifest_path"));
    m.def("save_csv", &save_csv, py::arg("dataset"), py::arg("csv_path"),
          "Waveforms at 17 significant digits, so load(save(ds)) is bit-identical.");
    m.def("load_manifest", &load_manifest, py::arg("path"));
    m.def("save_manifest", &save_manifest, py::arg("manifest"), py::arg("path"));

    // ---- preprocessing ------------------------------------------------------

    py::class_<FilterSpec>(m, "FilterSpec")
        .def(py::init<>())
        .def_readwrite("low_hz", &FilterSpec::low_hz)
        .def_readwrite("high_hz", &FilterSpec::high_hz)
        .def_readwrite("order", &FilterSpec::order);

    py::class_<PreprocessConfig>(m, "PreprocessConfig")
        .def(py::init<>())
        .def_readwrite("band", &PreprocessConfig::band)
        .def_readwrite("trim_seconds", &PreprocessConfig::trim_seconds);

    m.def("preprocess_dataset", &preprocess_dataset, py::arg("dataset"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Mastoid re-reference, Butterworth band-pass, delay trim.");
    m.def("mirror_channels", &mirror_channels, py::arg("recording"),
          "Swap every homologous left/right channel pair.");

    // ---- spectra ------------------------------------------------------------

    m.def("fft",
          [](std::vector<std::complex<double>> a) {
              fft(a);
              return a;
          },
          py::arg("values"), "Radix-2 FFT; the length must be a power of two.");
    m.def("ifft",
          [](std::vector<std::complex<double>> a) {
              ifft(a);
              return a;
          },
          py::arg("values"), "Inverse FFT with the 1/N convention.");
    m.def("fft_real", &fft_real, py::arg("values"));
    m.def("hann_window", &hann_window, py::arg("length"));
    m.def("band_bin_indices", &band_bin_indices, py::arg("window_len"), py::arg("fs"),
          py::arg("lo_hz"), py::arg("hi_hz"));

    py::class_<SpectralConfig>(m, "SpectralConfig")
        .def(py::init<>())
        .def_readwrite("window_len", &SpectralConfig::window_len)
        .def_readwrite("hop", &SpectralConfig::hop)
        .def_readwrite("band_lo_hz", &SpectralConfig::band_lo_hz)
        .def_readwrite("band_hi_hz", &SpectralConfig::band_hi_hz)
        .def_readwrite("log_magnitude", &SpectralConfig::log_magnitude)
        .def("validate", &SpectralConfig::validate);

    m.def("stft_band_magnitudes", &stft_band_magnitudes, py::arg("values"), py::arg("fs"),
          py::arg("config"), "Per-frame magnitudes of the in-band STFT bins.");

    // ---- model and experiment configuration ---------------------------------

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("conv_filters", &ModelConfig::conv_filters)
        .def_readwrite("conv_kernel", &ModelConfig::conv_kernel)
        .def_readwrite("pool", &ModelConfig::pool)
        .def_readwrite("lstm_units", &ModelConfig::lstm_units)
        .def_readwrite("dense_units", &ModelConfig::dense_units)
        .def_readwrite("dropout_rate", &ModelConfig::dropout_rate)
        .def_readwrite("l2_lambda", &ModelConfig::l2_lambda);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("preproc", &ExperimentConfig::preproc)
        .def_readwrite("spectral", &ExperimentConfig::spectral)
        .def_readwrite("model", &ExperimentConfig::model)
        .def_property(
            "variant",
            [](const ExperimentConfig& c) { return std::string(variant_name(c.variant)); },
            [](ExperimentConfig& c, const std::string& v) { c.variant = parse_variant(v); })
        .def_readwrite("epochs", &ExperimentConfig::epochs)
        .def_readwrite("batch_size", &ExperimentConfig::batch_size)
        .def_readwrite("lr", &ExperimentConfig::lr)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("early_stop_patience", &ExperimentConfig::early_stop_patience)
        .def("validate", &ExperimentConfig::validate)
        .def_static("from_json_str",
                    [](const std::string& text) {
                        return ExperimentConfig::from_json(parse_json_str(text));
                    },
                    py::arg("text"))
        .def_static("from_json_file", &ExperimentConfig::from_json_file, py::arg("path"))
        .def("to_json_str", [](const ExperimentConfig& c) { return c.to_json().dump(2); });

    py::class_<ModelParams>(m, "ModelParams")
        .def_property_readonly(
            "variant", [](const ModelParams& p) { return std::string(variant_name(p.variant)); })
        .def_readonly("input_features", &ModelParams::input_features)
        .def_readonly("seed", &ModelParams::seed);

    m.def("param_count",
          [](const ModelConfig& cfg, const std::string& variant, std::size_t input_features) {
              return param_count(cfg, parse_variant(variant), input_features);
          },
          py::arg("config"), py::arg("variant"), py::arg("input_features"));
    m.def("save_model", &save_model, py::arg("params"), py::arg("config"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"),
          "Returns the (params, model_config) pair written by save_model.");

    // ---- training and evaluation --------------------------------------------

    py::class_<LossCurvePoint>(m, "LossCurvePoint")
        .def_readonly("epoch", &LossCurvePoint::epoch)
        .def_readonly("train_loss", &LossCurvePoint::train_loss)
        .def_readonly("val_loss", &LossCurvePoint::val_loss)
        .def_readonly("val_acc", &LossCurvePoint::val_acc)
        .def("__repr__", [](const LossCurvePoint& p) {
            return "<LossCurvePoint epoch " + std::to_string(p.epoch) + ">";
        });

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("accuracy", &EvalReport::accuracy)
        .def_readonly("loss", &EvalReport::loss)
        .def_readonly("n_samples", &EvalReport::n_samples)
        .def_readonly("confusion", &EvalReport::confusion)
        .def_readonly("confusion_pct", &EvalReport::confusion_pct)
        .def_readonly("per_class_recall", &EvalReport::per_class_recall)
        .def_readonly("loss_curve", &EvalReport::loss_curve)
        .def("to_json_str", [](const EvalReport& r) { return r.to_json().dump(2); })
        .def("save_confusion_csv", &EvalReport::save_confusion_csv, py::arg("path"))
        .def("save_loss_curve_csv", &EvalReport::save_loss_curve_csv, py::arg("path"));

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("params", &TrainResult::params)
        .def_readonly("report", &TrainResult::report);

    py::class_<Prediction>(m, "Prediction")
        .def_readonly("subject_id", &Prediction::subject_id)
        .def_readonly("trial_id", &Prediction::trial_id)
        .def_property_readonly(
            "label", [](const Prediction& p) { return std::string(emotion_name(p.label)); })
        .def_readonly("probs", &Prediction::probs)
        .def("__repr__", [](const Prediction& p) {
            return "<Prediction " + p.subject_id + "/" + p.trial_id + " -> " +
                   std::string(emotion_name(p.label)) + ">";
        });

    m.def("train", &train, py::arg("train_ds"), py::arg("val_ds"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Mini-batch Adam with early stopping; returns the best-epoch params.");
    m.def("evaluate", &evaluate, py::arg("dataset"), py::arg("params"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("predict", &predict, py::arg("dataset"), py::arg("params"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Per-recording class probabilities and argmax labels.");

    py::class_<VariantRow>(m, "VariantRow")
        .def_property_readonly(
            "variant", [](const VariantRow& r) { return std::string(variant_name(r.variant)); })
        .def_readonly("mean_acc", &VariantRow::mean_acc)
        .def_readonly("std_acc", &VariantRow::std_acc)
        .def_readonly("seed_accs", &VariantRow::seed_accs);

    py::class_<ComparisonTable>(m, "ComparisonTable")
        .def_readonly("rows", &ComparisonTable::rows)
        .def_readonly("diff", &ComparisonTable::diff);

    m.def("compare_variants", &compare_variants, py::arg("train_ds"), py::arg("val_ds"),
          py::arg("config"), py::arg("n_seeds"), py::call_guard<py::gil_scoped_release>(),
          "Mono vs bi accuracy over derived seeds on identical data.");

    // ---- temporal scan -------------------------------------------------------

    py::class_<IntervalResult>(m, "IntervalResult")
        .def_readonly("variant", &IntervalResult::variant)
        .def_readonly("j", &IntervalResult::j)
        .def_readonly("train_acc", &IntervalResult::train_acc)
        .def_readonly("val_acc", &IntervalResult::val_acc)
        .def_readonly("status", &IntervalResult::status)
        .def_readonly("reason", &IntervalResult::reason);

    py::class_<TemporalScanReport>(m, "TemporalScanReport")
        .def_readonly("rows", &TemporalScanReport::rows);

    m.def("temporal_scan", &temporal_scan, py::arg("train_ds"), py::arg("val_ds"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>(),
          "Per-interval retraining over the 8 equal time slices.");
    m.def("save_scan_csv", &save_scan_csv, py::arg("report"), py::arg("path"));

    // ---- gradient audit -------------------------------------------------------

    py::class_<GradSuiteRow>(m, "GradSuiteRow")
        .def_readonly("op", &GradSuiteRow::op)
        .def_readonly("max_rel_err", &GradSuiteRow::max_rel_err)
        .def_readonly("trials", &GradSuiteRow::trials)
        .def_readonly("coords_checked", &GradSuiteRow::coords_checked)
        .def_readonly("coords_skipped", &GradSuiteRow::coords_skipped)
        .def("__repr__", [](const GradSuiteRow& r) {
            return "<GradSuiteRow " + r.op + ">";
        });

    m.def("run_gradient_suite", &run_gradient_suite, py::arg("seed"), py::arg("trials"),
          py::call_guard<py::gil_scoped_release>(),
          "Finite-difference audit of every op plus the full model loss.");
}
