#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "neurostream/dataset_io.hpp"
#include "neurostream/model.hpp"
#include "neurostream/preprocess.hpp"
#include "neurostream/spectral.hpp"
#include "neurostream/temporal.hpp"

namespace neurostream {

// Section parsers shared by ExperimentConfig and the single-stage CLI
// commands; unknown keys are rejected.
PreprocessConfig preproc_config_from_json(const json& j);
SpectralConfig spectral_config_from_json(const json& j);

struct ExperimentConfig {
    PreprocessConfig preproc;
    SpectralConfig spectral;
    ModelConfig model;
    Variant variant = Variant::Bi;
    std::size_t epochs = 200;
    std::size_t batch_size = 16;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    std::size_t early_stop_patience = 30;  // epochs without validation-loss improvement

    void validate() const;
    static ExperimentConfig from_json(const json& j);
    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    json to_json() const;
};

struct LossCurvePoint {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;  // percent
};

struct EvalReport {
    double accuracy = 0.0;  // percent
    double loss = 0.0;      // mean cross-entropy + l2 term
    std::size_t n_samples = 0;
    // confusion[true][predicted]
    std::array<std::array<std::size_t, kNumEmotions>, kNumEmotions> confusion{};
    // Row-normalized percents; all-zero row for classes absent from the data.
    std::array<std::array<double, kNumEmotions>, kNumEmotions> confusion_pct{};
    std::array<double, kNumEmotions> per_class_recall{};  // percent
    std::vector<LossCurvePoint> loss_curve;               // filled by train()

    json to_json() const;
    void save_confusion_csv(const std::filesystem::path& path) const;
    void save_loss_curve_csv(const std::filesystem::path& path) const;
};

struct FeaturizedSample {
    SampleFeatures features;
    std::optional<Emotion> label;
    std::string subject_id;
    std::string trial_id;
};

// Full pipeline per recording: preprocess -> spectral features -> stream
// split per the configured variant.
std::vector<FeaturizedSample> featurize(const Dataset& ds, const ExperimentConfig& cfg);
// The same minus preprocessing, with an explicit spectral configuration
// (temporal scan uses shorter windows on interval slices).
std::vector<FeaturizedSample> featurize_preprocessed(const std::vector<PreprocRecording>& recs,
                                                     const SpectralConfig& spectral,
                                                     Variant variant);

struct TrainResult {
    ModelParams params;  // the epoch with the lowest validation loss
    EvalReport report;   // validation metrics of those params + the loss curve
};

// Mini-batch Adam with seeded shuffling, per-epoch validation, best-loss
// checkpointing, and early stopping. Deterministic per (data, cfg, seed).
TrainResult train(const Dataset& train_ds, const Dataset& val_ds, const ExperimentConfig& cfg);
TrainResult train_on_samples(const std::vector<FeaturizedSample>& train_samples,
                             const std::vector<FeaturizedSample>& val_samples,
                             const ExperimentConfig& cfg);

EvalReport evaluate(const Dataset& ds, const ModelParams& params, const ExperimentConfig& cfg);
EvalReport evaluate_samples(const std::vector<FeaturizedSample>& samples,
                            const ModelParams& params, const ExperimentConfig& cfg);

struct Prediction {
    std::string subject_id;
    std::string trial_id;
    Emotion label;  // argmax, lowest class index on exact ties
    std::array<double, kNumEmotions> probs;
};

std::vector<Prediction> predict(const Dataset& ds, const ModelParams& params,
                                const ExperimentConfig& cfg);

struct VariantRow {
    Variant variant = Variant::Mono;
    double mean_acc = 0.0;  // percent, over seeds
    double std_acc = 0.0;   // population standard deviation
    std::vector<double> seed_accs;
};

struct ComparisonTable {
    std::array<VariantRow, 2> rows;  // mono then bi
    double diff = 0.0;               // bi mean - mono mean
};

// Trains both variants on identical data and derived seeds.
ComparisonTable compare_variants(const Dataset& train_ds, const Dataset& val_ds,
                                 const ExperimentConfig& base_cfg, std::size_t n_seeds);

}  // namespace neurostream
