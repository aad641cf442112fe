#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "neurostream/autodiff.hpp"
#include "neurostream/channels.hpp"
#include "neurostream/hemisplit.hpp"
#include "neurostream/json_util.hpp"

namespace neurostream {

enum class Variant { Mono, Bi };
std::string_view variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

struct ModelConfig {
    std::size_t conv_filters = 32;
    std::size_t conv_kernel = 3;
    std::size_t pool = 2;
    std::size_t lstm_units = 64;
    std::size_t dense_units = 64;
    double dropout_rate = 0.5;
    double l2_lambda = 1e-3;
    std::size_t n_classes = kNumEmotions;

    void validate() const;
    static ModelConfig from_json(const json& j);
    json to_json() const;
};

struct StreamParams {
    NamedParam conv_kernels;  // [K, F_in, conv_filters]
    NamedParam conv_bias;     // [conv_filters]
    NamedParam lstm_w;        // [conv_filters, 4H]
    NamedParam lstm_u;        // [H, 4H]
    NamedParam lstm_b;        // [4H]
};

// Bi variant: streams[0] = left, streams[1] = right, head input 2H.
// Mono variant: streams[0] over all channels, head input H.
struct ModelParams {
    Variant variant = Variant::Bi;
    std::size_t input_features = 0;  // per-stream F_in = channels x bins
    std::uint64_t seed = 0;
    std::vector<StreamParams> streams;
    NamedParam head_w;  // [head_in, dense_units], the L2-regularized weights
    NamedParam head_b;
    NamedParam out_w;  // [dense_units, n_classes]
    NamedParam out_b;

    // Stable order; the returned NamedParams share tensor storage with the
    // model (Var is a shared_ptr), so optimizer updates act on the model.
    std::vector<NamedParam> all_params() const;
    ModelParams clone() const;  // deep copy of values (fresh storage)
};

// Glorot-uniform weights, zero biases, LSTM forget-gate bias +1;
// deterministic in (cfg, variant, input_features, seed).
ModelParams init_params(const ModelConfig& cfg, Variant variant, std::size_t input_features,
                        std::uint64_t seed);

// Per-sample features, one [frames, channels, bins] tensor per stream.
struct SampleFeatures {
    std::vector<FeatureTensor> streams;
};

SampleFeatures bi_sample(const HemiFeatures& pair);
SampleFeatures mono_sample(const FeatureTensor& full);

// Raw class scores (pre-softmax) of one sample; the training-loss path.
Var model_logits(Graph& g, const SampleFeatures& sample, const ModelParams& params,
                 const ModelConfig& cfg, Mode mode, Rng& rng);

// Probability outputs; eval mode is a pure function of (input, params).
std::array<double, kNumEmotions> forward_bi(const HemiFeatures& pair, const ModelParams& params,
                                            const ModelConfig& cfg, Mode mode, Rng& rng);
std::array<double, kNumEmotions> forward_mono(const FeatureTensor& full,
                                              const ModelParams& params, const ModelConfig& cfg,
                                              Mode mode, Rng& rng);

// Reporting-path loss on probability outputs: mean cross-entropy plus
// l2_lambda * ||head weights||^2.
double model_loss(const std::vector<std::array<double, kNumEmotions>>& probs,
                  const std::vector<Emotion>& labels, const ModelParams& params,
                  const ModelConfig& cfg);

// Exact trainable-scalar count for the given geometry.
std::size_t param_count(const ModelConfig& cfg, Variant variant, std::size_t input_features);

// Bi-model mirror: exchanges the two streams along with each stream's slice
// of the head weight matrix, so mirrored inputs give the original outputs.
ModelParams mirror_params(const ModelParams& params, const ModelConfig& cfg);

void save_model(const ModelParams& params, const ModelConfig& cfg,
                const std::filesystem::path& path);
std::pair<ModelParams, ModelConfig> load_model(const std::filesystem::path& path);

}  // namespace neurostream
