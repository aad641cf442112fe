#include "neurostream/model.hpp"

#include <cmath>

#include "neurostream/checkpoint.hpp"
#include "neurostream/errors.hpp"

namespace neurostream {

std::string_view variant_name(Variant v) { return v == Variant::Mono ? "mono" : "bi"; }

std::optional<Variant> variant_from_name(std::string_view name) {
    if (name == "mono") return Variant::Mono;
    if (name == "bi") return Variant::Bi;
    return std::nullopt;
}

void ModelConfig::validate() const {
    if (conv_filters < 1 || conv_kernel < 1 || pool < 1 || lstm_units < 1 || dense_units < 1) {
        throw ConfigError("model config: layer sizes must be positive");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw ConfigError("model config: dropout_rate must lie in [0, 1)");
    }
    if (!(l2_lambda >= 0.0)) throw ConfigError("model config: l2_lambda must be >= 0");
    if (n_classes != kNumEmotions) {
        throw ConfigError("model config: n_classes must be " + std::to_string(kNumEmotions));
    }
}

ModelConfig ModelConfig::from_json(const json& j) {
    require_keys(j,
                 {"conv_filters", "conv_kernel", "pool", "lstm_units", "dense_units",
                  "dropout_rate", "l2_lambda", "n_classes"},
                 "model config");
    ModelConfig cfg;
    cfg.conv_filters = json_get<std::size_t>(j, "conv_filters", cfg.conv_filters);
    cfg.conv_kernel = json_get<std::size_t>(j, "conv_kernel", cfg.conv_kernel);
    cfg.pool = json_get<std::size_t>(j, "pool", cfg.pool);
    cfg.lstm_units = json_get<std::size_t>(j, "lstm_units", cfg.lstm_units);
    cfg.dense_units = json_get<std::size_t>(j, "dense_units", cfg.dense_units);
    cfg.dropout_rate = json_get<double>(j, "dropout_rate", cfg.dropout_rate);
    cfg.l2_lambda = json_get<double>(j, "l2_lambda", cfg.l2_lambda);
    cfg.n_classes = json_get<std::size_t>(j, "n_classes", cfg.n_classes);
    cfg.validate();
    return cfg;
}

json ModelConfig::to_json() const {
    json j;
    j["conv_filters"] = conv_filters;
    j["conv_kernel"] = conv_kernel;
    j["pool"] = pool;
    j["lstm_units"] = lstm_units;
    j["dense_units"] = dense_units;
    j["dropout_rate"] = dropout_rate;
    j["l2_lambda"] = l2_lambda;
    j["n_classes"] = n_classes;
    return j;
}

std::vector<NamedParam> ModelParams::all_params() const {
    std::vector<NamedParam> out;
    for (const auto& s : streams) {
        out.push_back(s.conv_kernels);
        out.push_back(s.conv_bias);
        out.push_back(s.lstm_w);
        out.push_back(s.lstm_u);
        out.push_back(s.lstm_b);
    }
    out.push_back(head_w);
    out.push_back(head_b);
    out.push_back(out_w);
    out.push_back(out_b);
    return out;
}

namespace {

NamedParam deep_copy(const NamedParam& p) {
    return {p.name, make_leaf(p.var->shape, p.var->value, true)};
}

}  // namespace

ModelParams ModelParams::clone() const {
    ModelParams out;
    out.variant = variant;
    out.input_features = input_features;
    out.seed = seed;
    for (const auto& s : streams) {
        out.streams.push_back({deep_copy(s.conv_kernels), deep_copy(s.conv_bias),
                               deep_copy(s.lstm_w), deep_copy(s.lstm_u), deep_copy(s.lstm_b)});
    }
    out.head_w = deep_copy(head_w);
    out.head_b = deep_copy(head_b);
    out.out_w = deep_copy(out_w);
    out.out_b = deep_copy(out_b);
    return out;
}

namespace {

// Glorot-uniform tensor: entries from +-sqrt(6 / (fan_in + fan_out)).
NamedParam glorot(const std::string& name, std::vector<std::size_t> shape, std::size_t fan_in,
                  std::size_t fan_out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::vector<double> v(shape_size(shape));
    for (double& x : v) x = (2.0 * rng.uniform() - 1.0) * bound;
    return {name, make_leaf(std::move(shape), std::move(v), true)};
}

NamedParam zeros(const std::string& name, std::vector<std::size_t> shape) {
    return {name, make_leaf(std::move(shape), std::vector<double>(shape_size(shape), 0.0), true)};
}

StreamParams init_stream(const std::string& prefix, const ModelConfig& cfg, std::size_t f_in,
                         Rng& rng) {
    const std::size_t k = cfg.conv_kernel, co = cfg.conv_filters, h = cfg.lstm_units;
    StreamParams s;
    s.conv_kernels = glorot(prefix + ".conv_kernels", {k, f_in, co}, k * f_in, k * co, rng);
    s.conv_bias = zeros(prefix + ".conv_bias", {co});
    s.lstm_w = glorot(prefix + ".lstm_W", {co, 4 * h}, co, 4 * h, rng);
    s.lstm_u = glorot(prefix + ".lstm_U", {h, 4 * h}, h, 4 * h, rng);
    s.lstm_b = zeros(prefix + ".lstm_b", {4 * h});
    // Forget-gate bias +1 (gate column order i, f, g, o) for stable early training.
    for (std::size_t j = 0; j < h; ++j) s.lstm_b.var->value[h + j] = 1.0;
    return s;
}

}  // namespace

ModelParams init_params(const ModelConfig& cfg, Variant variant, std::size_t input_features,
                        std::uint64_t seed) {
    cfg.validate();
    if (input_features < 1) throw ShapeError("init_params: input_features must be >= 1");
    Rng rng(mix_seed(seed, 0x494e4954ULL));  // "INIT"
    ModelParams p;
    p.variant = variant;
    p.input_features = input_features;
    p.seed = seed;
    if (variant == Variant::Bi) {
        p.streams.push_back(init_stream("left", cfg, input_features, rng));
        p.streams.push_back(init_stream("right", cfg, input_features, rng));
    } else {
        p.streams.push_back(init_stream("all", cfg, input_features, rng));
    }
    const std::size_t head_in = cfg.lstm_units * p.streams.size();
    p.head_w = glorot("head.W", {head_in, cfg.dense_units}, head_in, cfg.dense_units, rng);
    p.head_b = zeros("head.b", {cfg.dense_units});
    p.out_w = glorot("out.W", {cfg.dense_units, cfg.n_classes}, cfg.dense_units, cfg.n_classes,
                     rng);
    p.out_b = zeros("out.b", {cfg.n_classes});
    return p;
}

SampleFeatures bi_sample(const HemiFeatures& pair) {
    if (pair.left.n_frames != pair.right.n_frames || pair.left.n_bins != pair.right.n_bins ||
        pair.left.n_channels != pair.right.n_channels) {
        throw ShapeError("bi_sample: left/right feature shapes differ");
    }
    return {{pair.left, pair.right}};
}

SampleFeatures mono_sample(const FeatureTensor& full) { return {{full}}; }

namespace {

// [frames, channels, bins] -> autodiff input [T, channels*bins]; the tensor
// is frame-major, so the flatten is a reinterpretation.
Var feature_leaf(const FeatureTensor& f) {
    return make_leaf({f.n_frames, f.n_channels * f.n_bins}, f.data, false);
}

Var stream_forward(Graph& g, const FeatureTensor& feats, const StreamParams& p,
                   const ModelConfig& cfg, Mode mode, Rng& rng) {
    if (feats.n_frames < cfg.conv_kernel * cfg.pool) {
        throw ShapeError("stream: too few frames (" + std::to_string(feats.n_frames) +
                         ") for conv_kernel " + std::to_string(cfg.conv_kernel) + " and pool " +
                         std::to_string(cfg.pool));
    }
    Var x = feature_leaf(feats);
    Var conv = g.conv1d(x, p.conv_kernels.var, p.conv_bias.var);
    Var pooled = g.maxpool1d(conv, cfg.pool);
    Var drop1 = g.dropout(pooled, cfg.dropout_rate, mode, rng);
    Var hidden = g.lstm(drop1, p.lstm_w.var, p.lstm_u.var, p.lstm_b.var);
    Var drop2 = g.dropout(hidden, cfg.dropout_rate, mode, rng);
    return drop2;  // flatten of a vector is the identity
}

}  // namespace

Var model_logits(Graph& g, const SampleFeatures& sample, const ModelParams& params,
                 const ModelConfig& cfg, Mode mode, Rng& rng) {
    cfg.validate();
    if (sample.streams.size() != params.streams.size()) {
        throw ShapeError("model: sample has " + std::to_string(sample.streams.size()) +
                         " streams, params expect " + std::to_string(params.streams.size()));
    }
    for (const auto& f : sample.streams) {
        if (f.n_channels * f.n_bins != params.input_features) {
            throw ShapeError("model: stream features " + std::to_string(f.n_channels * f.n_bins) +
                             " do not match trained input_features " +
                             std::to_string(params.input_features));
        }
    }
    Var joined = stream_forward(g, sample.streams[0], params.streams[0], cfg, mode, rng);
    for (std::size_t s = 1; s < sample.streams.size(); ++s) {
        joined = g.concat(joined,
                          stream_forward(g, sample.streams[s], params.streams[s], cfg, mode, rng));
    }
    Var hidden = g.dense(joined, params.head_w.var, params.head_b.var, Activation::Relu);
    return g.dense(hidden, params.out_w.var, params.out_b.var, Activation::None);
}

namespace {

std::array<double, kNumEmotions> forward_probs(const SampleFeatures& sample,
                                               const ModelParams& params, const ModelConfig& cfg,
                                               Mode mode, Rng& rng) {
    Graph g;
    Var logits = model_logits(g, sample, params, cfg, mode, rng);
    Var probs = g.softmax(logits);
    std::array<double, kNumEmotions> out{};
    for (std::size_t j = 0; j < kNumEmotions; ++j) out[j] = probs->value[j];
    return out;
}

}  // namespace

std::array<double, kNumEmotions> forward_bi(const HemiFeatures& pair, const ModelParams& params,
                                            const ModelConfig& cfg, Mode mode, Rng& rng) {
    if (params.variant != Variant::Bi) throw ConfigError("forward_bi: params are not a bi model");
    return forward_probs(bi_sample(pair), params, cfg, mode, rng);
}

std::array<double, kNumEmotions> forward_mono(const FeatureTensor& full,
                                              const ModelParams& params, const ModelConfig& cfg,
                                              Mode mode, Rng& rng) {
    if (params.variant != Variant::Mono) {
        throw ConfigError("forward_mono: params are not a mono model");
    }
    return forward_probs(mono_sample(full), params, cfg, mode, rng);
}

double model_loss(const std::vector<std::array<double, kNumEmotions>>& probs,
                  const std::vector<Emotion>& labels, const ModelParams& params,
                  const ModelConfig& cfg) {
    if (probs.size() != labels.size() || probs.empty()) {
        throw ShapeError("model_loss: need equally many probability rows and labels, >= 1");
    }
    double xent = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        const double p = probs[n][static_cast<std::size_t>(labels[n])];
        xent -= std::log(std::max(p, 1e-15));  // clip: ln of a true one-hot hit is exactly 0
    }
    xent /= static_cast<double>(probs.size());
    double l2 = 0.0;
    for (double w : params.head_w.var->value) l2 += w * w;
    return xent + cfg.l2_lambda * l2;
}

std::size_t param_count(const ModelConfig& cfg, Variant variant, std::size_t input_features) {
    cfg.validate();
    const std::size_t k = cfg.conv_kernel, co = cfg.conv_filters, h = cfg.lstm_units;
    const std::size_t d = cfg.dense_units, c = cfg.n_classes;
    const std::size_t conv = k * input_features * co + co;
    const std::size_t lstm = 4 * (co * h + h * h + h);
    const std::size_t n_streams = variant == Variant::Bi ? 2 : 1;
    const std::size_t head_in = h * n_streams;
    const std::size_t head = head_in * d + d;
    const std::size_t out = d * c + c;
    return n_streams * (conv + lstm) + head + out;
}

ModelParams mirror_params(const ModelParams& params, const ModelConfig& cfg) {
    if (params.variant != Variant::Bi || params.streams.size() != 2) {
        throw ConfigError("mirror_params: only defined for the bi model");
    }
    ModelParams out = params.clone();
    std::swap(out.streams[0], out.streams[1]);
    // Each stream owns a block of head rows; the blocks travel with the
    // streams. head_w is [2H, dense_units].
    const std::size_t h = cfg.lstm_units, d = cfg.dense_units;
    auto& w = out.head_w.var->value;
    const auto& src = params.head_w.var->value;
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            w[i * d + j] = src[(h + i) * d + j];
            w[(h + i) * d + j] = src[i * d + j];
        }
    }
    return out;
}

void save_model(const ModelParams& params, const ModelConfig& cfg,
                const std::filesystem::path& path) {
    json meta;
    meta["variant"] = std::string(variant_name(params.variant));
    meta["input_features"] = params.input_features;
    meta["seed"] = params.seed;
    meta["model"] = cfg.to_json();
    Checkpoint ck;
    ck.meta_json = meta.dump();
    for (const auto& p : params.all_params()) ck.tensors.emplace_back(p.name, p.var);
    save_checkpoint(ck, path);
}

std::pair<ModelParams, ModelConfig> load_model(const std::filesystem::path& path) {
    const Checkpoint ck = load_checkpoint(path);
    json meta;
    try {
        meta = json::parse(ck.meta_json);
    } catch (const json::parse_error& e) {
        throw DataError("checkpoint: bad metadata: " + std::string(e.what()));
    }
    const auto variant = variant_from_name(json_get<std::string>(meta, "variant", ""));
    if (!variant) throw DataError("checkpoint: unknown variant in metadata");
    const auto input_features = json_get<std::size_t>(meta, "input_features", 0);
    const auto seed = json_get<std::uint64_t>(meta, "seed", 0);
    if (!meta.contains("model")) throw DataError("checkpoint: missing model config");
    const ModelConfig cfg = ModelConfig::from_json(meta.at("model"));

    ModelParams p = init_params(cfg, *variant, input_features, seed);
    auto expected = p.all_params();
    if (expected.size() != ck.tensors.size()) {
        throw DataError("checkpoint: expected " + std::to_string(expected.size()) +
                        " tensors, found " + std::to_string(ck.tensors.size()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& [name, var] = ck.tensors[i];
        if (name != expected[i].name) {
            throw DataError("checkpoint: tensor " + std::to_string(i) + " is '" + name +
                            "', expected '" + expected[i].name + "'");
        }
        if (var->shape != expected[i].var->shape) {
            throw DataError("checkpoint: tensor '" + name + "' has shape " +
                            shape_str(var->shape) + ", expected " +
                            shape_str(expected[i].var->shape));
        }
        expected[i].var->value = var->value;  // shared storage: updates the model
    }
    return {std::move(p), cfg};
}

}  // namespace neurostream
