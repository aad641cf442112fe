#include "neurostream/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "neurostream/errors.hpp"

namespace neurostream {

PreprocessConfig preproc_config_from_json(const json& j) {
    require_keys(j, {"low_hz", "high_hz", "order", "trim_seconds"}, "preproc config");
    PreprocessConfig cfg;
    cfg.band.low_hz = json_get<double>(j, "low_hz", cfg.band.low_hz);
    cfg.band.high_hz = json_get<double>(j, "high_hz", cfg.band.high_hz);
    cfg.band.order = json_get<int>(j, "order", cfg.band.order);
    cfg.trim_seconds = json_get<double>(j, "trim_seconds", cfg.trim_seconds);
    return cfg;
}

SpectralConfig spectral_config_from_json(const json& j) {
    require_keys(j, {"window_len", "hop", "band_lo_hz", "band_hi_hz", "log_magnitude"},
                 "spectral config");
    SpectralConfig cfg;
    cfg.window_len = json_get<std::size_t>(j, "window_len", cfg.window_len);
    cfg.hop = json_get<std::size_t>(j, "hop", cfg.hop);
    cfg.band_lo_hz = json_get<double>(j, "band_lo_hz", cfg.band_lo_hz);
    cfg.band_hi_hz = json_get<double>(j, "band_hi_hz", cfg.band_hi_hz);
    cfg.log_magnitude = json_get<bool>(j, "log_magnitude", cfg.log_magnitude);
    cfg.validate();
    return cfg;
}

namespace {

json preproc_to_json(const PreprocessConfig& cfg) {
    json j;
    j["low_hz"] = cfg.band.low_hz;
    j["high_hz"] = cfg.band.high_hz;
    j["order"] = cfg.band.order;
    j["trim_seconds"] = cfg.trim_seconds;
    return j;
}

json spectral_to_json(const SpectralConfig& cfg) {
    json j;
    j["window_len"] = cfg.window_len;
    j["hop"] = cfg.hop;
    j["band_lo_hz"] = cfg.band_lo_hz;
    j["band_hi_hz"] = cfg.band_hi_hz;
    j["log_magnitude"] = cfg.log_magnitude;
    return j;
}

}  // namespace

void ExperimentConfig::validate() const {
    model.validate();
    spectral.validate();
    if (epochs < 1) throw ConfigError("experiment config: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("experiment config: batch_size must be >= 1");
    if (!(lr > 0.0)) throw ConfigError("experiment config: lr must be positive");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    require_keys(j,
                 {"preproc", "spectral", "model", "variant", "epochs", "batch_size", "lr",
                  "seed", "early_stop_patience"},
                 "experiment config");
    ExperimentConfig cfg;
    if (j.contains("preproc")) cfg.preproc = preproc_config_from_json(j.at("preproc"));
    if (j.contains("spectral")) cfg.spectral = spectral_config_from_json(j.at("spectral"));
    if (j.contains("model")) cfg.model = ModelConfig::from_json(j.at("model"));
    if (j.contains("variant")) {
        const auto v = variant_from_name(json_get<std::string>(j, "variant", "bi"));
        if (!v) throw ConfigError("experiment config: variant must be mono or bi");
        cfg.variant = *v;
    }
    cfg.epochs = json_get<std::size_t>(j, "epochs", cfg.epochs);
    cfg.batch_size = json_get<std::size_t>(j, "batch_size", cfg.batch_size);
    cfg.lr = json_get<double>(j, "lr", cfg.lr);
    cfg.seed = json_get<std::uint64_t>(j, "seed", cfg.seed);
    cfg.early_stop_patience =
        json_get<std::size_t>(j, "early_stop_patience", cfg.early_stop_patience);
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
    return from_json(parse_json_file(path.string(), "experiment config"));
}

json ExperimentConfig::to_json() const {
    json j;
    j["preproc"] = preproc_to_json(preproc);
    j["spectral"] = spectral_to_json(spectral);
    j["model"] = model.to_json();
    j["variant"] = std::string(variant_name(variant));
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["lr"] = lr;
    j["seed"] = seed;
    j["early_stop_patience"] = early_stop_patience;
    return j;
}

json EvalReport::to_json() const {
    json j;
    j["accuracy"] = accuracy;
    j["loss"] = loss;
    j["n_samples"] = n_samples;
    json classes = json::array();
    for (Emotion e : all_emotions()) classes.push_back(std::string(emotion_name(e)));
    j["classes"] = classes;
    j["confusion"] = confusion;
    j["confusion_pct"] = confusion_pct;
    j["per_class_recall"] = per_class_recall;
    return j;
}

void EvalReport::save_confusion_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "true\\pred";
    for (Emotion e : all_emotions()) out << "," << emotion_name(e);
    out << "\n";
    for (std::size_t r = 0; r < kNumEmotions; ++r) {
        out << emotion_name(static_cast<Emotion>(r));
        for (std::size_t c = 0; c < kNumEmotions; ++c) out << "," << confusion[r][c];
        out << "\n";
    }
    if (!out) throw DataError("write failed for " + path.string());
}

void EvalReport::save_loss_curve_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "epoch,train_loss,val_loss,val_acc\n";
    char buf[160];
    for (const auto& p : loss_curve) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", p.epoch, p.train_loss,
                      p.val_loss, p.val_acc);
        out << buf;
    }
    if (!out) throw DataError("write failed for " + path.string());
}

std::vector<FeaturizedSample> featurize_preprocessed(const std::vector<PreprocRecording>& recs,
                                                     const SpectralConfig& spectral,
                                                     Variant variant) {
    std::vector<FeaturizedSample> out;
    out.reserve(recs.size());
    for (const auto& rec : recs) {
        FeaturizedSample s;
        s.label = rec.label;
        s.subject_id = rec.subject_id;
        s.trial_id = rec.trial_id;
        const FeatureTensor full = spectral_features(rec, spectral);
        s.features = variant == Variant::Bi ? bi_sample(hemisplit(full)) : mono_sample(full);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FeaturizedSample> featurize(const Dataset& ds, const ExperimentConfig& cfg) {
    ds.validate();
    std::vector<PreprocRecording> recs;
    recs.reserve(ds.recordings.size());
    for (const auto& rec : ds.recordings) recs.push_back(preprocess(rec, cfg.preproc));
    return featurize_preprocessed(recs, cfg.spectral, cfg.variant);
}

namespace {

std::size_t argmax_lowest(const std::array<double, kNumEmotions>& probs) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < kNumEmotions; ++j) {
        if (probs[j] > probs[best]) best = j;  // strict: lowest index wins ties
    }
    return best;
}

std::array<double, kNumEmotions> eval_probs(const FeaturizedSample& s, const ModelParams& params,
                                            const ModelConfig& cfg) {
    Rng unused(0);  // eval mode draws nothing
    Graph g;
    Var logits = model_logits(g, s.features, params, cfg, Mode::Eval, unused);
    Var probs = g.softmax(logits);
    std::array<double, kNumEmotions> out{};
    for (std::size_t j = 0; j < kNumEmotions; ++j) out[j] = probs->value[j];
    return out;
}

}  // namespace

EvalReport evaluate_samples(const std::vector<FeaturizedSample>& samples,
                            const ModelParams& params, const ExperimentConfig& cfg) {
    if (samples.empty()) throw DataError("evaluate: empty dataset");
    EvalReport rep;
    rep.n_samples = samples.size();
    std::vector<std::array<double, kNumEmotions>> probs;
    std::vector<Emotion> labels;
    probs.reserve(samples.size());
    labels.reserve(samples.size());
    std::size_t correct = 0;
    for (const auto& s : samples) {
        if (!s.label) {
            throw DataError("recording " + s.subject_id + "," + s.trial_id +
                            " is unlabeled; use predict for unlabeled data");
        }
        const auto p = eval_probs(s, params, cfg.model);
        const std::size_t pred = argmax_lowest(p);
        const auto truth = static_cast<std::size_t>(*s.label);
        rep.confusion[truth][pred]++;
        if (pred == truth) correct++;
        probs.push_back(p);
        labels.push_back(*s.label);
    }
    rep.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(samples.size());
    rep.loss = model_loss(probs, labels, params, cfg.model);
    for (std::size_t r = 0; r < kNumEmotions; ++r) {
        std::size_t row_total = 0;
        for (std::size_t c = 0; c < kNumEmotions; ++c) row_total += rep.confusion[r][c];
        if (row_total == 0) continue;  // class absent: keep zero row
        for (std::size_t c = 0; c < kNumEmotions; ++c) {
            rep.confusion_pct[r][c] =
                100.0 * static_cast<double>(rep.confusion[r][c]) / static_cast<double>(row_total);
        }
        rep.per_class_recall[r] = rep.confusion_pct[r][r];
    }
    return rep;
}

EvalReport evaluate(const Dataset& ds, const ModelParams& params, const ExperimentConfig& cfg) {
    return evaluate_samples(featurize(ds, cfg), params, cfg);
}

std::vector<Prediction> predict(const Dataset& ds, const ModelParams& params,
                                const ExperimentConfig& cfg) {
    const auto samples = featurize(ds, cfg);
    std::vector<Prediction> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        Prediction p;
        p.subject_id = s.subject_id;
        p.trial_id = s.trial_id;
        p.probs = eval_probs(s, params, cfg.model);
        p.label = static_cast<Emotion>(argmax_lowest(p.probs));
        out.push_back(std::move(p));
    }
    return out;
}

TrainResult train_on_samples(const std::vector<FeaturizedSample>& train_samples,
                             const std::vector<FeaturizedSample>& val_samples,
                             const ExperimentConfig& cfg) {
    cfg.validate();
    if (train_samples.empty()) throw DataError("train: empty training dataset");
    if (val_samples.empty()) throw DataError("train: empty validation dataset");
    for (const auto& s : train_samples) {
        if (!s.label) {
            throw DataError("recording " + s.subject_id + "," + s.trial_id +
                            " is unlabeled; training needs labels");
        }
    }
    std::array<std::size_t, kNumEmotions> class_counts{};
    for (const auto& s : train_samples) class_counts[static_cast<std::size_t>(*s.label)]++;
    for (std::size_t k = 0; k < kNumEmotions; ++k) {
        if (class_counts[k] == 0) {
            std::fprintf(stderr, "warning: class %s absent from training data\n",
                         std::string(emotion_name(static_cast<Emotion>(k))).c_str());
        }
    }

    const auto& f0 = train_samples.front().features.streams.front();
    const std::size_t input_features = f0.n_channels * f0.n_bins;
    ModelParams params = init_params(cfg.model, cfg.variant, input_features, cfg.seed);
    std::vector<NamedParam> flat = params.all_params();
    AdamState adam;
    adam.lr = cfg.lr;
    Rng drop_rng(mix_seed(cfg.seed, 0x44524f50ULL));  // "DROP"
    Rng shuf_rng(mix_seed(cfg.seed, 0x53485546ULL));  // "SHUF"

    const std::size_t n = train_samples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    double best_loss = std::numeric_limits<double>::infinity();
    ModelParams best = params.clone();
    std::size_t epochs_since_best = 0;
    std::vector<LossCurvePoint> curve;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuf_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            const std::size_t bn = stop - start;
            Graph g;
            std::vector<Var> rows;
            rows.reserve(bn);
            std::vector<double> onehot(bn * kNumEmotions, 0.0);
            for (std::size_t i = 0; i < bn; ++i) {
                const auto& s = train_samples[order[start + i]];
                rows.push_back(
                    model_logits(g, s.features, params, cfg.model, Mode::Train, drop_rng));
                onehot[i * kNumEmotions + static_cast<std::size_t>(*s.label)] = 1.0;
            }
            Var logits = g.stack_rows(rows);
            Var targets = make_leaf({bn, kNumEmotions}, std::move(onehot), false);
            Var xent = g.softmax_xent(logits, targets);
            Var loss = g.add(xent, g.l2_penalty({params.head_w.var}, cfg.model.l2_lambda));
            if (!std::isfinite(loss->value[0])) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(start / cfg.batch_size));
            }
            zero_grads(flat);
            g.backward(loss);
            adam_step(flat, adam);
            loss_sum += loss->value[0] * static_cast<double>(bn);
        }
        const double train_loss = loss_sum / static_cast<double>(n);
        const EvalReport val = evaluate_samples(val_samples, params, cfg);
        curve.push_back({epoch, train_loss, val.loss, val.accuracy});
        if (val.loss < best_loss) {
            best_loss = val.loss;
            best = params.clone();
            epochs_since_best = 0;
        } else if (++epochs_since_best >= cfg.early_stop_patience) {
            break;
        }
    }

    EvalReport report = evaluate_samples(val_samples, best, cfg);
    report.loss_curve = std::move(curve);
    return {std::move(best), std::move(report)};
}

TrainResult train(const Dataset& train_ds, const Dataset& val_ds, const ExperimentConfig& cfg) {
    return train_on_samples(featurize(train_ds, cfg), featurize(val_ds, cfg), cfg);
}

ComparisonTable compare_variants(const Dataset& train_ds, const Dataset& val_ds,
                                 const ExperimentConfig& base_cfg, std::size_t n_seeds) {
    if (n_seeds < 1) throw ConfigError("compare_variants: n_seeds must be >= 1");
    base_cfg.validate();
    ComparisonTable table;
    std::size_t row_idx = 0;
    for (Variant variant : {Variant::Mono, Variant::Bi}) {
        ExperimentConfig cfg = base_cfg;
        cfg.variant = variant;
        const auto train_samples = featurize(train_ds, cfg);
        const auto val_samples = featurize(val_ds, cfg);
        VariantRow row;
        row.variant = variant;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            cfg.seed = mix_seed(base_cfg.seed, 0xC0DEULL + s);
            row.seed_accs.push_back(
                train_on_samples(train_samples, val_samples, cfg).report.accuracy);
        }
        const double mean = std::accumulate(row.seed_accs.begin(), row.seed_accs.end(), 0.0) /
                            static_cast<double>(n_seeds);
        double var = 0.0;
        for (double a : row.seed_accs) var += (a - mean) * (a - mean);
        row.mean_acc = mean;
        row.std_acc = std::sqrt(var / static_cast<double>(n_seeds));
        table.rows[row_idx++] = std::move(row);
    }
    table.diff = table.rows[1].mean_acc - table.rows[0].mean_acc;
    return table;
}

}  // namespace neurostream
