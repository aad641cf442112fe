// neurostream CLI: every pipeline stage as a subcommand, JSON-configured.
// Exit codes: 0 ok, 1 usage/config, 2 bad data, 3 numerical failure.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neurostream/channels.hpp"
#include "neurostream/checkpoint.hpp"
#include "neurostream/dataset_io.hpp"
#include "neurostream/errors.hpp"
#include "neurostream/gradsuite.hpp"
#include "neurostream/harness.hpp"
#include "neurostream/hemisplit.hpp"
#include "neurostream/json_util.hpp"
#include "neurostream/model.hpp"
#include "neurostream/preprocess.hpp"
#include "neurostream/spectral.hpp"
#include "neurostream/temporal.hpp"

namespace fs = std::filesystem;
using namespace neurostream;

namespace {

// data.csv -> data.manifest.json, the sidecar convention used throughout.
fs::path manifest_for(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".manifest.json");
    return p;
}

Dataset load_dataset(const fs::path& csv, const std::string& manifest_flag) {
    const fs::path m = manifest_flag.empty() ? manifest_for(csv) : fs::path(manifest_flag);
    return load_csv(csv, m);
}

// Single-stage commands accept either their bare section or a full experiment
// config; in the latter case the relevant section is picked out.
PreprocessConfig preproc_section(const fs::path& path) {
    const json j = parse_json_file(path.string(), "preproc config");
    return preproc_config_from_json(j.contains("preproc") ? j.at("preproc") : j);
}

SpectralConfig spectral_section(const fs::path& path) {
    const json j = parse_json_file(path.string(), "spectral config");
    return spectral_config_from_json(j.contains("spectral") ? j.at("spectral") : j);
}

ExperimentConfig experiment_config(const fs::path& path, const CLI::Option* seed_opt,
                                   std::uint64_t seed_flag) {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(path);
    if (seed_opt->count() > 0) cfg.seed = seed_flag;
    return cfg;
}

// The checkpoint must have been produced by the exact model section the
// caller is about to evaluate under; silent drift would poison comparisons.
void check_model_compat(const ModelParams& params, const ModelConfig& ckpt_cfg,
                        const ExperimentConfig& cfg, const std::string& ckpt_path) {
    if (params.variant != cfg.variant) {
        throw ConfigError("checkpoint " + ckpt_path + " holds a " +
                          std::string(variant_name(params.variant)) +
                          " model but the config requests " +
                          std::string(variant_name(cfg.variant)));
    }
    if (ckpt_cfg.to_json() != cfg.model.to_json()) {
        throw ConfigError("checkpoint " + ckpt_path +
                          " was trained with a different model section than the config; "
                          "refusing to evaluate under mismatched hyperparameters");
    }
}

void print_report(const EvalReport& r) {
    std::printf("samples    %zu\n", r.n_samples);
    std::printf("accuracy   %.2f%%\n", r.accuracy);
    std::printf("loss       %.6f\n", r.loss);
    std::printf("recall     ");
    for (std::size_t k = 0; k < kNumEmotions; ++k) {
        std::printf("%s%s %.1f%%", k ? "  " : "",
                    std::string(emotion_name(static_cast<Emotion>(k))).c_str(),
                    r.per_class_recall[k]);
    }
    std::printf("\n");
}

void write_report_files(const EvalReport& r, const std::string& report_path,
                        const std::string& confusion_path, const std::string& curve_path) {
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw DataError("cannot write " + report_path);
        out << r.to_json().dump(2) << "\n";
    }
    if (!confusion_path.empty()) r.save_confusion_csv(confusion_path);
    if (!curve_path.empty()) r.save_loss_curve_csv(curve_path);
}

int run_synth(const fs::path& spec_path, std::uint64_t seed, const fs::path& out_dir) {
    const SynthSpec spec = SynthSpec::from_json_file(spec_path);
    const Dataset ds = gen_synthetic(spec, seed);
    fs::create_directories(out_dir);
    save_csv(ds, out_dir / "data.csv");
    Manifest m;
    m.fs_hz = spec.fs;
    m.units = "microvolt";
    m.split = spec.split;
    save_manifest(m, out_dir / "data.manifest.json");
    std::printf("wrote %zu recordings (%s split, fs %g Hz) to %s\n", ds.recordings.size(),
                std::string(split_name(ds.split)).c_str(), spec.fs,
                (out_dir / "data.csv").string().c_str());
    return 0;
}

int run_preprocess(const fs::path& in, const std::string& manifest, const fs::path& config,
                   const fs::path& out) {
    const Dataset ds = load_dataset(in, manifest);
    const PreprocessConfig cfg = preproc_section(config);
    const Dataset prep = preprocess_dataset(ds, cfg);
    save_csv(prep, out);
    Manifest m;
    m.fs_hz = prep.recordings.empty() ? 0.0 : prep.recordings[0].fs;
    m.split = prep.split;
    save_manifest(m, manifest_for(out));
    std::printf("preprocessed %zu recordings -> %s (%zu samples each)\n", prep.recordings.size(),
                out.string().c_str(),
                prep.recordings.empty() ? std::size_t{0} : prep.recordings[0].n_samples());
    return 0;
}

int run_features(const fs::path& in, const std::string& manifest, const fs::path& config,
                 const fs::path& out) {
    const Dataset ds = load_dataset(in, manifest);
    SpectralConfig cfg = spectral_section(config);
    // The CSV container does not carry a stage tag; this command's contract is
    // that --in is the output of `preprocess`.
    std::vector<RecordingFeatures> recs;
    recs.reserve(ds.recordings.size());
    for (const Recording& r : ds.recordings) {
        PreprocRecording pr;
        static_cast<Recording&>(pr) = r;
        pr.stage_tag = Stage::Prep;
        RecordingFeatures rf;
        rf.subject_id = r.subject_id;
        rf.trial_id = r.trial_id;
        rf.label = r.label;
        rf.fs = r.fs;
        rf.features = spectral_features(pr, cfg);
        recs.push_back(std::move(rf));
    }
    save_features(recs, out);
    if (!recs.empty()) {
        const FeatureTensor& f = recs[0].features;
        std::printf("wrote %zu feature records (%zu frames x %zu channels x %zu bins) -> %s\n",
                    recs.size(), f.n_frames, f.n_channels, f.n_bins, out.string().c_str());
    } else {
        std::printf("wrote 0 feature records -> %s\n", out.string().c_str());
    }
    return 0;
}

int run_train(const fs::path& train_csv, const std::string& train_manifest,
              const fs::path& val_csv, const std::string& val_manifest, const fs::path& config,
              const CLI::Option* seed_opt, std::uint64_t seed_flag, const fs::path& out,
              const std::string& report_path, const std::string& confusion_path,
              const std::string& curve_path) {
    const ExperimentConfig cfg = experiment_config(config, seed_opt, seed_flag);
    const Dataset train_ds = load_dataset(train_csv, train_manifest);
    const Dataset val_ds = load_dataset(val_csv, val_manifest);
    const TrainResult res = train(train_ds, val_ds, cfg);
    save_model(res.params, cfg.model, out);
    std::printf("trained %s model for %zu epochs (seed %" PRIu64 ")\n",
                std::string(variant_name(cfg.variant)).c_str(), res.report.loss_curve.size(),
                cfg.seed);
    print_report(res.report);
    std::printf("checkpoint -> %s\n", out.string().c_str());
    write_report_files(res.report, report_path, confusion_path, curve_path);
    return 0;
}

int run_eval(const fs::path& in, const std::string& manifest, const fs::path& ckpt,
             const fs::path& config, const CLI::Option* seed_opt, std::uint64_t seed_flag,
             const std::string& report_path, const std::string& confusion_path) {
    const ExperimentConfig cfg = experiment_config(config, seed_opt, seed_flag);
    auto [params, ckpt_cfg] = load_model(ckpt);
    check_model_compat(params, ckpt_cfg, cfg, ckpt.string());
    const Dataset ds = load_dataset(in, manifest);
    const EvalReport report = evaluate(ds, params, cfg);
    print_report(report);
    write_report_files(report, report_path, confusion_path, "");
    return 0;
}

int run_predict(const fs::path& in, const std::string& manifest, const fs::path& ckpt,
                const fs::path& config, const CLI::Option* seed_opt, std::uint64_t seed_flag,
                const fs::path& out) {
    const ExperimentConfig cfg = experiment_config(config, seed_opt, seed_flag);
    auto [params, ckpt_cfg] = load_model(ckpt);
    check_model_compat(params, ckpt_cfg, cfg, ckpt.string());
    const Dataset ds = load_dataset(in, manifest);
    const std::vector<Prediction> preds = predict(ds, params, cfg);
    std::ofstream fout(out);
    if (!fout) throw DataError("cannot write " + out.string());
    fout << "subject,trial,label";
    for (Emotion e : all_emotions()) fout << ",p_" << emotion_name(e);
    fout << "\n";
    char buf[64];
    for (const Prediction& p : preds) {
        fout << p.subject_id << "," << p.trial_id << "," << emotion_name(p.label);
        for (double v : p.probs) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            fout << "," << buf;
        }
        fout << "\n";
    }
    if (!fout) throw DataError("write failed for " + out.string());
    std::printf("wrote %zu predictions -> %s\n", preds.size(), out.string().c_str());
    return 0;
}

int run_temporal_scan(const fs::path& train_csv, const std::string& train_manifest,
                      const fs::path& val_csv, const std::string& val_manifest,
                      const fs::path& config, const CLI::Option* seed_opt,
                      std::uint64_t seed_flag, const fs::path& out) {
    const ExperimentConfig cfg = experiment_config(config, seed_opt, seed_flag);
    const Dataset train_ds = load_dataset(train_csv, train_manifest);
    const Dataset val_ds = load_dataset(val_csv, val_manifest);
    const TemporalScanReport report = temporal_scan(train_ds, val_ds, cfg);
    save_scan_csv(report, out);
    std::printf("%-8s %-2s %-10s %-10s %s\n", "variant", "j", "train_acc", "val_acc", "status");
    for (const IntervalResult& r : report.rows) {
        if (r.status == "ok") {
            std::printf("%-8s %-2zu %-10.2f %-10.2f ok\n", r.variant.c_str(), r.j, r.train_acc,
                        r.val_acc);
        } else {
            std::printf("%-8s %-2zu %-10s %-10s skipped\n", r.variant.c_str(), r.j, "-", "-");
            std::fprintf(stderr, "skipped %s j=%zu: %s\n", r.variant.c_str(), r.j,
                         r.reason.c_str());
        }
    }
    std::printf("scan -> %s\n", out.string().c_str());
    return 0;
}

int run_compare(const fs::path& train_csv, const std::string& train_manifest,
                const fs::path& val_csv, const std::string& val_manifest, const fs::path& config,
                const CLI::Option* seed_opt, std::uint64_t seed_flag, std::size_t n_seeds,
                const std::string& out) {
    const ExperimentConfig cfg = experiment_config(config, seed_opt, seed_flag);
    const Dataset train_ds = load_dataset(train_csv, train_manifest);
    const Dataset val_ds = load_dataset(val_csv, val_manifest);
    const ComparisonTable table = compare_variants(train_ds, val_ds, cfg, n_seeds);
    for (const VariantRow& row : table.rows) {
        std::printf("%-6s mean %.2f%%  std %.2f  seeds", variant_name(row.variant).data(),
                    row.mean_acc, row.std_acc);
        for (double a : row.seed_accs) std::printf(" %.2f", a);
        std::printf("\n");
    }
    std::printf("bi - mono = %.2f points\n", table.diff);
    if (!out.empty()) {
        json j;
        for (const VariantRow& row : table.rows) {
            json r;
            r["mean_acc"] = row.mean_acc;
            r["std_acc"] = row.std_acc;
            r["seed_accs"] = row.seed_accs;
            j[std::string(variant_name(row.variant))] = r;
        }
        j["diff"] = table.diff;
        std::ofstream fout(out);
        if (!fout) throw DataError("cannot write " + out);
        fout << j.dump(2) << "\n";
    }
    return 0;
}

int run_gradcheck(std::uint64_t seed, std::size_t trials, double tol) {
    const std::vector<GradSuiteRow> rows = run_gradient_suite(seed, trials);
    std::vector<std::string> failed;
    for (const GradSuiteRow& r : rows) {
        const bool ok = r.max_rel_err <= tol;
        std::printf("%-16s max_rel_err %.3e  trials %-3zu checked %-6zu skipped %-4zu %s\n",
                    r.op.c_str(), r.max_rel_err, r.trials, r.coords_checked, r.coords_skipped,
                    ok ? "PASS" : "FAIL");
        if (!ok) failed.push_back(r.op);
    }
    if (!failed.empty()) {
        std::string msg = "gradient check failed for:";
        for (const std::string& op : failed) msg += " " + op;
        throw NumericError(msg);
    }
    std::printf("all %zu ops within %.1e\n", rows.size(), tol);
    return 0;
}

void print_partition() {
    const auto& left = left_channels();
    const auto& right = right_channels();
    std::printf("%-6s %-6s\n", "left", "right");
    for (std::size_t i = 0; i < left.size(); ++i) {
        std::printf("%-6s %-6s%s\n", std::string(channel_name(left[i])).c_str(),
                    std::string(channel_name(right[i])).c_str(),
                    left[i] == right[i] ? "  (shared)" : "");
    }
    std::printf("streams: %zu channels each; Pz excluded from both\n", left.size());
}

void print_model_table(const fs::path& config_path, double fs) {
    const json j = parse_json_file(config_path.string(), "model config");
    ModelConfig model;
    SpectralConfig spectral;
    Variant variant = Variant::Bi;
    if (j.contains("model")) {
        model = ModelConfig::from_json(j.at("model"));
        if (j.contains("spectral")) spectral = spectral_config_from_json(j.at("spectral"));
        if (j.contains("variant")) {
            const auto v = variant_from_name(j.at("variant").get<std::string>());
            if (!v) throw ConfigError("model config: variant must be mono or bi");
            variant = *v;
        }
    } else {
        model = ModelConfig::from_json(j);
    }
    const std::size_t bins =
        band_bin_indices(spectral.window_len, fs, spectral.band_lo_hz, spectral.band_hi_hz).size();
    const std::size_t n_streams = variant == Variant::Bi ? 2 : 1;
    const std::size_t chans = variant == Variant::Bi ? left_channels().size() : kNumChannels;
    const std::size_t f_in = chans * bins;
    const std::size_t h = model.lstm_units;
    std::printf("variant          %s\n", variant_name(variant).data());
    std::printf("stft             window %zu, %zu band bins at fs %g -> %zu features/stream\n",
                spectral.window_len, bins, fs, f_in);
    std::printf("per stream (x%zu):\n", n_streams);
    std::printf("  conv1d         kernel %zu x %zu -> %zu filters   [T, %zu] -> [T-%zu, %zu]\n",
                model.conv_kernel, f_in, model.conv_filters, f_in, model.conv_kernel - 1,
                model.conv_filters);
    std::printf("  maxpool1d      pool %zu\n", model.pool);
    std::printf("  dropout        rate %g\n", model.dropout_rate);
    std::printf("  lstm           %zu units -> [%zu]\n", h, h);
    std::printf("  dropout        rate %g\n", model.dropout_rate);
    std::printf("head:\n");
    std::printf("  dense (relu)   [%zu] -> [%zu]   l2 lambda %g\n", n_streams * h,
                model.dense_units, model.l2_lambda);
    std::printf("  dense          [%zu] -> [%zu] logits\n", model.dense_units, model.n_classes);
    std::printf("parameters       %zu\n", param_count(model, variant, f_in));
}

void print_ckpt(const fs::path& path) {
    const Checkpoint ck = load_checkpoint(path);
    std::printf("meta: %s\n", ck.meta_json.c_str());
    std::size_t total = 0;
    for (const auto& [name, var] : ck.tensors) {
        std::printf("%-24s %s  (%zu values)\n", name.c_str(), shape_str(var->shape).c_str(),
                    shape_size(var->shape));
        total += shape_size(var->shape);
    }
    std::printf("%zu tensors, %zu values\n", ck.tensors.size(), total);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-hemispheric EEG emotion classification pipeline"};
    app.require_subcommand(1);

    // synth
    std::string sy_spec, sy_out;
    std::uint64_t sy_seed = 0;
    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
    synth->add_option("--spec", sy_spec, "generator spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    synth->add_option("--seed", sy_seed, "generator seed");
    synth->add_option("--out", sy_out, "output directory (data.csv + data.manifest.json)")
        ->required();

    // preprocess
    std::string pp_in, pp_manifest, pp_config, pp_out;
    auto* prep = app.add_subcommand("preprocess", "re-reference, band-filter, and trim a dataset");
    prep->add_option("--in", pp_in, "input CSV")->required()->check(CLI::ExistingFile);
    prep->add_option("--manifest", pp_manifest, "manifest JSON (default: sibling of --in)");
    prep->add_option("--config", pp_config, "preproc config JSON (bare section or experiment)")
        ->required()
        ->check(CLI::ExistingFile);
    prep->add_option("--out", pp_out, "output CSV (manifest written alongside)")->required();

    // features
    std::string ft_in, ft_manifest, ft_config, ft_out;
    auto* feat = app.add_subcommand("features", "STFT band features of a preprocessed dataset");
    feat->add_option("--in", ft_in, "preprocessed CSV")->required()->check(CLI::ExistingFile);
    feat->add_option("--manifest", ft_manifest, "manifest JSON (default: sibling of --in)");
    feat->add_option("--config", ft_config, "spectral config JSON (bare section or experiment)")
        ->required()
        ->check(CLI::ExistingFile);
    feat->add_option("--out", ft_out, "output features.bin")->required();

    // train
    std::string tr_train, tr_train_manifest, tr_val, tr_val_manifest, tr_config, tr_out;
    std::string tr_report, tr_confusion, tr_curve;
    std::uint64_t tr_seed = 0;
    auto* tr = app.add_subcommand("train", "train a model and save the best checkpoint");
    tr->add_option("--train", tr_train, "training CSV")->required()->check(CLI::ExistingFile);
    tr->add_option("--train-manifest", tr_train_manifest, "training manifest (default: sibling)");
    tr->add_option("--val", tr_val, "validation CSV")->required()->check(CLI::ExistingFile);
    tr->add_option("--val-manifest", tr_val_manifest, "validation manifest (default: sibling)");
    tr->add_option("--config", tr_config, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    auto* tr_seed_opt = tr->add_option("--seed", tr_seed, "override the config seed");
    tr->add_option("--out", tr_out, "checkpoint path")->required();
    tr->add_option("--report", tr_report, "write the validation report JSON here");
    tr->add_option("--confusion", tr_confusion, "write the confusion matrix CSV here");
    tr->add_option("--curve", tr_curve, "write the loss curve CSV here");

    // eval
    std::string ev_in, ev_manifest, ev_ckpt, ev_config, ev_report, ev_confusion;
    std::uint64_t ev_seed = 0;
    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a labeled dataset");
    ev->add_option("--in", ev_in, "labeled CSV")->required()->check(CLI::ExistingFile);
    ev->add_option("--manifest", ev_manifest, "manifest JSON (default: sibling of --in)");
    ev->add_option("--ckpt", ev_ckpt, "model checkpoint")->required()->check(CLI::ExistingFile);
    ev->add_option("--config", ev_config, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    auto* ev_seed_opt = ev->add_option("--seed", ev_seed, "override the config seed");
    ev->add_option("--report", ev_report, "write the report JSON here");
    ev->add_option("--confusion", ev_confusion, "write the confusion matrix CSV here");

    // predict
    std::string pd_in, pd_manifest, pd_ckpt, pd_config, pd_out;
    std::uint64_t pd_seed = 0;
    auto* pd = app.add_subcommand("predict", "label a dataset with a trained checkpoint");
    pd->add_option("--in", pd_in, "input CSV (labels may be unknown)")
        ->required()
        ->check(CLI::ExistingFile);
    pd->add_option("--manifest", pd_manifest, "manifest JSON (default: sibling of --in)");
    pd->add_option("--ckpt", pd_ckpt, "model checkpoint")->required()->check(CLI::ExistingFile);
    pd->add_option("--config", pd_config, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    auto* pd_seed_opt = pd->add_option("--seed", pd_seed, "override the config seed");
    pd->add_option("--out", pd_out, "predictions CSV")->required();

    // temporal-scan
    std::string ts_train, ts_train_manifest, ts_val, ts_val_manifest, ts_config, ts_out;
    std::uint64_t ts_seed = 0;
    auto* ts = app.add_subcommand("temporal-scan",
                                  "train per-interval models over the 8 temporal intervals");
    ts->add_option("--train", ts_train, "training CSV")->required()->check(CLI::ExistingFile);
    ts->add_option("--train-manifest", ts_train_manifest, "training manifest (default: sibling)");
    ts->add_option("--val", ts_val, "validation CSV")->required()->check(CLI::ExistingFile);
    ts->add_option("--val-manifest", ts_val_manifest, "validation manifest (default: sibling)");
    ts->add_option("--config", ts_config, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    auto* ts_seed_opt = ts->add_option("--seed", ts_seed, "override the config seed");
    ts->add_option("--out", ts_out, "scan CSV")->required();

    // compare
    std::string cp_train, cp_train_manifest, cp_val, cp_val_manifest, cp_config, cp_out;
    std::uint64_t cp_seed = 0;
    std::size_t cp_seeds = 5;
    auto* cp = app.add_subcommand("compare", "train mono and bi variants over several seeds");
    cp->add_option("--train", cp_train, "training CSV")->required()->check(CLI::ExistingFile);
    cp->add_option("--train-manifest", cp_train_manifest, "training manifest (default: sibling)");
    cp->add_option("--val", cp_val, "validation CSV")->required()->check(CLI::ExistingFile);
    cp->add_option("--val-manifest", cp_val_manifest, "validation manifest (default: sibling)");
    cp->add_option("--config", cp_config, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    auto* cp_seed_opt = cp->add_option("--seed", cp_seed, "override the config base seed");
    cp->add_option("--seeds", cp_seeds, "number of seeds per variant")->check(CLI::PositiveNumber);
    cp->add_option("--out", cp_out, "write the comparison table JSON here");

    // gradcheck
    std::uint64_t gc_seed = 0;
    std::size_t gc_trials = 20;
    double gc_tol = 1e-4;
    auto* gc = app.add_subcommand("gradcheck",
                                  "finite-difference verification of every autodiff op");
    gc->add_option("--seed", gc_seed, "suite seed");
    gc->add_option("--trials", gc_trials, "random trials per op")->check(CLI::PositiveNumber);
    gc->add_option("--tol", gc_tol, "max allowed relative error")->check(CLI::PositiveNumber);

    // inspect
    std::string in_model, in_ckpt;
    bool in_partition = false;
    double in_fs = 300.0;
    auto* insp = app.add_subcommand("inspect", "print pipeline internals");
    insp->add_flag("--partition", in_partition, "print the hemisphere channel partition");
    insp->add_option("--model", in_model, "print the layer table of a model/experiment config")
        ->check(CLI::ExistingFile);
    insp->add_option("--fs", in_fs, "sampling rate assumed for --model feature sizes")
        ->check(CLI::PositiveNumber);
    insp->add_option("--ckpt", in_ckpt, "print a checkpoint's metadata and tensors")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return run_synth(sy_spec, sy_seed, sy_out);
        if (prep->parsed()) return run_preprocess(pp_in, pp_manifest, pp_config, pp_out);
        if (feat->parsed()) return run_features(ft_in, ft_manifest, ft_config, ft_out);
        if (tr->parsed()) {
            return run_train(tr_train, tr_train_manifest, tr_val, tr_val_manifest, tr_config,
                             tr_seed_opt, tr_seed, tr_out, tr_report, tr_confusion, tr_curve);
        }
        if (ev->parsed()) {
            return run_eval(ev_in, ev_manifest, ev_ckpt, ev_config, ev_seed_opt, ev_seed,
                            ev_report, ev_confusion);
        }
        if (pd->parsed()) {
            return run_predict(pd_in, pd_manifest, pd_ckpt, pd_config, pd_seed_opt, pd_seed,
                               pd_out);
        }
        if (ts->parsed()) {
            return run_temporal_scan(ts_train, ts_train_manifest, ts_val, ts_val_manifest,
                                     ts_config, ts_seed_opt, ts_seed, ts_out);
        }
        if (cp->parsed()) {
            return run_compare(cp_train, cp_train_manifest, cp_val, cp_val_manifest, cp_config,
                               cp_seed_opt, cp_seed, cp_seeds, cp_out);
        }
        if (gc->parsed()) return run_gradcheck(gc_seed, gc_trials, gc_tol);
        if (insp->parsed()) {
            if (!in_partition && in_model.empty() && in_ckpt.empty()) {
                throw ConfigError("inspect: pass --partition, --model, or --ckpt");
            }
            if (in_partition) print_partition();
            if (!in_model.empty()) print_model_table(in_model, in_fs);
            if (!in_ckpt.empty()) print_ckpt(in_ckpt);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
