#include "neurostream/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "neurostream/errors.hpp"
#include "neurostream/harness.hpp"
#include "neurostream/rng.hpp"

namespace neurostream {

std::array<IntervalSpec, kNumIntervals> make_intervals(double total_time, double fs) {
    if (!(total_time > 0.0)) throw ConfigError("make_intervals: total_time must be positive");
    if (!(fs > 0.0)) throw ConfigError("make_intervals: fs must be positive");
    const auto n = static_cast<std::size_t>(std::llround(total_time * fs));

    std::array<IntervalSpec, kNumIntervals> out{};
    std::array<std::size_t, kNumIntervals + 1> bounds{};
    for (std::size_t j = 0; j < kNumIntervals; ++j) {
        const double start = static_cast<double>(j) * total_time / 8.0;
        bounds[j] = std::min(n, static_cast<std::size_t>(std::llround(start * fs)));
    }
    bounds[kNumIntervals] = n;  // the final interval absorbs the rounding remainder

    for (std::size_t j = 0; j < kNumIntervals; ++j) {
        out[j].j = j;
        out[j].start = static_cast<double>(j) * total_time / 8.0;
        out[j].end = static_cast<double>(j + 1) * total_time / 8.0;
        out[j].start_sample = bounds[j];
        out[j].end_sample = bounds[j + 1];
    }
    return out;
}

PreprocRecording slice_recording(const PreprocRecording& rec, const IntervalSpec& iv) {
    rec.validate();
    if (iv.end_sample > rec.n_samples()) {
        throw DataError("interval " + std::to_string(iv.j) + ": end sample " +
                        std::to_string(iv.end_sample) + " exceeds recording length " +
                        std::to_string(rec.n_samples()));
    }
    if (iv.start_sample >= iv.end_sample) {
        throw DataError("interval " + std::to_string(iv.j) + ": empty slice [" +
                        std::to_string(iv.start_sample) + ", " + std::to_string(iv.end_sample) +
                        ")");
    }
    PreprocRecording out;
    static_cast<Recording&>(out) = rec;
    out.stage_tag = rec.stage_tag;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const auto& src = rec.channels[c];
        out.channels[c].assign(src.begin() + static_cast<std::ptrdiff_t>(iv.start_sample),
                               src.begin() + static_cast<std::ptrdiff_t>(iv.end_sample));
    }
    return out;
}

namespace {

std::vector<PreprocRecording> preprocess_all(const Dataset& ds, const PreprocessConfig& cfg) {
    ds.validate();
    std::vector<PreprocRecording> out;
    out.reserve(ds.recordings.size());
    for (const auto& rec : ds.recordings) out.push_back(preprocess(rec, cfg));
    return out;
}

std::vector<PreprocRecording> slice_all(const std::vector<PreprocRecording>& recs,
                                        std::size_t j) {
    std::vector<PreprocRecording> out;
    out.reserve(recs.size());
    for (const auto& rec : recs) {
        const auto ivs =
            make_intervals(static_cast<double>(rec.n_samples()) / rec.fs, rec.fs);
        out.push_back(slice_recording(rec, ivs[j]));
    }
    return out;
}

}  // namespace

TemporalScanReport temporal_scan(const Dataset& train_ds, const Dataset& val_ds,
                                 const ExperimentConfig& base_cfg) {
    base_cfg.validate();
    const auto ptrain = preprocess_all(train_ds, base_cfg.preproc);
    const auto pval = preprocess_all(val_ds, base_cfg.preproc);

    TemporalScanReport report;
    for (Variant variant : {Variant::Mono, Variant::Bi}) {
        for (std::size_t j = 0; j < kNumIntervals; ++j) {
            IntervalResult row;
            row.variant = std::string(variant_name(variant));
            row.j = j;
            try {
                const auto strain = slice_all(ptrain, j);
                const auto sval = slice_all(pval, j);
                std::size_t min_n = strain.front().n_samples();
                for (const auto& r : strain) min_n = std::min(min_n, r.n_samples());
                for (const auto& r : sval) min_n = std::min(min_n, r.n_samples());

                ExperimentConfig cfg = base_cfg;
                cfg.variant = variant;
                // Slices shorter than two full windows switch to finer framing.
                if (min_n < 2 * cfg.spectral.window_len) {
                    cfg.spectral.window_len = 128;
                    cfg.spectral.hop = 64;
                }
                cfg.seed = mix_seed(base_cfg.seed,
                                    0x7E000ULL + j * 2 + (variant == Variant::Bi ? 1 : 0));

                const auto train_samples = featurize_preprocessed(strain, cfg.spectral, variant);
                const auto val_samples = featurize_preprocessed(sval, cfg.spectral, variant);
                TrainResult res = train_on_samples(train_samples, val_samples, cfg);
                row.train_acc = evaluate_samples(train_samples, res.params, cfg).accuracy;
                row.val_acc = res.report.accuracy;
            } catch (const ConfigError& e) {
                row.status = "skipped";
                row.reason = e.what();
            } catch (const DataError& e) {
                row.status = "skipped";
                row.reason = e.what();
            }
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

void save_scan_csv(const TemporalScanReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "variant,j,train_acc,val_acc,status\n";
    char buf[128];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%zu,%.4f,%.4f,%s\n", row.variant.c_str(), row.j,
                      row.train_acc, row.val_acc, row.status.c_str());
        out << buf;
    }
    if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace neurostream
