#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "neurostream/recording.hpp"

namespace neurostream {

constexpr std::size_t kNumIntervals = 8;

struct IntervalSpec {
    std::size_t j = 0;         // 0..7
    double start = 0.0;        // seconds, j * total_time / 8
    double end = 0.0;          // seconds, (j+1) * total_time / 8
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;  // half-open [start_sample, end_sample)
};

// Partition [0, total_time) into 8 half-open intervals. Sample boundaries use
// round-half-away-from-zero; the final interval absorbs the rounding
// remainder, so the ranges abut exactly and cover round(total_time * fs)
// samples.
std::array<IntervalSpec, kNumIntervals> make_intervals(double total_time, double fs);

// Restrict every channel to [start_sample, end_sample); metadata and stage
// tag preserved.
PreprocRecording slice_recording(const PreprocRecording& rec, const IntervalSpec& iv);

struct ExperimentConfig;  // harness.hpp

struct IntervalResult {
    std::string variant;
    std::size_t j = 0;
    double train_acc = 0.0;  // percent
    double val_acc = 0.0;    // percent
    std::string status = "ok";  // "ok" or "skipped"
    std::string reason;         // filled when skipped
};

struct TemporalScanReport {
    std::vector<IntervalResult> rows;  // 8 per variant, j ascending
};

// Preprocess both datasets, slice them into the 8 intervals, and train one
// fresh model per (variant, j) with a seed derived from the base seed.
// Intervals too short for spectral framing are reported as skipped.
TemporalScanReport temporal_scan(const Dataset& train, const Dataset& val,
                                 const ExperimentConfig& base_cfg);

void save_scan_csv(const TemporalScanReport& report, const std::filesystem::path& path);

}  // namespace neurostream
