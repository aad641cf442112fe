#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "neurostream/recording.hpp"

namespace neurostream {

// Sidecar metadata for a dataset CSV.
struct Manifest {
    double fs_hz = 300.0;
    std::string units = "microvolt";
    Split split = Split::Train;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

// Canonical CSV schema: header "subject,trial,label,channel,s0,s1,...", one
// row per (subject, trial, channel), samples as decimal floats in microvolts.
// Unlabeled rows carry the label string "unknown".
Dataset load_csv(const std::filesystem::path& csv_path, const std::filesystem::path& manifest_path);

// Writes waveforms with 17 significant digits so load(save(ds)) is
// bit-identical. Channel rows follow the Channel enumeration order.
void save_csv(const Dataset& ds, const std::filesystem::path& csv_path);

// Parameters for the labeled synthetic EEG generator. Each class k gets a
// unit sinusoid carrier at carrier_hz[k] plus Gaussian noise; left-hemisphere
// channels are scaled by (1 + asymmetry[k]), right by (1 - asymmetry[k]),
// midline channels by 1, and the mastoid/reference channels (A1, A2, Pz)
// carry noise only.
struct SynthSpec {
    int n_subjects = 1;
    int n_reps = 1;
    double fs = 300.0;
    double duration = 15.0;
    std::array<double, kNumEmotions> carrier_hz = {4.0, 8.0, 12.0, 16.0, 20.0, 24.0};
    std::array<double, kNumEmotions> asymmetry = {0, 0, 0, 0, 0, 0};
    double noise_sigma = 0.0;
    Split split = Split::Train;

    void validate() const;
    static SynthSpec from_json_file(const std::filesystem::path& path);
};

// Deterministic per (spec, seed): one recording per (subject, class,
// repetition), so classes are exactly balanced.
Dataset gen_synthetic(const SynthSpec& spec, std::uint64_t seed);

}  // namespace neurostream
