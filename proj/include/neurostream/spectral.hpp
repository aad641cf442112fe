#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "neurostream/recording.hpp"

namespace neurostream {

struct SpectralConfig {
    std::size_t window_len = 256;  // STFT window, power of two
    std::size_t hop = 128;         // frame advance in samples
    double band_lo_hz = 1.0;       // inclusive band edges for kept bins
    double band_hi_hz = 50.0;
    bool log_magnitude = true;           // store ln(1 + |X_k|) instead of |X_k|
    bool allow_unpreprocessed = false;   // lift the Prep stage requirement

    void validate() const;
};

// Dense [frame][channel][bin] tensor, frame-major.
struct FeatureTensor {
    std::size_t n_frames = 0;
    std::size_t n_channels = 0;
    std::size_t n_bins = 0;
    std::vector<double> data;

    std::size_t index(std::size_t t, std::size_t c, std::size_t b) const {
        return (t * n_channels + c) * n_bins + b;
    }
    double at(std::size_t t, std::size_t c, std::size_t b) const { return data[index(t, c, b)]; }
    double& at(std::size_t t, std::size_t c, std::size_t b) { return data[index(t, c, b)]; }

    // New tensor keeping the given channels, in the given order.
    FeatureTensor select_channels(const std::vector<std::size_t>& keep) const;
};

// Hann window of the given length: 0.5 * (1 - cos(2 pi m / (L - 1))).
std::vector<double> hann_window(std::size_t len);

// DFT bin indices k (0 .. window_len/2) whose centre k * fs / window_len lies
// inside [lo, hi], both edges inclusive.
std::vector<std::size_t> band_bin_indices(std::size_t window_len, double fs, double lo_hz,
                                          double hi_hz);

// Number of STFT frames for a signal of n samples: floor((n - w) / hop) + 1.
std::size_t stft_frame_count(std::size_t n, std::size_t window_len, std::size_t hop);

// Magnitudes of the kept bins for every frame of one signal: [frame][bin].
std::vector<std::vector<double>> stft_band_magnitudes(const std::vector<double>& x, double fs,
                                                      const SpectralConfig& cfg);

// Full feature tensor of a recording: every channel in enumeration order.
FeatureTensor spectral_features(const PreprocRecording& rec, const SpectralConfig& cfg);

struct RecordingFeatures {
    std::string subject_id;
    std::string trial_id;
    std::optional<Emotion> label;
    double fs = 0.0;
    FeatureTensor features;
};

// Little-endian feature container. Layout: magic "NSFEAT01", u32 version (1),
// u32 record count, then per record: u32+bytes subject id, u32+bytes trial
// id, u32 label index (0xFFFFFFFF when unknown), u64 frames, u64 channels,
// u64 bins, f64 fs, and frames*channels*bins little-endian float64 values in
// row-major [frame][channel][bin] order.
void save_features(const std::vector<RecordingFeatures>& recs,
                   const std::filesystem::path& path);
std::vector<RecordingFeatures> load_features(const std::filesystem::path& path);

}  // namespace neurostream
