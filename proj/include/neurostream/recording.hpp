#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "neurostream/channels.hpp"

namespace neurostream {

enum class Split { Train, Validation, Test };

std::string_view split_name(Split s);
std::optional<Split> split_from_name(std::string_view name);

// One subject/trial: 21 named channel waveforms in microvolts plus an
// optional emotion label (absent for withheld test labels).
struct Recording {
    std::string subject_id;
    std::string trial_id;
    std::optional<Emotion> label;
    double fs = 0.0;
    std::array<std::vector<double>, kNumChannels> channels;

    std::vector<double>& waveform(Channel c) { return channels[static_cast<std::size_t>(c)]; }
    const std::vector<double>& waveform(Channel c) const {
        return channels[static_cast<std::size_t>(c)];
    }

    std::size_t n_samples() const { return channels[0].size(); }

    // Throws DataError unless all 21 channels are present with equal length
    // >= 1, fs > 0, and every sample is finite. Violations are never repaired.
    void validate() const;
};

// Pre-processing stage of a recording's waveforms.
enum class Stage { Raw, Ref, Filt, Prep };

std::string_view stage_name(Stage s);

struct PreprocRecording : Recording {
    Stage stage_tag = Stage::Raw;
};

struct Dataset {
    std::vector<Recording> recordings;
    Split split = Split::Train;

    // Recording invariants, consistent fs, and non-empty for train/validation.
    void validate() const;
};

}  // namespace neurostream
