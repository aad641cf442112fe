#include "neurostream/recording.hpp"

#include <cmath>

#include "neurostream/errors.hpp"

namespace neurostream {

std::string_view split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Validation: return "validation";
        case Split::Test: return "test";
    }
    return "?";
}

std::optional<Split> split_from_name(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "validation") return Split::Validation;
    if (name == "test") return Split::Test;
    return std::nullopt;
}

std::string_view stage_name(Stage s) {
    switch (s) {
        case Stage::Raw: return "raw";
        case Stage::Ref: return "ref";
        case Stage::Filt: return "filt";
        case Stage::Prep: return "prep";
    }
    return "?";
}

void Recording::validate() const {
    const std::string where = subject_id + "," + trial_id;
    if (!(fs > 0.0)) throw DataError("recording " + where + ": sampling rate must be positive");
    const std::size_t n = channels[0].size();
    if (n == 0) throw DataError("recording " + where + ": empty waveform");
    for (std::size_t i = 0; i < kNumChannels; ++i) {
        const auto& w = channels[i];
        if (w.size() != n) {
            throw DataError("recording " + where + ": channel " +
                            std::string(channel_name(static_cast<Channel>(i))) +
                            " length mismatch");
        }
        for (double v : w) {
            if (!std::isfinite(v)) {
                throw DataError("recording " + where + ": non-finite sample in channel " +
                                std::string(channel_name(static_cast<Channel>(i))));
            }
        }
    }
}

void Dataset::validate() const {
    if (recordings.empty() && split != Split::Test) {
        throw DataError("empty dataset");
    }
    for (const auto& rec : recordings) rec.validate();
    for (const auto& rec : recordings) {
        if (rec.fs != recordings.front().fs) throw DataError("inconsistent sampling rate");
    }
}

}  // namespace neurostream
