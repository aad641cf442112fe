#include "neurostream/channels.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace neurostream {

namespace {

constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T3", "C3", "Cz", "C4",
    "T4",  "T5",  "P3", "Pz", "P4", "T6", "O1", "O2", "A1", "A2",
};

constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {
    "anger", "disgust", "fear", "joy", "sadness", "surprise",
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

const std::array<Channel, kNumChannels>& all_channels() {
    static const std::array<Channel, kNumChannels> chans = [] {
        std::array<Channel, kNumChannels> a{};
        for (std::size_t i = 0; i < kNumChannels; ++i) a[i] = static_cast<Channel>(i);
        return a;
    }();
    return chans;
}

std::string_view channel_name(Channel c) { return kChannelNames[static_cast<std::size_t>(c)]; }

std::optional<Channel> channel_from_name(std::string_view name) {
    const std::string key = lower(name);
    for (std::size_t i = 0; i < kNumChannels; ++i) {
        if (key == lower(kChannelNames[i])) return static_cast<Channel>(i);
    }
    return std::nullopt;
}

const std::array<Emotion, kNumEmotions>& all_emotions() {
    static const std::array<Emotion, kNumEmotions> emos = [] {
        std::array<Emotion, kNumEmotions> a{};
        for (std::size_t i = 0; i < kNumEmotions; ++i) a[i] = static_cast<Emotion>(i);
        return a;
    }();
    return emos;
}

std::string_view emotion_name(Emotion e) { return kEmotionNames[static_cast<std::size_t>(e)]; }

std::optional<Emotion> emotion_from_name(std::string_view name) {
    const std::string key = lower(name);
    for (std::size_t i = 0; i < kNumEmotions; ++i) {
        if (key == kEmotionNames[i]) return static_cast<Emotion>(i);
    }
    return std::nullopt;
}

}  // namespace neurostream
