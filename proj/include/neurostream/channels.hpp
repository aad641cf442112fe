#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace neurostream {

// The 21 electrodes of the 10-20 International System carried by a recording.
enum class Channel : int {
    Fp1, Fp2, F7, F3, Fz, F4, F8, T3, C3, Cz, C4,
    T4, T5, P3, Pz, P4, T6, O1, O2, A1, A2,
};

inline constexpr std::size_t kNumChannels = 21;

const std::array<Channel, kNumChannels>& all_channels();

std::string_view channel_name(Channel c);

// Case-insensitive lookup; nullopt for unknown names.
std::optional<Channel> channel_from_name(std::string_view name);

// The six emotion classes, indexed alphabetically.
enum class Emotion : int { Anger, Disgust, Fear, Joy, Sadness, Surprise };

inline constexpr std::size_t kNumEmotions = 6;

const std::array<Emotion, kNumEmotions>& all_emotions();

// Lowercase canonical name ("anger", ..., "surprise").
std::string_view emotion_name(Emotion e);

std::optional<Emotion> emotion_from_name(std::string_view name);

}  // namespace neurostream
