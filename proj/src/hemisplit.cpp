#include "neurostream/hemisplit.hpp"

#include "neurostream/errors.hpp"

namespace neurostream {

const std::vector<Channel>& left_channels() {
    static const std::vector<Channel> chans = {
        Channel::Fp1, Channel::F7, Channel::C3, Channel::P3, Channel::O1, Channel::F3,
        Channel::T3,  Channel::T5, Channel::Fz, Channel::Cz, Channel::A1};
    return chans;
}

const std::vector<Channel>& right_channels() {
    static const std::vector<Channel> chans = {
        Channel::Fp2, Channel::F8, Channel::C4, Channel::P4, Channel::O2, Channel::F4,
        Channel::T4,  Channel::T6, Channel::Fz, Channel::Cz, Channel::A2};
    return chans;
}

std::vector<std::size_t> channel_indices(const std::vector<Channel>& chans) {
    std::vector<std::size_t> idx;
    idx.reserve(chans.size());
    for (Channel c : chans) idx.push_back(static_cast<std::size_t>(c));
    return idx;
}

HemiFeatures hemisplit(const FeatureTensor& full) {
    if (full.n_channels != kNumChannels) {
        throw ShapeError("hemisplit: expected " + std::to_string(kNumChannels) +
                         " channels, got " + std::to_string(full.n_channels));
    }
    HemiFeatures out;
    out.left = full.select_channels(channel_indices(left_channels()));
    out.right = full.select_channels(channel_indices(right_channels()));
    return out;
}

Recording mirror_channels(const Recording& rec) {
    Recording out = rec;
    const auto& left = left_channels();
    const auto& right = right_channels();
    for (std::size_t i = 0; i < left.size(); ++i) {
        if (left[i] == right[i]) continue;  // Fz, Cz
        out.channels[static_cast<std::size_t>(left[i])] =
            rec.channels[static_cast<std::size_t>(right[i])];
        out.channels[static_cast<std::size_t>(right[i])] =
            rec.channels[static_cast<std::size_t>(left[i])];
    }
    return out;
}

}  // namespace neurostream
