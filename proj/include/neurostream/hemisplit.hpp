#pragma once

#include <utility>
#include <vector>

#include "neurostream/channels.hpp"
#include "neurostream/spectral.hpp"

namespace neurostream {

// Channel lists of the two hemispheric streams, in stream order. The midline
// channels Fz and Cz appear in both streams; Pz (the acquisition reference)
// is in neither. Index i of one list is the homologue of index i of the
// other, which is what makes mirrored inputs produce mirrored features.
const std::vector<Channel>& left_channels();
const std::vector<Channel>& right_channels();

// Positions of the given channels inside the canonical enumeration order.
std::vector<std::size_t> channel_indices(const std::vector<Channel>& chans);

struct HemiFeatures {
    FeatureTensor left;
    FeatureTensor right;
};

// Split a full 21-channel feature tensor into the two 11-channel streams.
HemiFeatures hemisplit(const FeatureTensor& full);

// Swap every homologous channel pair (Fp1<->Fp2, ..., A1<->A2); midline
// channels and Pz stay put. hemisplit(mirror_channels(rec)) has the two
// streams of hemisplit(rec) exchanged exactly.
Recording mirror_channels(const Recording& rec);

}  // namespace neurostream
