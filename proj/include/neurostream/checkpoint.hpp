#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "neurostream/autodiff.hpp"

namespace neurostream {

// Little-endian binary container for named float64 tensors plus one JSON
// metadata string. Layout:
//   magic "NSCKPT01" (8 bytes)
//   u32 version (currently 1)
//   u32 meta length, then that many JSON bytes
//   u32 tensor count, then per tensor:
//     u32 name length, name bytes
//     u32 ndim, u64 dims[ndim]
//     f64 data[product(dims)]
struct Checkpoint {
    std::string meta_json;
    std::vector<std::pair<std::string, Var>> tensors;
};

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace neurostream
