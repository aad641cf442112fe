#include "neurostream/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "neurostream/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

namespace neurostream {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'C', 'K', 'P', 'T', '0', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in, const char* what) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError(std::string("checkpoint: truncated reading ") + what);
    }
    return v;
}

std::uint64_t read_u64(std::istream& in, const char* what) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError(std::string("checkpoint: truncated reading ") + what);
    }
    return v;
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint " + path.string());
    out.write(kMagic, sizeof kMagic);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(ck.meta_json.size()));
    out.write(ck.meta_json.data(), static_cast<std::streamsize>(ck.meta_json.size()));
    write_u32(out, static_cast<std::uint32_t>(ck.tensors.size()));
    for (const auto& [name, var] : ck.tensors) {
        write_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u32(out, static_cast<std::uint32_t>(var->shape.size()));
        for (std::size_t d : var->shape) write_u64(out, d);
        out.write(reinterpret_cast<const char*>(var->value.data()),
                  static_cast<std::streamsize>(var->value.size() * sizeof(double)));
    }
    if (!out) throw DataError("write failed for checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint " + path.string());
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw DataError("checkpoint: bad magic in " + path.string());
    }
    const std::uint32_t version = read_u32(in, "version");
    if (version != kVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    Checkpoint ck;
    const std::uint32_t meta_len = read_u32(in, "meta length");
    ck.meta_json.resize(meta_len);
    if (meta_len && !in.read(ck.meta_json.data(), meta_len)) {
        throw DataError("checkpoint: truncated reading metadata");
    }
    const std::uint32_t count = read_u32(in, "tensor count");
    ck.tensors.reserve(count);
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::uint32_t name_len = read_u32(in, "tensor name length");
        std::string name(name_len, '\0');
        if (name_len && !in.read(name.data(), name_len)) {
            throw DataError("checkpoint: truncated reading tensor name");
        }
        const std::uint32_t ndim = read_u32(in, "tensor rank");
        std::vector<std::size_t> shape(ndim);
        for (std::uint32_t d = 0; d < ndim; ++d) {
            shape[d] = static_cast<std::size_t>(read_u64(in, "tensor dim"));
        }
        std::vector<double> data(shape_size(shape));
        if (!data.empty() &&
            !in.read(reinterpret_cast<char*>(data.data()),
                     static_cast<std::streamsize>(data.size() * sizeof(double)))) {
            throw DataError("checkpoint: truncated reading tensor '" + name + "'");
        }
        ck.tensors.emplace_back(std::move(name),
                                make_leaf(std::move(shape), std::move(data), false));
    }
    return ck;
}

}  // namespace neurostream
