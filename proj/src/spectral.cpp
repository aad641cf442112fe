#include "neurostream/spectral.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "neurostream/channels.hpp"
#include "neurostream/errors.hpp"
#include "neurostream/fft.hpp"

static_assert(std::endian::native == std::endian::little,
              "feature container assumes a little-endian host");

namespace neurostream {

void SpectralConfig::validate() const {
    if (!is_power_of_two(window_len) || window_len < 2) {
        throw ConfigError("spectral: window_len must be a power of two >= 2, got " +
                          std::to_string(window_len));
    }
    if (hop < 1) throw ConfigError("spectral: hop must be >= 1");
    if (!(band_lo_hz >= 0.0 && band_lo_hz < band_hi_hz)) {
        throw ConfigError("spectral: need 0 <= band_lo < band_hi");
    }
}

FeatureTensor FeatureTensor::select_channels(const std::vector<std::size_t>& keep) const {
    FeatureTensor out;
    out.n_frames = n_frames;
    out.n_channels = keep.size();
    out.n_bins = n_bins;
    out.data.resize(n_frames * keep.size() * n_bins);
    for (std::size_t t = 0; t < n_frames; ++t) {
        for (std::size_t j = 0; j < keep.size(); ++j) {
            const std::size_t c = keep[j];
            if (c >= n_channels) {
                throw ShapeError("select_channels: index " + std::to_string(c) +
                                 " out of range (have " + std::to_string(n_channels) + ")");
            }
            for (std::size_t b = 0; b < n_bins; ++b) out.at(t, j, b) = at(t, c, b);
        }
    }
    return out;
}

std::vector<double> hann_window(std::size_t len) {
    if (len < 2) throw ConfigError("hann_window: length must be >= 2");
    std::vector<double> w(len);
    const double denom = static_cast<double>(len - 1);
    for (std::size_t m = 0; m < len; ++m) {
        w[m] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / denom));
    }
    return w;
}

std::vector<std::size_t> band_bin_indices(std::size_t window_len, double fs, double lo_hz,
                                          double hi_hz) {
    std::vector<std::size_t> bins;
    for (std::size_t k = 0; k <= window_len / 2; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(window_len);
        if (f >= lo_hz && f <= hi_hz) bins.push_back(k);
    }
    return bins;
}

std::size_t stft_frame_count(std::size_t n, std::size_t window_len, std::size_t hop) {
    if (n < window_len) return 0;
    return (n - window_len) / hop + 1;
}

std::vector<std::vector<double>> stft_band_magnitudes(const std::vector<double>& x, double fs,
                                                      const SpectralConfig& cfg) {
    cfg.validate();
    const std::size_t frames = stft_frame_count(x.size(), cfg.window_len, cfg.hop);
    if (frames == 0) {
        throw DataError("stft: signal of " + std::to_string(x.size()) +
                        " samples is shorter than the window (" + std::to_string(cfg.window_len) +
                        ")");
    }
    const std::vector<std::size_t> bins =
        band_bin_indices(cfg.window_len, fs, cfg.band_lo_hz, cfg.band_hi_hz);
    if (bins.empty()) throw ConfigError("spectral: band keeps no bins at fs " + std::to_string(fs));

    const std::vector<double> win = hann_window(cfg.window_len);
    std::vector<std::vector<double>> out(frames, std::vector<double>(bins.size()));
    std::vector<std::complex<double>> buf(cfg.window_len);
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t off = t * cfg.hop;
        for (std::size_t m = 0; m < cfg.window_len; ++m) {
            buf[m] = std::complex<double>(x[off + m] * win[m], 0.0);
        }
        fft(buf);
        for (std::size_t j = 0; j < bins.size(); ++j) {
            const double mag = std::abs(buf[bins[j]]);
            out[t][j] = cfg.log_magnitude ? std::log1p(mag) : mag;
        }
    }
    return out;
}

FeatureTensor spectral_features(const PreprocRecording& rec, const SpectralConfig& cfg) {
    cfg.validate();
    if (!cfg.allow_unpreprocessed && rec.stage_tag != Stage::Prep) {
        throw ConfigError(std::string("spectral_features: input stage is ") +
                          std::string(stage_name(rec.stage_tag)) +
                          ", expected prep (set allow_unpreprocessed to bypass)");
    }
    rec.validate();

    const std::vector<std::size_t> bins =
        band_bin_indices(cfg.window_len, rec.fs, cfg.band_lo_hz, cfg.band_hi_hz);
    if (bins.empty()) {
        throw ConfigError("spectral: band keeps no bins at fs " + std::to_string(rec.fs));
    }
    const std::size_t frames = stft_frame_count(rec.n_samples(), cfg.window_len, cfg.hop);
    if (frames == 0) {
        throw DataError("recording " + rec.subject_id + "," + rec.trial_id + ": " +
                        std::to_string(rec.n_samples()) + " samples is shorter than the window (" +
                        std::to_string(cfg.window_len) + ")");
    }

    FeatureTensor out;
    out.n_frames = frames;
    out.n_channels = kNumChannels;
    out.n_bins = bins.size();
    out.data.resize(frames * kNumChannels * bins.size());
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const auto mags = stft_band_magnitudes(rec.channels[c], rec.fs, cfg);
        for (std::size_t t = 0; t < frames; ++t) {
            for (std::size_t b = 0; b < bins.size(); ++b) out.at(t, c, b) = mags[t][b];
        }
    }
    return out;
}

namespace {

constexpr char kFeatureMagic[8] = {'N', 'S', 'F', 'E', 'A', 'T', '0', '1'};
constexpr std::uint32_t kFeatureVersion = 1;
constexpr std::uint32_t kNoLabel = 0xFFFFFFFFu;

template <typename T>
void write_pod(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError(std::string("features: truncated reading ") + what);
    }
    return v;
}

std::string read_str(std::istream& in, const char* what) {
    const auto len = read_pod<std::uint32_t>(in, what);
    std::string s(len, '\0');
    if (len && !in.read(s.data(), len)) {
        throw DataError(std::string("features: truncated reading ") + what);
    }
    return s;
}

}  // namespace

void save_features(const std::vector<RecordingFeatures>& recs,
                   const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(kFeatureMagic, sizeof kFeatureMagic);
    write_pod(out, kFeatureVersion);
    write_pod(out, static_cast<std::uint32_t>(recs.size()));
    for (const auto& r : recs) {
        write_pod(out, static_cast<std::uint32_t>(r.subject_id.size()));
        out.write(r.subject_id.data(), static_cast<std::streamsize>(r.subject_id.size()));
        write_pod(out, static_cast<std::uint32_t>(r.trial_id.size()));
        out.write(r.trial_id.data(), static_cast<std::streamsize>(r.trial_id.size()));
        write_pod(out, r.label ? static_cast<std::uint32_t>(*r.label) : kNoLabel);
        write_pod(out, static_cast<std::uint64_t>(r.features.n_frames));
        write_pod(out, static_cast<std::uint64_t>(r.features.n_channels));
        write_pod(out, static_cast<std::uint64_t>(r.features.n_bins));
        write_pod(out, r.fs);
        out.write(reinterpret_cast<const char*>(r.features.data.data()),
                  static_cast<std::streamsize>(r.features.data.size() * sizeof(double)));
    }
    if (!out) throw DataError("write failed for " + path.string());
}

std::vector<RecordingFeatures> load_features(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kFeatureMagic, sizeof magic) != 0) {
        throw DataError("features: bad magic in " + path.string());
    }
    const auto version = read_pod<std::uint32_t>(in, "version");
    if (version != kFeatureVersion) {
        throw DataError("features: unsupported version " + std::to_string(version));
    }
    const auto count = read_pod<std::uint32_t>(in, "record count");
    std::vector<RecordingFeatures> recs;
    recs.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        RecordingFeatures r;
        r.subject_id = read_str(in, "subject id");
        r.trial_id = read_str(in, "trial id");
        const auto label = read_pod<std::uint32_t>(in, "label");
        if (label != kNoLabel) {
            if (label >= kNumEmotions) {
                throw DataError("features: label index " + std::to_string(label) +
                                " out of range");
            }
            r.label = static_cast<Emotion>(label);
        }
        r.features.n_frames = static_cast<std::size_t>(read_pod<std::uint64_t>(in, "frames"));
        r.features.n_channels =
            static_cast<std::size_t>(read_pod<std::uint64_t>(in, "channels"));
        r.features.n_bins = static_cast<std::size_t>(read_pod<std::uint64_t>(in, "bins"));
        r.fs = read_pod<double>(in, "fs");
        r.features.data.resize(r.features.n_frames * r.features.n_channels * r.features.n_bins);
        if (!r.features.data.empty() &&
            !in.read(reinterpret_cast<char*>(r.features.data.data()),
                     static_cast<std::streamsize>(r.features.data.size() * sizeof(double)))) {
            throw DataError("features: truncated reading record " + std::to_string(i));
        }
        recs.push_back(std::move(r));
    }
    return recs;
}

}  // namespace neurostream
