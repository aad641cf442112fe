#pragma once

// Shared test helpers. The oracles here are intentionally naive, independent
// implementations (O(N^2) DFT, direct RMS) so library results are checked
// against something that cannot share a bug with the code under test.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "neurostream/dataset_io.hpp"
#include "neurostream/recording.hpp"
#include "neurostream/rng.hpp"

namespace nstest {

using neurostream::Channel;
using neurostream::Emotion;
using neurostream::kNumChannels;
using neurostream::Recording;

// Textbook DFT by direct summation: X[k] = sum_n x[n] exp(-2*pi*i*k*n/N).
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            const double angle = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(m) /
                                 static_cast<double>(n);
            acc += x[m] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<std::complex<double>> naive_dft_real(const std::vector<double>& x) {
    std::vector<std::complex<double>> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = {x[i], 0.0};
    return naive_dft(cx);
}

inline double rms(const std::vector<double>& x, std::size_t from = 0) {
    double acc = 0.0;
    for (std::size_t i = from; i < x.size(); ++i) acc += x[i] * x[i];
    const std::size_t n = x.size() - from;
    return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
}

// RMS over the final two-thirds of the signal, past the filter transient.
inline double steady_rms(const std::vector<double>& x) { return rms(x, x.size() / 3); }

inline std::vector<double> sine_wave(double f_hz, double fs, std::size_t n, double amp = 1.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = amp * std::sin(2.0 * M_PI * f_hz * static_cast<double>(i) / fs);
    }
    return x;
}

// A structurally valid recording with every channel set to the same waveform.
inline Recording uniform_recording(const std::vector<double>& wave, double fs = 300.0) {
    Recording rec;
    rec.subject_id = "s01";
    rec.trial_id = "t01";
    rec.label = Emotion::Joy;
    rec.fs = fs;
    for (auto& ch : rec.channels) ch = wave;
    return rec;
}

// Random-noise recording, deterministic in the seed.
inline Recording random_recording(std::uint64_t seed, std::size_t n = 512, double fs = 300.0) {
    neurostream::Rng rng(seed);
    Recording rec;
    rec.subject_id = "s" + std::to_string(seed);
    rec.trial_id = "t01";
    rec.label = Emotion::Anger;
    rec.fs = fs;
    for (auto& ch : rec.channels) {
        ch.resize(n);
        for (double& v : ch) v = rng.normal();
    }
    return rec;
}

// Unique scratch directory under the system temp root, removed on destruction.
class TmpDir {
  public:
    explicit TmpDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("neurostream_" + tag + "_" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create scratch directory for tag " + tag);
    }
    ~TmpDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TmpDir(const TmpDir&) = delete;
    TmpDir& operator=(const TmpDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

}  // namespace nstest
