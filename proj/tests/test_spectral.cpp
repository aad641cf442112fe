#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "neurostream/errors.hpp"
#include "neurostream/fft.hpp"
#include "neurostream/preprocess.hpp"
#include "neurostream/spectral.hpp"
#include "support.hpp"

using namespace neurostream;
using nstest::naive_dft;
using nstest::TmpDir;

namespace {

std::vector<std::complex<double>> random_complex(Rng& rng, std::size_t n) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {rng.normal(), rng.normal()};
    return x;
}

PreprocRecording prep_recording(const std::vector<double>& wave, double fs = 300.0) {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = nstest::uniform_recording(wave, fs);
    rec.stage_tag = Stage::Prep;
    return rec;
}

}  // namespace

TEST_CASE("fft of a constant puts all energy in the DC bin") {
    std::vector<std::complex<double>> x(8, {3.25, 0.0});
    fft(x);
    CHECK(x[0].real() == doctest::Approx(8 * 3.25).epsilon(1e-12));
    CHECK(x[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(x[k]) <= 1e-10);
}

TEST_CASE("fft of cos(2*pi*3n/16) concentrates in bins 3 and 13") {
    std::vector<std::complex<double>> x(16);
    for (std::size_t n = 0; n < 16; ++n) {
        x[n] = {std::cos(2.0 * M_PI * 3.0 * static_cast<double>(n) / 16.0), 0.0};
    }
    const auto expected = naive_dft(x);
    fft(x);
    for (std::size_t k = 0; k < 16; ++k) {
        CHECK(std::abs(x[k] - expected[k]) <= 1e-10);
    }
    CHECK(std::abs(x[3]) == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(std::abs(x[13]) == doctest::Approx(8.0).epsilon(1e-10));
    for (std::size_t k = 0; k < 16; ++k) {
        if (k != 3 && k != 13) CHECK(std::abs(x[k]) <= 1e-10);
    }
}

TEST_CASE("fft matches the naive DFT on random vectors up to length 64") {
    Rng rng(2024);
    for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
        for (int rep = 0; rep < 20; ++rep) {
            auto x = random_complex(rng, n);
            const auto expected = naive_dft(x);
            fft(x);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(x[k] - expected[k]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("ifft inverts fft within 1e-10") {
    Rng rng(7);
    auto x = random_complex(rng, 128);
    auto y = x;
    fft(y);
    ifft(y);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(y[k] - x[k]) <= 1e-10);
}

TEST_CASE("Parseval holds to 1e-9 relative through N = 4096") {
    Rng rng(99);
    for (std::size_t n = 2; n <= 4096; n *= 2) {
        auto x = random_complex(rng, n);
        double time_power = 0.0;
        for (const auto& v : x) time_power += std::norm(v);
        fft(x);
        double freq_power = 0.0;
        for (const auto& v : x) freq_power += std::norm(v);
        freq_power /= static_cast<double>(n);
        CHECK(std::abs(freq_power - time_power) <= 1e-9 * time_power);
    }
}

TEST_CASE("real input gives a conjugate-symmetric spectrum") {
    Rng rng(4);
    std::vector<double> x(256);
    for (double& v : x) v = rng.normal();
    const auto spec = fft_real(x);
    for (std::size_t k = 1; k < x.size(); ++k) {
        CHECK(std::abs(spec[k] - std::conj(spec[x.size() - k])) <= 1e-12 * (1.0 + std::abs(spec[k])));
    }
}

TEST_CASE("non-power-of-two lengths are rejected") {
    std::vector<std::complex<double>> x(12);
    CHECK_THROWS_AS(fft(x), ShapeError);
    std::vector<std::complex<double>> empty;
    CHECK_THROWS_AS(fft(empty), ShapeError);
}

TEST_CASE("frame counts follow floor((n - w)/hop) + 1") {
    CHECK(stft_frame_count(4488, 256, 128) == 34);
    CHECK(stft_frame_count(256, 256, 128) == 1);
    CHECK(stft_frame_count(512, 128, 64) == 7);

    SpectralConfig cfg;
    std::vector<double> shorty(255, 0.0);
    CHECK_THROWS_WITH_AS(stft_band_magnitudes(shorty, 300.0, cfg),
                         doctest::Contains("shorter than"), DataError);
}

TEST_CASE("hann window matches its closed form") {
    const auto w = hann_window(256);
    REQUIRE(w.size() == 256);
    CHECK(w[0] == 0.0);
    CHECK(w[255] == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t m = 0; m < 256; ++m) {
        const double expected = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(m) / 255.0));
        CHECK(w[m] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("default band at fs 300 keeps bins 1..42") {
    const auto bins = band_bin_indices(256, 300.0, 1.0, 50.0);
    REQUIRE(bins.size() == 42);
    CHECK(bins.front() == 1);
    CHECK(bins.back() == 42);
    // centers k * fs / N span [1.17, 49.2] Hz
    CHECK(bins.front() * 300.0 / 256.0 == doctest::Approx(1.171875));
    CHECK(bins.back() * 300.0 / 256.0 == doctest::Approx(49.21875));
}

TEST_CASE("a pure 10 Hz tone peaks at the bin nearest 10 Hz in every frame") {
    PreprocRecording rec = prep_recording(nstest::sine_wave(10.0, 300.0, 1024));
    SpectralConfig cfg;
    const auto frames = stft_band_magnitudes(rec.waveform(Channel::Fp1), 300.0, cfg);
    const auto bins = band_bin_indices(256, 300.0, 1.0, 50.0);
    // nearest bin to 10 Hz: k = 9 at 10.55 Hz; band bins start at k = 1
    for (const auto& frame : frames) {
        std::size_t argmax = 0;
        for (std::size_t b = 1; b < frame.size(); ++b) {
            if (frame[b] > frame[argmax]) argmax = b;
        }
        CHECK(bins[argmax] == 9);
    }
}

TEST_CASE("an all-zero recording gives an all-zero feature tensor") {
    PreprocRecording rec = prep_recording(std::vector<double>(512, 0.0));
    SpectralConfig cfg;
    const FeatureTensor ft = spectral_features(rec, cfg);
    CHECK(ft.n_frames == 3);
    CHECK(ft.n_channels == 21);
    CHECK(ft.n_bins == 42);
    for (double v : ft.data) CHECK(v == 0.0);  // ln(1 + 0) = 0
}

TEST_CASE("features are finite and non-negative") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = nstest::random_recording(3, 600);
    rec.stage_tag = Stage::Prep;
    SpectralConfig cfg;
    const FeatureTensor ft = spectral_features(rec, cfg);
    for (double v : ft.data) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("log magnitude applies ln(1 + m) to plain magnitudes") {
    PreprocRecording rec = prep_recording(nstest::sine_wave(12.0, 300.0, 512));
    SpectralConfig lin;
    lin.log_magnitude = false;
    SpectralConfig logm;
    const FeatureTensor a = spectral_features(rec, lin);
    const FeatureTensor b = spectral_features(rec, logm);
    REQUIRE(a.data.size() == b.data.size());
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        CHECK(b.data[i] == doctest::Approx(std::log1p(a.data[i])).epsilon(1e-12));
    }
}

TEST_CASE("selecting channels permutes feature blocks identically") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = nstest::random_recording(8, 600);
    rec.stage_tag = Stage::Prep;
    SpectralConfig cfg;
    const FeatureTensor full = spectral_features(rec, cfg);

    const std::vector<std::size_t> order = {5, 0, 20, 7};
    const FeatureTensor sel = full.select_channels(order);
    CHECK(sel.n_channels == 4);
    for (std::size_t t = 0; t < full.n_frames; ++t) {
        for (std::size_t c = 0; c < order.size(); ++c) {
            for (std::size_t b = 0; b < full.n_bins; ++b) {
                CHECK(sel.at(t, c, b) == full.at(t, order[c], b));
            }
        }
    }
}

TEST_CASE("unpreprocessed input is rejected unless explicitly allowed") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = nstest::random_recording(6, 512);
    SpectralConfig cfg;
    CHECK_THROWS_AS(spectral_features(rec, cfg), ConfigError);
    cfg.allow_unpreprocessed = true;
    CHECK_NOTHROW(spectral_features(rec, cfg));
}

TEST_CASE("an empty retained band is a config error") {
    PreprocRecording rec = prep_recording(std::vector<double>(512, 0.0));
    SpectralConfig cfg;
    cfg.band_lo_hz = 0.1;
    cfg.band_hi_hz = 0.5;  // below the first nonzero bin center
    CHECK_THROWS_WITH_AS(spectral_features(rec, cfg), doctest::Contains("keeps no bins"),
                         ConfigError);
}

TEST_CASE("feature files round-trip exactly") {
    TmpDir tmp("features");
    PreprocRecording rec;
    static_cast<Recording&>(rec) = nstest::random_recording(12, 600);
    rec.stage_tag = Stage::Prep;
    SpectralConfig cfg;

    std::vector<RecordingFeatures> recs(2);
    recs[0].subject_id = "s01";
    recs[0].trial_id = "t01";
    recs[0].label = Emotion::Fear;
    recs[0].fs = 300.0;
    recs[0].features = spectral_features(rec, cfg);
    recs[1].subject_id = "s02";
    recs[1].trial_id = "t09";
    recs[1].label = std::nullopt;  // withheld label
    recs[1].fs = 300.0;
    recs[1].features = spectral_features(rec, cfg);

    save_features(recs, tmp.file("f.bin"));
    const auto back = load_features(tmp.file("f.bin"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].subject_id == "s01");
    CHECK(back[0].label == Emotion::Fear);
    CHECK(!back[1].label.has_value());
    CHECK(back[1].trial_id == "t09");
    for (std::size_t i = 0; i < 2; ++i) {
        REQUIRE(back[i].features.data.size() == recs[i].features.data.size());
        CHECK(back[i].features.n_frames == recs[i].features.n_frames);
        CHECK(back[i].features.n_bins == recs[i].features.n_bins);
        for (std::size_t n = 0; n < recs[i].features.data.size(); ++n) {
            CHECK(back[i].features.data[n] == recs[i].features.data[n]);
        }
    }

    CHECK_THROWS_AS(load_features(tmp.file("missing.bin")), DataError);
}
