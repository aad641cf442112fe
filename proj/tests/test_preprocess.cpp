#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "neurostream/errors.hpp"
#include "neurostream/preprocess.hpp"
#include "support.hpp"

using namespace neurostream;
using nstest::sine_wave;
using nstest::steady_rms;
using nstest::uniform_recording;

TEST_CASE("re-reference zeroes a recording that is constant across channels") {
    Recording rec = uniform_recording(std::vector<double>(16, 5.0));
    PreprocRecording out = re_reference(rec);
    CHECK(out.stage_tag == Stage::Ref);
    for (Channel c : all_channels()) {
        for (double v : out.waveform(c)) CHECK(v == 0.0);
    }
}

TEST_CASE("re-reference subtracts the per-sample mastoid mean") {
    Recording rec = uniform_recording({1.0, 2.0});
    rec.waveform(Channel::A1) = {2.0, 0.0};
    rec.waveform(Channel::A2) = {0.0, 2.0};
    PreprocRecording out = re_reference(rec);
    // mastoid mean is [1, 1], so every ordinary channel becomes [0, 1]
    CHECK(out.waveform(Channel::Fp1) == std::vector<double>{0.0, 1.0});
    CHECK(out.waveform(Channel::Cz) == std::vector<double>{0.0, 1.0});
}

TEST_CASE("re-referenced mastoid channels are exactly anti-symmetric") {
    Recording rec = uniform_recording({3.0});
    rec.waveform(Channel::A1) = {4.0};
    rec.waveform(Channel::A2) = {2.0};
    PreprocRecording out = re_reference(rec);
    CHECK(out.waveform(Channel::A1)[0] == 1.0);
    CHECK(out.waveform(Channel::A2)[0] == -1.0);
    CHECK(out.waveform(Channel::A1)[0] + out.waveform(Channel::A2)[0] == 0.0);

    Recording noisy = nstest::random_recording(21, 64);
    PreprocRecording ref = re_reference(noisy);
    for (std::size_t n = 0; n < ref.n_samples(); ++n) {
        CHECK(ref.waveform(Channel::A1)[n] + ref.waveform(Channel::A2)[n] == 0.0);
    }
}

TEST_CASE("re-reference is exactly idempotent") {
    Recording rec = nstest::random_recording(7, 128);
    PreprocRecording once = re_reference(rec);
    PreprocRecording twice = re_reference(once);
    for (Channel c : all_channels()) {
        const auto& a = once.waveform(c);
        const auto& b = twice.waveform(c);
        for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n] == b[n]);
    }
}

TEST_CASE("band filter maps zero to zero and preserves length") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(std::vector<double>(600, 0.0));
    rec.stage_tag = Stage::Ref;
    PreprocRecording out = band_filter(rec, FilterSpec{});
    CHECK(out.stage_tag == Stage::Filt);
    for (Channel c : all_channels()) {
        CHECK(out.waveform(c).size() == 600);
        for (double v : out.waveform(c)) CHECK(v == 0.0);
    }
}

TEST_CASE("10 Hz passes the default band nearly unattenuated") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(sine_wave(10.0, 300.0, 4500));
    rec.stage_tag = Stage::Ref;
    PreprocRecording out = band_filter(rec, FilterSpec{});
    const double in_rms = steady_rms(rec.waveform(Channel::Fp1));
    const double out_rms = steady_rms(out.waveform(Channel::Fp1));
    const double gain = out_rms / in_rms;
    CHECK(gain >= 0.71);
    CHECK(gain <= 1.01);
}

TEST_CASE("100 Hz is attenuated to a tenth or less") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(sine_wave(100.0, 300.0, 4500));
    rec.stage_tag = Stage::Ref;
    PreprocRecording out = band_filter(rec, FilterSpec{});
    const double gain =
        steady_rms(out.waveform(Channel::Fp1)) / steady_rms(rec.waveform(Channel::Fp1));
    CHECK(gain <= 0.1);
}

TEST_CASE("band filter removes DC") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(std::vector<double>(4500, 7.5));
    rec.stage_tag = Stage::Ref;
    PreprocRecording out = band_filter(rec, FilterSpec{});
    const auto& w = out.waveform(Channel::O1);
    double mean = 0.0;
    for (std::size_t n = w.size() / 3; n < w.size(); ++n) mean += w[n];
    mean /= static_cast<double>(w.size() - w.size() / 3);
    CHECK(std::abs(mean) <= 1e-3 * 7.5);
}

TEST_CASE("band filter is linear within 1e-9 per sample") {
    Recording ra = nstest::random_recording(100, 900);
    Recording rb = nstest::random_recording(101, 900);
    const double alpha = 1.7, beta = -0.4;

    PreprocRecording a, b, combo;
    static_cast<Recording&>(a) = ra;
    static_cast<Recording&>(b) = rb;
    static_cast<Recording&>(combo) = ra;
    for (Channel c : all_channels()) {
        auto& w = combo.waveform(c);
        const auto& wb = rb.waveform(c);
        for (std::size_t n = 0; n < w.size(); ++n) w[n] = alpha * w[n] + beta * wb[n];
    }
    PreprocRecording fa = band_filter(a, FilterSpec{});
    PreprocRecording fb = band_filter(b, FilterSpec{});
    PreprocRecording fc = band_filter(combo, FilterSpec{});
    for (Channel c : all_channels()) {
        const auto& xa = fa.waveform(c);
        const auto& xb = fb.waveform(c);
        const auto& xc = fc.waveform(c);
        for (std::size_t n = 0; n < xc.size(); ++n) {
            CHECK(std::abs(xc[n] - (alpha * xa[n] + beta * xb[n])) <= 1e-9);
        }
    }
}

TEST_CASE("filter design rejects invalid cutoffs and too-short input") {
    CHECK_THROWS_AS(butter_lowpass(4, 150.0, 300.0), ConfigError);  // at Nyquist
    CHECK_THROWS_AS(butter_lowpass(3, 50.0, 300.0), ConfigError);   // odd order
    CHECK_THROWS_AS(butter_highpass(4, 0.0, 300.0), ConfigError);

    FilterSpec bad;
    bad.high_hz = 200.0;  // >= fs/2
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(std::vector<double>(100, 1.0));
    CHECK_THROWS_AS(band_filter(rec, bad), ConfigError);

    PreprocRecording tiny;
    static_cast<Recording&>(tiny) = uniform_recording(std::vector<double>(8, 1.0));
    CHECK_THROWS_AS(band_filter(tiny, FilterSpec{}), DataError);
}

TEST_CASE("trim removes exactly round(delay*fs) leading samples") {
    std::vector<double> wave(4500);
    for (std::size_t i = 0; i < wave.size(); ++i) wave[i] = static_cast<double>(i);
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(wave);
    rec.stage_tag = Stage::Filt;

    PreprocRecording out = trim_delay(rec, 0.040);
    CHECK(out.stage_tag == Stage::Prep);
    CHECK(out.n_samples() == 4488);  // 4500 - round(0.040 * 300)
    for (Channel c : all_channels()) {
        const auto& w = out.waveform(c);
        for (std::size_t n = 0; n < 20; ++n) {
            CHECK(w[n] == wave[n + 12]);  // values preserved, shifted by d
        }
    }
}

TEST_CASE("zero trim is the identity") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording({1.0, 2.0, 3.0});
    PreprocRecording out = trim_delay(rec, 0.0);
    CHECK(out.n_samples() == 3);
    CHECK(out.waveform(Channel::T5) == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("trim longer than the recording is an error") {
    PreprocRecording rec;
    static_cast<Recording&>(rec) = uniform_recording(std::vector<double>(100, 1.0));
    CHECK_THROWS_WITH_AS(trim_delay(rec, 1.0), doctest::Contains("leaves nothing"), DataError);
}

TEST_CASE("full pipeline on 4500 samples yields a 4488-sample prep recording") {
    Recording rec = nstest::random_recording(5, 4500);
    PreprocRecording out = preprocess(rec, PreprocessConfig{});
    CHECK(out.stage_tag == Stage::Prep);
    CHECK(out.n_samples() == 4488);
    for (Channel c : all_channels()) {
        for (double v : out.waveform(c)) CHECK(std::isfinite(v));
    }
}

TEST_CASE("constant input comes out of the full pipeline as all zeros") {
    Recording rec = uniform_recording(std::vector<double>(600, 5.0));
    PreprocRecording out = preprocess(rec, PreprocessConfig{});
    for (Channel c : all_channels()) {
        for (double v : out.waveform(c)) CHECK(v == 0.0);
    }
}

TEST_CASE("LPF-then-HPF equals HPF-then-LPF within tolerance") {
    // The two stages are applied in the documented order; for LTI cascades
    // the order cannot matter beyond rounding, which this pins down.
    Recording rec = nstest::random_recording(33, 1200);
    const auto& x = rec.waveform(Channel::C3);
    auto lp = butter_lowpass(4, 50.0, 300.0);
    auto hp = butter_highpass(4, 1.0, 300.0);
    const auto a = hp.apply(lp.apply(x));
    const auto b = lp.apply(hp.apply(x));
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(std::abs(a[n] - b[n]) <= 1e-9);
}
