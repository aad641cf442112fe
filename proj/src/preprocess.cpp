#include "neurostream/preprocess.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "neurostream/errors.hpp"

namespace neurostream {

namespace {

void check_design(int order, double cutoff_hz, double fs, const char* kind) {
    if (order < 2 || order % 2 != 0) {
        throw ConfigError(std::string(kind) + ": order must be a positive even number, got " +
                          std::to_string(order));
    }
    if (!(fs > 0.0)) throw ConfigError(std::string(kind) + ": fs must be positive");
    if (!(cutoff_hz > 0.0 && cutoff_hz < fs / 2.0)) {
        throw ConfigError(std::string(kind) + ": cutoff must lie in (0, fs/2), got " +
                          std::to_string(cutoff_hz) + " Hz at fs " + std::to_string(fs));
    }
}

// Bilinear-transform design of one second-order Butterworth section with
// quality factor Q. g is the pre-warped cutoff, tan(pi * fc / fs).
Biquad lp_section(double g, double q) {
    const double g2 = g * g;
    const double a0 = 1.0 + g / q + g2;
    Biquad s;
    s.b0 = g2 / a0;
    s.b1 = 2.0 * g2 / a0;
    s.b2 = g2 / a0;
    s.a1 = 2.0 * (g2 - 1.0) / a0;
    s.a2 = (1.0 - g / q + g2) / a0;
    return s;
}

Biquad hp_section(double g, double q) {
    const double g2 = g * g;
    const double a0 = 1.0 + g / q + g2;
    Biquad s;
    s.b0 = 1.0 / a0;
    s.b1 = -2.0 / a0;
    s.b2 = 1.0 / a0;
    s.a1 = 2.0 * (g2 - 1.0) / a0;
    s.a2 = (1.0 - g / q + g2) / a0;
    return s;
}

// Butterworth pole quality factors for an even order n: one section per
// conjugate pole pair, q = 0 .. n/2-1.
double butter_q(int order, int q) {
    const double theta = std::numbers::pi * (2.0 * q + 1.0) / (2.0 * order);
    return 1.0 / (2.0 * std::sin(theta));
}

const char* stage_label(Stage s) { return stage_name(s).data(); }

}  // namespace

std::vector<double> ButterworthFilter::apply(const std::vector<double>& x) const {
    std::vector<double> y = x;
    for (const Biquad& s : sections) {
        double z1 = 0.0, z2 = 0.0;  // DF2T state, zero initial conditions
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

double ButterworthFilter::magnitude_at(double f_hz, double fs) const {
    const double w = 2.0 * std::numbers::pi * f_hz / fs;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    double mag = 1.0;
    for (const Biquad& s : sections) {
        const std::complex<double> num = s.b0 + s.b1 * z1 + s.b2 * z2;
        const std::complex<double> den = 1.0 + s.a1 * z1 + s.a2 * z2;
        mag *= std::abs(num) / std::abs(den);
    }
    return mag;
}

ButterworthFilter butter_lowpass(int order, double cutoff_hz, double fs) {
    check_design(order, cutoff_hz, fs, "butter_lowpass");
    const double g = std::tan(std::numbers::pi * cutoff_hz / fs);
    ButterworthFilter f;
    for (int q = 0; q < order / 2; ++q) f.sections.push_back(lp_section(g, butter_q(order, q)));
    return f;
}

ButterworthFilter butter_highpass(int order, double cutoff_hz, double fs) {
    check_design(order, cutoff_hz, fs, "butter_highpass");
    const double g = std::tan(std::numbers::pi * cutoff_hz / fs);
    ButterworthFilter f;
    for (int q = 0; q < order / 2; ++q) f.sections.push_back(hp_section(g, butter_q(order, q)));
    return f;
}

PreprocRecording re_reference(const Recording& rec) {
    rec.validate();
    PreprocRecording out;
    static_cast<Recording&>(out) = rec;
    out.stage_tag = Stage::Ref;

    const std::vector<double> a1 = rec.waveform(Channel::A1);  // copies: the source
    const std::vector<double> a2 = rec.waveform(Channel::A2);  // channels get rewritten too
    const std::size_t n = rec.n_samples();
    for (auto& w : out.channels) {
        for (std::size_t i = 0; i < n; ++i) w[i] -= (a1[i] + a2[i]) / 2.0;
    }
    // The mastoid outputs reduce algebraically to +/-(A1-A2)/2. Computing them
    // in that form makes their sum exactly zero (and with it re-reference
    // idempotence) instead of leaving a one-ulp residue from the subtraction.
    auto& m1 = out.channels[static_cast<std::size_t>(Channel::A1)];
    auto& m2 = out.channels[static_cast<std::size_t>(Channel::A2)];
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a1[i] - a2[i]) / 2.0;
        m1[i] = d;
        m2[i] = -d;
    }
    return out;
}

PreprocRecording band_filter(const PreprocRecording& rec, const FilterSpec& band) {
    if (rec.stage_tag != Stage::Raw && rec.stage_tag != Stage::Ref) {
        throw ConfigError(std::string("band_filter: expected raw or ref input, got ") +
                          stage_label(rec.stage_tag));
    }
    if (!(band.low_hz > 0.0 && band.low_hz < band.high_hz && band.high_hz < rec.fs / 2.0)) {
        throw ConfigError("band_filter: need 0 < low < high < fs/2");
    }
    rec.validate();
    if (rec.n_samples() < 3 * static_cast<std::size_t>(band.order)) {
        throw DataError("band_filter: waveform of " + std::to_string(rec.n_samples()) +
                        " samples is shorter than 3x the filter order");
    }
    const ButterworthFilter lp = butter_lowpass(band.order, band.high_hz, rec.fs);
    const ButterworthFilter hp = butter_highpass(band.order, band.low_hz, rec.fs);

    PreprocRecording out;
    static_cast<Recording&>(out) = rec;
    out.stage_tag = Stage::Filt;
    for (auto& w : out.channels) w = hp.apply(lp.apply(w));
    return out;
}

PreprocRecording trim_delay(const PreprocRecording& rec, double trim_seconds) {
    if (rec.stage_tag == Stage::Prep) {
        throw ConfigError("trim_delay: input is already fully preprocessed");
    }
    if (!(trim_seconds >= 0.0)) throw ConfigError("trim_delay: trim_seconds must be >= 0");
    rec.validate();
    const auto k = static_cast<std::size_t>(std::llround(trim_seconds * rec.fs));
    if (k >= rec.n_samples()) {
        throw DataError("recording " + rec.subject_id + "," + rec.trial_id +
                        ": trim of " + std::to_string(k) + " samples leaves nothing (have " +
                        std::to_string(rec.n_samples()) + ")");
    }
    PreprocRecording out;
    static_cast<Recording&>(out) = rec;
    out.stage_tag = Stage::Prep;
    for (auto& w : out.channels) w.erase(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

PreprocRecording preprocess(const Recording& rec, const PreprocessConfig& cfg) {
    return trim_delay(band_filter(re_reference(rec), cfg.band), cfg.trim_seconds);
}

Dataset preprocess_dataset(const Dataset& ds, const PreprocessConfig& cfg) {
    ds.validate();
    Dataset out;
    out.split = ds.split;
    out.recordings.reserve(ds.recordings.size());
    for (const auto& rec : ds.recordings) {
        out.recordings.push_back(preprocess(rec, cfg));  // slices off the stage tag
    }
    return out;
}

}  // namespace neurostream
