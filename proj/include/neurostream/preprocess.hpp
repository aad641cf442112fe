#pragma once

#include <cstddef>
#include <vector>

#include "neurostream/recording.hpp"

namespace neurostream {

// One second-order IIR section, run in Direct Form II transposed with zero
// initial state.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;  // numerator
    double a1 = 0.0, a2 = 0.0;            // denominator (a0 normalised to 1)
};

// Cascade of biquads implementing one Butterworth filter.
struct ButterworthFilter {
    std::vector<Biquad> sections;

    std::vector<double> apply(const std::vector<double>& x) const;
    // Complex magnitude of the cascade's frequency response at f (Hz).
    double magnitude_at(double f_hz, double fs) const;
};

// Design an even-order Butterworth low-pass / high-pass via the bilinear
// transform. `order` must be even and positive; cutoff must lie in (0, fs/2).
ButterworthFilter butter_lowpass(int order, double cutoff_hz, double fs);
ButterworthFilter butter_highpass(int order, double cutoff_hz, double fs);

struct FilterSpec {
    double low_hz = 1.0;    // high-pass cutoff
    double high_hz = 50.0;  // low-pass cutoff
    int order = 4;          // per-side Butterworth order
};

struct PreprocessConfig {
    FilterSpec band;
    double trim_seconds = 0.040;  // initial segment removed from every channel
};

// Mastoid re-referencing: every channel (A1 and A2 included) gets
// (A1 + A2) / 2 subtracted, using the averages captured before any channel is
// rewritten. Accepts any stage so that re-application is observable as a
// no-op on A1/A2-free math; output stage is Ref.
PreprocRecording re_reference(const Recording& rec);

// Band-pass: low-pass at band.high_hz then high-pass at band.low_hz, each a
// Butterworth of the given order, applied independently per channel.
// Accepts Raw or Ref input.
PreprocRecording band_filter(const PreprocRecording& rec, const FilterSpec& band);

// Remove the leading round(trim_seconds * fs) samples from every channel.
// Accepts Raw, Ref, or Filt input; the result must keep at least one sample.
// Output stage is Prep (trimming is the final stage).
PreprocRecording trim_delay(const PreprocRecording& rec, double trim_seconds);

// re_reference -> band_filter -> trim_delay.
PreprocRecording preprocess(const Recording& rec, const PreprocessConfig& cfg);

Dataset preprocess_dataset(const Dataset& ds, const PreprocessConfig& cfg);

}  // namespace neurostream
