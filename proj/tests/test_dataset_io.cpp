#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "neurostream/dataset_io.hpp"
#include "neurostream/errors.hpp"
#include "neurostream/hemisplit.hpp"
#include "support.hpp"

using namespace neurostream;
using nstest::TmpDir;

namespace {

std::string csv_header(std::size_t n_samples) {
    std::string h = "subject,trial,label,channel";
    for (std::size_t i = 0; i < n_samples; ++i) h += ",s" + std::to_string(i);
    return h;
}

// One full trial: 21 channel rows of `n` constant samples.
void write_trial(std::ostream& out, const std::string& subject, const std::string& trial,
                 const std::string& label, std::size_t n, double value = 1.0,
                 const char* skip_channel = nullptr) {
    for (Channel c : all_channels()) {
        if (skip_channel && channel_name(c) == skip_channel) continue;
        out << subject << ',' << trial << ',' << label << ',' << channel_name(c);
        for (std::size_t i = 0; i < n; ++i) out << ',' << value;
        out << '\n';
    }
}

void write_manifest(const std::filesystem::path& p, const char* split = "train") {
    std::ofstream out(p);
    out << "{\"fs_hz\": 300.0, \"units\": \"microvolt\", \"split\": \"" << split << "\"}\n";
}

}  // namespace

TEST_CASE("emotion labels are indexed alphabetically") {
    CHECK(static_cast<int>(Emotion::Anger) == 0);
    CHECK(static_cast<int>(Emotion::Disgust) == 1);
    CHECK(static_cast<int>(Emotion::Fear) == 2);
    CHECK(static_cast<int>(Emotion::Joy) == 3);
    CHECK(static_cast<int>(Emotion::Sadness) == 4);
    CHECK(static_cast<int>(Emotion::Surprise) == 5);
    CHECK(emotion_from_name("JOY") == Emotion::Joy);
    CHECK(emotion_from_name("nonsense") == std::nullopt);
}

TEST_CASE("channel lookup is case-insensitive and total") {
    CHECK(all_channels().size() == 21);
    CHECK(channel_from_name("fp1") == Channel::Fp1);
    CHECK(channel_from_name("FZ") == Channel::Fz);
    CHECK(channel_from_name("a2") == Channel::A2);
    CHECK(channel_from_name("Oz") == std::nullopt);
    for (Channel c : all_channels()) {
        CHECK(channel_from_name(channel_name(c)) == c);
    }
}

TEST_CASE("single labeled trial loads with 21 channels") {
    TmpDir tmp("load_single");
    write_manifest(tmp.file("d.manifest.json"));
    {
        std::ofstream out(tmp.file("d.csv"));
        out << csv_header(30) << '\n';
        write_trial(out, "s01", "t01", "joy", 30);
    }
    Dataset ds = load_csv(tmp.file("d.csv"), tmp.file("d.manifest.json"));
    REQUIRE(ds.recordings.size() == 1);
    const Recording& rec = ds.recordings[0];
    CHECK(rec.label == Emotion::Joy);
    CHECK(static_cast<int>(*rec.label) == 3);
    CHECK(rec.n_samples() == 30);
    CHECK(rec.fs == 300.0);
    for (Channel c : all_channels()) CHECK(rec.waveform(c).size() == 30);
}

TEST_CASE("20 subjects x 6 emotions x 3 repetitions load as 360 recordings") {
    TmpDir tmp("load_360");
    write_manifest(tmp.file("d.manifest.json"));
    {
        std::ofstream out(tmp.file("d.csv"));
        out << csv_header(4) << '\n';
        for (int s = 0; s < 20; ++s) {
            for (Emotion e : all_emotions()) {
                for (int r = 0; r < 3; ++r) {
                    write_trial(out, "s" + std::to_string(s),
                                std::string(emotion_name(e)) + "_r" + std::to_string(r),
                                std::string(emotion_name(e)), 4);
                }
            }
        }
    }
    Dataset ds = load_csv(tmp.file("d.csv"), tmp.file("d.manifest.json"));
    CHECK(ds.recordings.size() == 360);
}

TEST_CASE("missing channel row is a schema error naming subject,trial,channel") {
    TmpDir tmp("load_missing");
    write_manifest(tmp.file("d.manifest.json"));
    {
        std::ofstream out(tmp.file("d.csv"));
        out << csv_header(5) << '\n';
        write_trial(out, "s01", "t01", "fear", 5, 1.0, "O2");
    }
    CHECK_THROWS_WITH_AS(load_csv(tmp.file("d.csv"), tmp.file("d.manifest.json")),
                         doctest::Contains("s01,t01,O2"), DataError);
}

TEST_CASE("duplicate channel row and unknown label are rejected") {
    TmpDir tmp("load_bad");
    write_manifest(tmp.file("d.manifest.json"));
    {
        std::ofstream out(tmp.file("dup.csv"));
        out << csv_header(2) << '\n';
        write_trial(out, "s01", "t01", "anger", 2);
        out << "s01,t01,anger,Fp1,0,0\n";
    }
    CHECK_THROWS_WITH_AS(load_csv(tmp.file("dup.csv"), tmp.file("d.manifest.json")),
                         doctest::Contains("duplicate channel"), DataError);
    {
        std::ofstream out(tmp.file("lbl.csv"));
        out << csv_header(2) << '\n';
        write_trial(out, "s01", "t01", "boredom", 2);
    }
    CHECK_THROWS_WITH_AS(load_csv(tmp.file("lbl.csv"), tmp.file("d.manifest.json")),
                         doctest::Contains("unknown label"), DataError);
}

TEST_CASE("non-finite and non-numeric samples are parse errors with a row index") {
    TmpDir tmp("load_nan");
    write_manifest(tmp.file("d.manifest.json"));
    {
        std::ofstream out(tmp.file("d.csv"));
        out << csv_header(2) << '\n';
        out << "s01,t01,anger,Fp1,0,nan\n";
    }
    CHECK_THROWS_WITH_AS(load_csv(tmp.file("d.csv"), tmp.file("d.manifest.json")),
                         doctest::Contains("row 2"), DataError);
}

TEST_CASE("unlabeled test rows use the label string unknown") {
    TmpDir tmp("load_unknown");
    write_manifest(tmp.file("d.manifest.json"), "test");
    {
        std::ofstream out(tmp.file("d.csv"));
        out << csv_header(3) << '\n';
        write_trial(out, "s01", "t01", "unknown", 3);
    }
    Dataset ds = load_csv(tmp.file("d.csv"), tmp.file("d.manifest.json"));
    REQUIRE(ds.recordings.size() == 1);
    CHECK(!ds.recordings[0].label.has_value());
    CHECK(ds.split == Split::Test);
}

TEST_CASE("save/load round-trip is bit-identical") {
    TmpDir tmp("roundtrip");
    SynthSpec spec;
    spec.n_subjects = 1;
    spec.n_reps = 1;
    spec.duration = 0.5;
    spec.noise_sigma = 0.3;
    Dataset ds = gen_synthetic(spec, 11);
    ds.recordings.resize(2);

    save_csv(ds, tmp.file("d.csv"));
    Manifest m;
    m.fs_hz = spec.fs;
    save_manifest(m, tmp.file("d.manifest.json"));
    Dataset back = load_csv(tmp.file("d.csv"), tmp.file("d.manifest.json"));

    REQUIRE(back.recordings.size() == ds.recordings.size());
    for (std::size_t i = 0; i < ds.recordings.size(); ++i) {
        CHECK(back.recordings[i].subject_id == ds.recordings[i].subject_id);
        CHECK(back.recordings[i].trial_id == ds.recordings[i].trial_id);
        CHECK(back.recordings[i].label == ds.recordings[i].label);
        for (Channel c : all_channels()) {
            const auto& a = ds.recordings[i].waveform(c);
            const auto& b = back.recordings[i].waveform(c);
            REQUIRE(a.size() == b.size());
            for (std::size_t n = 0; n < a.size(); ++n) {
                CHECK(a[n] == b[n]);  // exact: 17 significant digits round-trip
            }
        }
    }
}

TEST_CASE("saving an empty or mixed-rate dataset is an error") {
    TmpDir tmp("save_bad");
    Dataset empty;
    CHECK_THROWS_WITH_AS(save_csv(empty, tmp.file("e.csv")), doctest::Contains("empty dataset"),
                         DataError);

    SynthSpec spec;
    spec.duration = 0.1;
    Dataset mixed = gen_synthetic(spec, 1);
    mixed.recordings[1].fs = 250.0;
    CHECK_THROWS_WITH_AS(save_csv(mixed, tmp.file("m.csv")),
                         doctest::Contains("inconsistent sampling rate"), DataError);
}

TEST_CASE("noise-free zero-asymmetry synthesis is a pure sinusoid") {
    SynthSpec spec;
    spec.duration = 0.2;
    spec.carrier_hz = {10.0, 10.0, 10.0, 10.0, 10.0, 10.0};
    Dataset ds = gen_synthetic(spec, 5);
    REQUIRE(ds.recordings.size() == 6);
    for (const Recording& rec : ds.recordings) {
        const std::size_t n = rec.n_samples();
        for (Channel c : all_channels()) {
            const auto& w = rec.waveform(c);
            const bool reference =
                c == Channel::A1 || c == Channel::A2 || c == Channel::Pz;
            for (std::size_t i = 0; i < n; ++i) {
                const double expected =
                    reference ? 0.0 : std::sin(2.0 * M_PI * 10.0 * static_cast<double>(i) / spec.fs);
                CHECK(w[i] == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("synthesis is deterministic per (spec, seed)") {
    SynthSpec spec;
    spec.duration = 0.3;
    spec.noise_sigma = 0.5;
    Dataset a = gen_synthetic(spec, 42);
    Dataset b = gen_synthetic(spec, 42);
    REQUIRE(a.recordings.size() == b.recordings.size());
    for (std::size_t i = 0; i < a.recordings.size(); ++i) {
        for (Channel c : all_channels()) {
            const auto& wa = a.recordings[i].waveform(c);
            const auto& wb = b.recordings[i].waveform(c);
            REQUIRE(wa.size() == wb.size());
            for (std::size_t nn = 0; nn < wa.size(); ++nn) CHECK(wa[nn] == wb[nn]);
        }
    }
    Dataset c = gen_synthetic(spec, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.recordings.size() && !any_diff; ++i) {
        const auto& wa = a.recordings[i].waveform(Channel::Fp1);
        const auto& wc = c.recordings[i].waveform(Channel::Fp1);
        for (std::size_t nn = 0; nn < wa.size(); ++nn) {
            if (wa[nn] != wc[nn]) {
                any_diff = true;
                break;
            }
        }
    }
    CHECK(any_diff);
}

TEST_CASE("asymmetry 0.5 gives a left/right RMS ratio of 3 at zero noise") {
    SynthSpec spec;
    spec.duration = 1.0;
    spec.asymmetry = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    Dataset ds = gen_synthetic(spec, 2);
    for (const Recording& rec : ds.recordings) {
        const double left = nstest::rms(rec.waveform(Channel::Fp1));
        const double right = nstest::rms(rec.waveform(Channel::Fp2));
        REQUIRE(right > 0.0);
        CHECK(left / right == doctest::Approx(3.0).epsilon(1e-6));
    }
}

TEST_CASE("synthetic classes are exactly balanced") {
    SynthSpec spec;
    spec.n_subjects = 3;
    spec.n_reps = 2;
    spec.duration = 0.1;
    Dataset ds = gen_synthetic(spec, 9);
    std::array<int, kNumEmotions> counts{};
    for (const auto& rec : ds.recordings) counts[static_cast<int>(*rec.label)]++;
    for (int c : counts) CHECK(c == 6);  // 3 subjects x 2 reps
}

TEST_CASE("carrier frequency outside the filter band is a spec error") {
    SynthSpec spec;
    spec.carrier_hz[2] = 55.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.carrier_hz[2] = 1.0;  // boundary is open
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.carrier_hz[2] = 12.0;
    CHECK_NOTHROW(spec.validate());
    spec.asymmetry[0] = -0.1;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("manifest rejects bad fields and missing files are data errors") {
    TmpDir tmp("manifest");
    {
        std::ofstream out(tmp.file("bad_units.json"));
        out << "{\"fs_hz\": 300.0, \"units\": \"volt\", \"split\": \"train\"}";
    }
    CHECK_THROWS_WITH_AS(load_manifest(tmp.file("bad_units.json")),
                         doctest::Contains("microvolt"), DataError);
    CHECK_THROWS_AS(load_manifest(tmp.file("nonexistent.json")), DataError);
}
