#include "neurostream/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "neurostream/errors.hpp"
#include "neurostream/json_util.hpp"
#include "neurostream/rng.hpp"

namespace neurostream {

namespace {

// Lateral role of each channel for synthesis: left/right scalp channels get
// the asymmetry gain, midline channels the plain carrier, and the mastoid and
// reference channels (A1, A2, Pz) noise only.
enum class Lateral { Left, Right, Midline, NoiseOnly };

Lateral lateral_role(Channel c) {
    switch (c) {
        case Channel::Fp1:
        case Channel::F7:
        case Channel::C3:
        case Channel::P3:
        case Channel::O1:
        case Channel::F3:
        case Channel::T3:
        case Channel::T5: return Lateral::Left;
        case Channel::Fp2:
        case Channel::F8:
        case Channel::C4:
        case Channel::P4:
        case Channel::O2:
        case Channel::F4:
        case Channel::T4:
        case Channel::T6: return Lateral::Right;
        case Channel::Fz:
        case Channel::Cz: return Lateral::Midline;
        case Channel::Pz:
        case Channel::A1:
        case Channel::A2: return Lateral::NoiseOnly;
    }
    return Lateral::NoiseOnly;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_sample(std::string_view tok, std::size_t line_no, std::size_t sample_idx) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw DataError("row " + std::to_string(line_no) + ", sample " +
                        std::to_string(sample_idx) + ": non-numeric value '" + std::string(tok) +
                        "'");
    }
    if (!std::isfinite(v)) {
        throw DataError("row " + std::to_string(line_no) + ", sample " +
                        std::to_string(sample_idx) + ": non-finite value '" + std::string(tok) +
                        "'");
    }
    return v;
}

void append_sample(std::string& out, double v) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
    json j;
    try {
        j = parse_json_file(path.string(), "manifest");
        require_keys(j, {"fs_hz", "units", "split"}, "manifest");
    } catch (const ConfigError& e) {
        throw DataError(e.what());  // a broken manifest is broken data, not usage
    }
    Manifest m;
    m.fs_hz = json_get<double>(j, "fs_hz", 0.0);
    m.units = json_get<std::string>(j, "units", "");
    const std::string split = json_get<std::string>(j, "split", "");
    if (!(m.fs_hz > 0.0)) throw DataError("manifest: fs_hz must be positive");
    if (m.units != "microvolt") throw DataError("manifest: units must be \"microvolt\"");
    const auto s = split_from_name(split);
    if (!s) throw DataError("manifest: split must be train, validation, or test");
    m.split = *s;
    return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
    json j;
    j["fs_hz"] = m.fs_hz;
    j["units"] = m.units;
    j["split"] = std::string(split_name(m.split));
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest " + path.string());
    out << j.dump(2) << "\n";
}

Dataset load_csv(const std::filesystem::path& csv_path,
                 const std::filesystem::path& manifest_path) {
    const Manifest manifest = load_manifest(manifest_path);

    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path.string());

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file " + csv_path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_fields(line);
    if (header.size() < 5 || header[0] != "subject" || header[1] != "trial" ||
        header[2] != "label" || header[3] != "channel") {
        throw DataError("bad header: expected subject,trial,label,channel,s0,...");
    }
    const std::size_t n_samples = header.size() - 4;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (header[4 + i] != "s" + std::to_string(i)) {
            throw DataError("bad header: sample column " + std::to_string(i) +
                            " must be named s" + std::to_string(i));
        }
    }

    struct Group {
        std::string subject, trial, label_str;
        std::optional<Emotion> label;
        std::array<bool, kNumChannels> seen{};
        std::array<std::vector<double>, kNumChannels> channels;
    };
    std::vector<Group> groups;
    std::unordered_map<std::string, std::size_t> group_index;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 4 + n_samples) {
            throw DataError("row " + std::to_string(line_no) + ": expected " +
                            std::to_string(4 + n_samples) + " fields, got " +
                            std::to_string(fields.size()));
        }
        const std::string subject(fields[0]);
        const std::string trial(fields[1]);
        const std::string label_str(fields[2]);
        const std::string chan_str(fields[3]);

        std::optional<Emotion> label;
        if (label_str != "unknown") {
            label = emotion_from_name(label_str);
            if (!label) {
                throw DataError("row " + std::to_string(line_no) + ": unknown label '" +
                                label_str + "'");
            }
        }
        const auto chan = channel_from_name(chan_str);
        if (!chan) {
            throw DataError("row " + std::to_string(line_no) + ": unknown channel '" + chan_str +
                            "'");
        }

        const std::string key = subject + "\x1f" + trial;
        auto [it, inserted] = group_index.try_emplace(key, groups.size());
        if (inserted) {
            groups.push_back(Group{subject, trial, label_str, label, {}, {}});
        }
        Group& g = groups[it->second];
        if (g.label_str != label_str) {
            throw DataError("conflicting labels for " + subject + "," + trial + ": '" +
                            g.label_str + "' vs '" + label_str + "'");
        }
        const std::size_t ci = static_cast<std::size_t>(*chan);
        if (g.seen[ci]) {
            throw DataError("duplicate channel: " + subject + "," + trial + "," + chan_str);
        }
        g.seen[ci] = true;
        auto& w = g.channels[ci];
        w.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            w.push_back(parse_sample(fields[4 + i], line_no, i));
        }
    }

    Dataset ds;
    ds.split = manifest.split;
    ds.recordings.reserve(groups.size());
    for (auto& g : groups) {
        for (std::size_t ci = 0; ci < kNumChannels; ++ci) {
            if (!g.seen[ci]) {
                throw DataError("missing channel: " + g.subject + "," + g.trial + "," +
                                std::string(channel_name(static_cast<Channel>(ci))));
            }
        }
        Recording rec;
        rec.subject_id = std::move(g.subject);
        rec.trial_id = std::move(g.trial);
        rec.label = g.label;
        rec.fs = manifest.fs_hz;
        rec.channels = std::move(g.channels);
        rec.validate();
        ds.recordings.push_back(std::move(rec));
    }
    ds.validate();
    return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& csv_path) {
    if (ds.recordings.empty()) throw DataError("empty dataset");
    const double fs = ds.recordings.front().fs;
    const std::size_t n = ds.recordings.front().n_samples();
    for (const auto& rec : ds.recordings) {
        rec.validate();
        if (rec.fs != fs) throw DataError("inconsistent sampling rate");
        if (rec.n_samples() != n) throw DataError("inconsistent sample count across recordings");
    }

    std::ofstream out(csv_path);
    if (!out) throw DataError("cannot write " + csv_path.string());

    std::string line = "subject,trial,label,channel";
    for (std::size_t i = 0; i < n; ++i) line += ",s" + std::to_string(i);
    out << line << "\n";

    for (const auto& rec : ds.recordings) {
        const std::string label(rec.label ? emotion_name(*rec.label) : "unknown");
        for (Channel c : all_channels()) {
            line.clear();
            line += rec.subject_id;
            line += ',';
            line += rec.trial_id;
            line += ',';
            line += label;
            line += ',';
            line += channel_name(c);
            for (double v : rec.waveform(c)) {
                line += ',';
                append_sample(line, v);
            }
            out << line << "\n";
        }
    }
    if (!out) throw DataError("write failed for " + csv_path.string());
}

void SynthSpec::validate() const {
    if (n_subjects < 1) throw ConfigError("synth spec: n_subjects must be >= 1");
    if (n_reps < 1) throw ConfigError("synth spec: n_reps must be >= 1");
    if (!(fs > 0.0)) throw ConfigError("synth spec: fs must be positive");
    if (!(duration > 0.0)) throw ConfigError("synth spec: duration must be positive");
    if (!(noise_sigma >= 0.0)) throw ConfigError("synth spec: noise_sigma must be >= 0");
    for (std::size_t k = 0; k < kNumEmotions; ++k) {
        if (!(carrier_hz[k] > 1.0 && carrier_hz[k] < 50.0)) {
            throw ConfigError("synth spec: carrier_hz[" + std::to_string(k) +
                              "] must lie in (1, 50) Hz; the band-pass would destroy it");
        }
        if (!(asymmetry[k] >= 0.0)) {
            throw ConfigError("synth spec: asymmetry[" + std::to_string(k) + "] must be >= 0");
        }
    }
}

SynthSpec SynthSpec::from_json_file(const std::filesystem::path& path) {
    const json j = parse_json_file(path.string(), "synth spec");
    require_keys(j,
                 {"n_subjects", "n_reps", "fs", "duration", "carrier_hz", "asymmetry",
                  "noise_sigma", "split"},
                 "synth spec");
    SynthSpec spec;
    spec.n_subjects = json_get<int>(j, "n_subjects", spec.n_subjects);
    spec.n_reps = json_get<int>(j, "n_reps", spec.n_reps);
    spec.fs = json_get<double>(j, "fs", spec.fs);
    spec.duration = json_get<double>(j, "duration", spec.duration);
    spec.noise_sigma = json_get<double>(j, "noise_sigma", spec.noise_sigma);
    if (j.contains("carrier_hz")) {
        const auto v = j.at("carrier_hz").get<std::vector<double>>();
        if (v.size() != kNumEmotions) throw ConfigError("synth spec: carrier_hz needs 6 entries");
        std::copy(v.begin(), v.end(), spec.carrier_hz.begin());
    }
    if (j.contains("asymmetry")) {
        const auto v = j.at("asymmetry").get<std::vector<double>>();
        if (v.size() != kNumEmotions) throw ConfigError("synth spec: asymmetry needs 6 entries");
        std::copy(v.begin(), v.end(), spec.asymmetry.begin());
    }
    if (j.contains("split")) {
        const auto s = split_from_name(json_get<std::string>(j, "split", "train"));
        if (!s) throw ConfigError("synth spec: split must be train, validation, or test");
        spec.split = *s;
    }
    spec.validate();
    return spec;
}

Dataset gen_synthetic(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.fs));
    if (n == 0) throw ConfigError("synth spec: duration too short for one sample");

    Rng rng(mix_seed(seed, 0x53594e54ULL));  // "SYNT"
    Dataset ds;
    ds.split = spec.split;
    ds.recordings.reserve(static_cast<std::size_t>(spec.n_subjects) * kNumEmotions *
                          static_cast<std::size_t>(spec.n_reps));

    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    for (int s = 0; s < spec.n_subjects; ++s) {
        char subj[16];
        std::snprintf(subj, sizeof(subj), "s%02d", s + 1);
        for (std::size_t k = 0; k < kNumEmotions; ++k) {
            const double f = spec.carrier_hz[k];
            const double alpha = spec.asymmetry[k];
            for (int r = 0; r < spec.n_reps; ++r) {
                Recording rec;
                rec.subject_id = subj;
                rec.trial_id = std::string(emotion_name(static_cast<Emotion>(k))) + "_r" +
                               std::to_string(r);
                rec.label = static_cast<Emotion>(k);
                rec.fs = spec.fs;
                for (Channel c : all_channels()) {
                    double gain = 0.0;
                    switch (lateral_role(c)) {
                        case Lateral::Left: gain = 1.0 + alpha; break;
                        case Lateral::Right: gain = 1.0 - alpha; break;
                        case Lateral::Midline: gain = 1.0; break;
                        case Lateral::NoiseOnly: gain = 0.0; break;
                    }
                    auto& w = rec.waveform(c);
                    w.resize(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double t = static_cast<double>(i) / spec.fs;
                        double v = gain * std::sin(kTwoPi * f * t);
                        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.normal();
                        w[i] = v;
                    }
                }
                ds.recordings.push_back(std::move(rec));
            }
        }
    }
    return ds;
}

}  // namespace neurostream
