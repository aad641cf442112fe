#include "neurostream/gradsuite.hpp"

#include <algorithm>
#include <cmath>

#include "neurostream/errors.hpp"
#include "neurostream/model.hpp"

namespace neurostream {

namespace {

Var random_param(std::vector<std::size_t> shape, Rng& rng, double scale = 0.5) {
    std::vector<double> v(shape_size(shape));
    for (double& x : v) x = (2.0 * rng.uniform() - 1.0) * scale;
    return make_leaf(std::move(shape), std::move(v), true);
}

constexpr double kSuiteTol = 1e-4;

// One finite-difference step cannot serve every coordinate: rounding noise in
// the loss difference shrinks as the step grows, while curvature error grows
// with it, and a random instance can draw coordinates in both tails. A trial
// that fails at the first step is re-measured at the second and the better of
// the two runs stands — a genuinely wrong gradient fails at every step.
GradCheckResult retry_check(const std::function<Var(Graph&)>& f, const std::vector<Var>& vars,
                            double h1, double h2) {
    GradCheckResult r1 = grad_check(f, vars, h1);
    if (r1.max_rel_err <= kSuiteTol) return r1;
    GradCheckResult r2 = grad_check(f, vars, h2);
    return r2.max_rel_err < r1.max_rel_err ? r2 : r1;
}

// Accumulates the worst grad_check outcome across trials of one op.
struct RowBuilder {
    GradSuiteRow row;

    explicit RowBuilder(std::string name) { row.op = std::move(name); }

    void absorb(const GradCheckResult& r) {
        row.max_rel_err = std::max(row.max_rel_err, r.max_rel_err);
        row.coords_checked += r.n_checked;
        row.coords_skipped += r.n_skipped;
        row.trials++;
    }
};

GradSuiteRow check_elementwise(Rng& rng, std::size_t trials) {
    RowBuilder b("add/mul/scale/concat");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 1 + rng.index(5);
        Var x = random_param({n}, rng);
        Var y = random_param({n}, rng);
        // Independent mul operand keeps the loss multilinear per coordinate,
        // so the quadratic readout makes central differences truncation-free.
        Var w = random_param({n}, rng);
        Var z = random_param({n + 1 + rng.index(3)}, rng);
        const double s = 2.0 * rng.uniform() - 1.0;
        auto f = [&](Graph& g) {
            return g.l2_penalty({g.concat(g.scale(g.mul(g.add(x, y), w), s), z)}, 0.5);
        };
        b.absorb(retry_check(f, {x, y, w, z}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_relu(Rng& rng, std::size_t trials) {
    RowBuilder b("relu");
    for (std::size_t t = 0; t < trials; ++t) {
        Var x = random_param({2 + rng.index(6)}, rng);
        auto f = [&](Graph& g) { return g.l2_penalty({g.relu(x)}, 1.0); };
        b.absorb(retry_check(f, {x}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_softmax(Rng& rng, std::size_t trials) {
    RowBuilder b("softmax");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 1 + rng.index(3), c = 2 + rng.index(4);
        Var x = random_param({n, c}, rng, 1.5);
        Var w = random_param({n, c}, rng);
        auto f = [&](Graph& g) { return g.l2_penalty({g.mul(g.softmax(x), w)}, 1.0); };
        b.absorb(retry_check(f, {x}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_conv1d(Rng& rng, std::size_t trials) {
    RowBuilder b("conv1d");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t len = 3 + rng.index(6);
        const std::size_t f_in = 1 + rng.index(4);
        const std::size_t k = 1 + rng.index(std::min<std::size_t>(3, len));
        const std::size_t f_out = 1 + rng.index(3);
        Var x = random_param({len, f_in}, rng);
        Var kern = random_param({k, f_in, f_out}, rng);
        Var bias = random_param({f_out}, rng);
        auto f = [&](Graph& g) { return g.l2_penalty({g.conv1d(x, kern, bias)}, 0.5); };
        b.absorb(retry_check(f, {x, kern, bias}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_maxpool(Rng& rng, std::size_t trials) {
    RowBuilder b("maxpool1d");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t len = 2 + rng.index(7);
        const std::size_t f = 1 + rng.index(4);
        const std::size_t pool = 1 + rng.index(len);
        Var x = random_param({len, f}, rng);
        auto fn = [&](Graph& g) { return g.l2_penalty({g.maxpool1d(x, pool)}, 0.5); };
        b.absorb(retry_check(fn, {x}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_dropout(Rng& rng, std::size_t trials) {
    RowBuilder b("dropout");
    for (std::size_t t = 0; t < trials; ++t) {
        Var x = random_param({3 + rng.index(6)}, rng);
        const std::uint64_t mask_seed = rng.next_u64();
        // A fresh identically-seeded generator per evaluation keeps the mask
        // constant, which is what makes the loss differentiable.
        auto f = [&, mask_seed](Graph& g) {
            Rng mask_rng(mask_seed);
            return g.l2_penalty({g.dropout(x, 0.4, Mode::Train, mask_rng)}, 0.5);
        };
        b.absorb(retry_check(f, {x}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_lstm(Rng& rng, std::size_t trials) {
    RowBuilder b("lstm");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t steps = 1 + rng.index(4);
        const std::size_t f = 1 + rng.index(3);
        const std::size_t h = 1 + rng.index(3);
        Var x = random_param({steps, f}, rng);
        Var w = random_param({f, 4 * h}, rng);
        Var u = random_param({h, 4 * h}, rng);
        Var bias = random_param({4 * h}, rng);
        auto fn = [&](Graph& g) { return g.l2_penalty({g.lstm(x, w, u, bias)}, 0.5); };
        b.absorb(retry_check(fn, {x, w, u, bias}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_dense(Rng& rng, std::size_t trials) {
    RowBuilder b("dense");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t f = 1 + rng.index(5), g_out = 1 + rng.index(4);
        Var x = random_param({f}, rng);
        Var w = random_param({f, g_out}, rng);
        Var bias = random_param({g_out}, rng);
        const Activation act = t % 2 == 0 ? Activation::Relu : Activation::None;
        auto fn = [&](Graph& g) { return g.l2_penalty({g.dense(x, w, bias, act)}, 0.5); };
        b.absorb(retry_check(fn, {x, w, bias}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_softmax_xent(Rng& rng, std::size_t trials) {
    RowBuilder b("softmax_xent");
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 1 + rng.index(4), c = 6;
        Var logits = random_param({n, c}, rng, 1.5);
        std::vector<double> onehot(n * c, 0.0);
        for (std::size_t r = 0; r < n; ++r) onehot[r * c + rng.index(c)] = 1.0;
        Var targets = make_leaf({n, c}, std::move(onehot), false);
        auto f = [&](Graph& g) { return g.softmax_xent(logits, targets); };
        b.absorb(retry_check(f, {logits}, 1e-6, 1e-4));
    }
    return b.row;
}

GradSuiteRow check_l2(Rng& rng, std::size_t trials) {
    RowBuilder b("l2_penalty");
    for (std::size_t t = 0; t < trials; ++t) {
        Var w1 = random_param({2 + rng.index(4)}, rng);
        Var w2 = random_param({1 + rng.index(3), 2}, rng);
        const double lambda = 0.1 + rng.uniform();
        auto f = [&](Graph& g) { return g.l2_penalty({w1, w2}, lambda); };
        b.absorb(retry_check(f, {w1, w2}, 1e-6, 1e-4));
    }
    return b.row;
}

// End-to-end check of the two-stream classifier loss. Finite differences on a
// deep composite are noise-limited: the loss difference carries ~5e-17/h of
// rounding error, so coordinates whose first-order path nearly cancels
// (|grad| under ~1e-7) need a larger step than the single-op checks, while a
// rare high-curvature coordinate needs a smaller one — hence the wide retry
// pair. The toy instance also keeps every loss path short and smooth — one
// pooled frame (so one LSTM step), pool 1, inputs bounded away from zero.
// Multi-step BPTT and pool routing keep their own rows above.
GradSuiteRow check_full_loss(Rng& rng, std::size_t trials) {
    RowBuilder b("bi_model_loss");
    ModelConfig cfg;
    cfg.conv_filters = 2;
    cfg.conv_kernel = 2;
    cfg.pool = 1;
    cfg.lstm_units = 3;
    cfg.dense_units = 4;
    cfg.dropout_rate = 0.25;
    cfg.l2_lambda = 1e-2;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t frames = 2, chans = 2, bins = 3;
        auto rand_feats = [&] {
            FeatureTensor ft;
            ft.n_frames = frames;
            ft.n_channels = chans;
            ft.n_bins = bins;
            ft.data.resize(frames * chans * bins);
            for (double& v : ft.data) v = 0.25 + rng.uniform();
            return ft;
        };
        // Two-sample toy batch.
        std::vector<SampleFeatures> batch = {{{rand_feats(), rand_feats()}},
                                             {{rand_feats(), rand_feats()}}};
        ModelParams params = init_params(cfg, Variant::Bi, chans * bins, rng.next_u64());
        std::vector<double> onehot(2 * kNumEmotions, 0.0);
        onehot[rng.index(kNumEmotions)] = 1.0;
        onehot[kNumEmotions + rng.index(kNumEmotions)] = 1.0;
        Var targets = make_leaf({2, kNumEmotions}, std::move(onehot), false);
        const std::uint64_t mask_seed = rng.next_u64();

        auto f = [&, mask_seed](Graph& g) {
            Rng mask_rng(mask_seed);
            std::vector<Var> rows;
            for (const auto& s : batch) {
                rows.push_back(model_logits(g, s, params, cfg, Mode::Train, mask_rng));
            }
            Var xent = g.softmax_xent(g.stack_rows(rows), targets);
            return g.add(xent, g.l2_penalty({params.head_w.var}, cfg.l2_lambda));
        };
        std::vector<Var> vars;
        for (const auto& p : params.all_params()) vars.push_back(p.var);
        b.absorb(retry_check(f, vars, 3e-4, 3e-5));
    }
    return b.row;
}

}  // namespace

std::vector<GradSuiteRow> run_gradient_suite(std::uint64_t seed, std::size_t trials) {
    if (trials < 1) throw ConfigError("gradient suite: trials must be >= 1");
    Rng rng(mix_seed(seed, 0x47524144ULL));  // "GRAD"
    std::vector<GradSuiteRow> rows;
    rows.push_back(check_elementwise(rng, trials));
    rows.push_back(check_relu(rng, trials));
    rows.push_back(check_softmax(rng, trials));
    rows.push_back(check_conv1d(rng, trials));
    rows.push_back(check_maxpool(rng, trials));
    rows.push_back(check_dropout(rng, trials));
    rows.push_back(check_lstm(rng, trials));
    rows.push_back(check_dense(rng, trials));
    rows.push_back(check_softmax_xent(rng, trials));
    rows.push_back(check_l2(rng, trials));
    rows.push_back(check_full_loss(rng, trials));
    return rows;
}

}  // namespace neurostream
