#include "neurostream/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neurostream/errors.hpp"

namespace neurostream {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

Var make_leaf(std::vector<std::size_t> shape, std::vector<double> value, bool requires_grad) {
    if (shape_size(shape) != value.size()) {
        throw ShapeError("leaf: shape " + shape_str(shape) + " wants " +
                         std::to_string(shape_size(shape)) + " values, got " +
                         std::to_string(value.size()));
    }
    auto t = std::make_shared<TensorData>();
    t->shape = std::move(shape);
    t->value = std::move(value);
    t->requires_grad = requires_grad;
    if (requires_grad) t->grad.assign(t->value.size(), 0.0);
    return t;
}

Var make_scalar(double v, bool requires_grad) { return make_leaf({1}, {v}, requires_grad); }

namespace {

Var make_out(std::vector<std::size_t> shape, std::vector<double> value, bool requires_grad) {
    return make_leaf(std::move(shape), std::move(value), requires_grad);
}

void require_same_shape(const Var& a, const Var& b, const char* op) {
    if (a->shape != b->shape) {
        throw ShapeError(std::string(op) + ": shapes " + shape_str(a->shape) + " and " +
                         shape_str(b->shape) + " differ");
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void Graph::note_relu_preact(double preact) { relu_preacts_.push_back(preact); }

Var Graph::add(const Var& a, const Var& b) {
    require_same_shape(a, b, "add");
    std::vector<double> val(a->size());
    for (std::size_t i = 0; i < val.size(); ++i) val[i] = a->value[i] + b->value[i];
    Var out = make_out(a->shape, std::move(val), a->requires_grad || b->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([a, b, out] {
            if (a->requires_grad)
                for (std::size_t i = 0; i < out->size(); ++i) a->grad[i] += out->grad[i];
            if (b->requires_grad)
                for (std::size_t i = 0; i < out->size(); ++i) b->grad[i] += out->grad[i];
        });
    }
    return out;
}

Var Graph::mul(const Var& a, const Var& b) {
    require_same_shape(a, b, "mul");
    std::vector<double> val(a->size());
    for (std::size_t i = 0; i < val.size(); ++i) val[i] = a->value[i] * b->value[i];
    Var out = make_out(a->shape, std::move(val), a->requires_grad || b->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([a, b, out] {
            if (a->requires_grad)
                for (std::size_t i = 0; i < out->size(); ++i)
                    a->grad[i] += out->grad[i] * b->value[i];
            if (b->requires_grad)
                for (std::size_t i = 0; i < out->size(); ++i)
                    b->grad[i] += out->grad[i] * a->value[i];
        });
    }
    return out;
}

Var Graph::scale(const Var& a, double s) {
    std::vector<double> val(a->size());
    for (std::size_t i = 0; i < val.size(); ++i) val[i] = a->value[i] * s;
    Var out = make_out(a->shape, std::move(val), a->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([a, out, s] {
            for (std::size_t i = 0; i < out->size(); ++i) a->grad[i] += out->grad[i] * s;
        });
    }
    return out;
}

Var Graph::relu(const Var& a) {
    std::vector<double> val(a->size());
    for (std::size_t i = 0; i < val.size(); ++i) {
        note_relu_preact(a->value[i]);
        val[i] = std::max(0.0, a->value[i]);
    }
    Var out = make_out(a->shape, std::move(val), a->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([a, out] {
            for (std::size_t i = 0; i < out->size(); ++i) {
                if (a->value[i] > 0.0) a->grad[i] += out->grad[i];
            }
        });
    }
    return out;
}

Var Graph::concat(const Var& a, const Var& b) {
    if (a->shape.size() != 1 || b->shape.size() != 1) {
        throw ShapeError("concat: expects 1-D inputs, got " + shape_str(a->shape) + " and " +
                         shape_str(b->shape));
    }
    std::vector<double> val;
    val.reserve(a->size() + b->size());
    val.insert(val.end(), a->value.begin(), a->value.end());
    val.insert(val.end(), b->value.begin(), b->value.end());
    Var out = make_out({a->size() + b->size()}, std::move(val),
                       a->requires_grad || b->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([a, b, out] {
            const std::size_t na = a->size();
            if (a->requires_grad)
                for (std::size_t i = 0; i < na; ++i) a->grad[i] += out->grad[i];
            if (b->requires_grad)
                for (std::size_t i = 0; i < b->size(); ++i) b->grad[i] += out->grad[na + i];
        });
    }
    return out;
}

Var Graph::stack_rows(const std::vector<Var>& rows) {
    if (rows.empty()) throw ShapeError("stack_rows: no rows");
    const std::size_t c = rows.front()->size();
    bool needs_grad = false;
    for (const Var& r : rows) {
        if (r->shape.size() != 1 || r->size() != c) {
            throw ShapeError("stack_rows: row shape " + shape_str(r->shape) +
                             " does not match [" + std::to_string(c) + "]");
        }
        needs_grad = needs_grad || r->requires_grad;
    }
    std::vector<double> val;
    val.reserve(rows.size() * c);
    for (const Var& r : rows) val.insert(val.end(), r->value.begin(), r->value.end());
    Var out = make_out({rows.size(), c}, std::move(val), needs_grad);
    if (out->requires_grad) {
        tape_.push_back([rows, out, c] {
            for (std::size_t n = 0; n < rows.size(); ++n) {
                if (!rows[n]->requires_grad) continue;
                for (std::size_t i = 0; i < c; ++i) rows[n]->grad[i] += out->grad[n * c + i];
            }
        });
    }
    return out;
}

Var Graph::conv1d(const Var& x, const Var& kernels, const Var& bias) {
    if (x->shape.size() != 2) throw ShapeError("conv1d: x must be [T, F_in], got " + shape_str(x->shape));
    if (kernels->shape.size() != 3) {
        throw ShapeError("conv1d: kernels must be [K, F_in, F_out], got " +
                         shape_str(kernels->shape));
    }
    const std::size_t t_in = x->shape[0], f_in = x->shape[1];
    const std::size_t k_len = kernels->shape[0], f_out = kernels->shape[2];
    if (kernels->shape[1] != f_in) {
        throw ShapeError("conv1d: kernels expect " + std::to_string(kernels->shape[1]) +
                         " input features, x has " + std::to_string(f_in));
    }
    if (bias->shape != std::vector<std::size_t>{f_out}) {
        throw ShapeError("conv1d: bias must be [" + std::to_string(f_out) + "], got " +
                         shape_str(bias->shape));
    }
    if (k_len < 1 || t_in < k_len) {
        throw ShapeError("conv1d: need T >= K >= 1, got T=" + std::to_string(t_in) +
                         " K=" + std::to_string(k_len));
    }
    const std::size_t t_out = t_in - k_len + 1;
    std::vector<double> val(t_out * f_out);
    for (std::size_t t = 0; t < t_out; ++t) {
        for (std::size_t o = 0; o < f_out; ++o) {
            double acc = bias->value[o];
            for (std::size_t k = 0; k < k_len; ++k) {
                const double* xr = &x->value[(t + k) * f_in];
                const double* kr = &kernels->value[(k * f_in) * f_out + o];
                for (std::size_t i = 0; i < f_in; ++i) acc += xr[i] * kr[i * f_out];
            }
            val[t * f_out + o] = acc;
        }
    }
    const bool needs_grad = x->requires_grad || kernels->requires_grad || bias->requires_grad;
    Var out = make_out({t_out, f_out}, std::move(val), needs_grad);
    if (needs_grad) {
        tape_.push_back([x, kernels, bias, out, t_out, f_out, k_len, f_in] {
            for (std::size_t t = 0; t < t_out; ++t) {
                for (std::size_t o = 0; o < f_out; ++o) {
                    const double go = out->grad[t * f_out + o];
                    if (go == 0.0) continue;
                    if (bias->requires_grad) bias->grad[o] += go;
                    for (std::size_t k = 0; k < k_len; ++k) {
                        for (std::size_t i = 0; i < f_in; ++i) {
                            const std::size_t xi = (t + k) * f_in + i;
                            const std::size_t ki = (k * f_in + i) * f_out + o;
                            if (kernels->requires_grad)
                                kernels->grad[ki] += go * x->value[xi];
                            if (x->requires_grad) x->grad[xi] += go * kernels->value[ki];
                        }
                    }
                }
            }
        });
    }
    return out;
}

Var Graph::maxpool1d(const Var& x, std::size_t pool) {
    if (x->shape.size() != 2) {
        throw ShapeError("maxpool1d: x must be [T, F], got " + shape_str(x->shape));
    }
    const std::size_t t_in = x->shape[0], f = x->shape[1];
    if (pool < 1 || pool > t_in) {
        throw ShapeError("maxpool1d: need 1 <= pool <= T, got pool=" + std::to_string(pool) +
                         " T=" + std::to_string(t_in));
    }
    const std::size_t t_out = t_in / pool;
    std::vector<double> val(t_out * f);
    auto argmax = std::make_shared<std::vector<std::size_t>>(t_out * f);
    for (std::size_t t = 0; t < t_out; ++t) {
        for (std::size_t j = 0; j < f; ++j) {
            std::size_t best = t * pool;
            double bv = x->value[best * f + j];
            for (std::size_t k = 1; k < pool; ++k) {
                const double v = x->value[(t * pool + k) * f + j];
                if (v > bv) {  // strict: first index wins ties
                    bv = v;
                    best = t * pool + k;
                }
            }
            val[t * f + j] = bv;
            (*argmax)[t * f + j] = best;
        }
    }
    Var out = make_out({t_out, f}, std::move(val), x->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([x, out, argmax, t_out, f] {
            for (std::size_t t = 0; t < t_out; ++t) {
                for (std::size_t j = 0; j < f; ++j) {
                    x->grad[(*argmax)[t * f + j] * f + j] += out->grad[t * f + j];
                }
            }
        });
    }
    return out;
}

Var Graph::dropout(const Var& x, double rate, Mode mode, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw ConfigError("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
    }
    if (mode == Mode::Eval || rate == 0.0) return x;
    const double keep_scale = 1.0 / (1.0 - rate);
    auto mask = std::make_shared<std::vector<double>>(x->size());
    std::vector<double> val(x->size());
    for (std::size_t i = 0; i < x->size(); ++i) {
        (*mask)[i] = rng.uniform() < rate ? 0.0 : keep_scale;
        val[i] = x->value[i] * (*mask)[i];
    }
    Var out = make_out(x->shape, std::move(val), x->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([x, out, mask] {
            for (std::size_t i = 0; i < out->size(); ++i) {
                x->grad[i] += out->grad[i] * (*mask)[i];
            }
        });
    }
    return out;
}

Var Graph::lstm(const Var& x, const Var& w, const Var& u, const Var& b) {
    if (x->shape.size() != 2) throw ShapeError("lstm: x must be [T, F], got " + shape_str(x->shape));
    const std::size_t t_len = x->shape[0], f = x->shape[1];
    if (w->shape.size() != 2 || w->shape[0] != f || w->shape[1] % 4 != 0) {
        throw ShapeError("lstm: W must be [F, 4H] with F=" + std::to_string(f) + ", got " +
                         shape_str(w->shape));
    }
    const std::size_t h = w->shape[1] / 4;
    if (u->shape != std::vector<std::size_t>{h, 4 * h}) {
        throw ShapeError("lstm: U must be [" + std::to_string(h) + "," + std::to_string(4 * h) +
                         "], got " + shape_str(u->shape));
    }
    if (b->shape != std::vector<std::size_t>{4 * h}) {
        throw ShapeError("lstm: b must be [" + std::to_string(4 * h) + "], got " +
                         shape_str(b->shape));
    }
    if (t_len < 1) throw ShapeError("lstm: T must be >= 1");

    // Cache of everything BPTT needs. Gate column order: i, f, g, o.
    struct Cache {
        std::vector<std::vector<double>> gi, gf, gg, go, c, tanh_c, h_prev;
    };
    auto cc = std::make_shared<Cache>();
    cc->gi.resize(t_len);
    cc->gf.resize(t_len);
    cc->gg.resize(t_len);
    cc->go.resize(t_len);
    cc->c.resize(t_len);
    cc->tanh_c.resize(t_len);
    cc->h_prev.resize(t_len);

    std::vector<double> h_state(h, 0.0), c_state(h, 0.0), z(4 * h);
    for (std::size_t t = 0; t < t_len; ++t) {
        cc->h_prev[t] = h_state;
        for (std::size_t j = 0; j < 4 * h; ++j) z[j] = b->value[j];
        const double* xr = &x->value[t * f];
        for (std::size_t i = 0; i < f; ++i) {
            const double xv = xr[i];
            if (xv == 0.0) continue;
            const double* wr = &w->value[i * 4 * h];
            for (std::size_t j = 0; j < 4 * h; ++j) z[j] += xv * wr[j];
        }
        for (std::size_t i = 0; i < h; ++i) {
            const double hv = h_state[i];
            if (hv == 0.0) continue;
            const double* ur = &u->value[i * 4 * h];
            for (std::size_t j = 0; j < 4 * h; ++j) z[j] += hv * ur[j];
        }
        auto& gi = cc->gi[t];
        auto& gf = cc->gf[t];
        auto& gg = cc->gg[t];
        auto& go = cc->go[t];
        gi.resize(h);
        gf.resize(h);
        gg.resize(h);
        go.resize(h);
        for (std::size_t j = 0; j < h; ++j) {
            gi[j] = sigmoid(z[j]);
            gf[j] = sigmoid(z[h + j]);
            gg[j] = std::tanh(z[2 * h + j]);
            go[j] = sigmoid(z[3 * h + j]);
            c_state[j] = gf[j] * c_state[j] + gi[j] * gg[j];
        }
        cc->c[t] = c_state;
        auto& th = cc->tanh_c[t];
        th.resize(h);
        for (std::size_t j = 0; j < h; ++j) {
            th[j] = std::tanh(c_state[j]);
            h_state[j] = go[j] * th[j];
        }
    }

    const bool needs_grad =
        x->requires_grad || w->requires_grad || u->requires_grad || b->requires_grad;
    Var out = make_out({h}, std::move(h_state), needs_grad);
    if (needs_grad) {
        tape_.push_back([x, w, u, b, out, cc, t_len, f, h] {
            std::vector<double> dh(out->grad), dc(h, 0.0), dz(4 * h);
            const std::vector<double> zeros(h, 0.0);
            for (std::size_t t = t_len; t-- > 0;) {
                const auto& gi = cc->gi[t];
                const auto& gf = cc->gf[t];
                const auto& gg = cc->gg[t];
                const auto& go = cc->go[t];
                const auto& th = cc->tanh_c[t];
                const std::vector<double>& c_prev = t == 0 ? zeros : cc->c[t - 1];
                for (std::size_t j = 0; j < h; ++j) {
                    const double dcj = dc[j] + dh[j] * go[j] * (1.0 - th[j] * th[j]);
                    const double d_go = dh[j] * th[j];
                    const double d_gi = dcj * gg[j];
                    const double d_gf = dcj * c_prev[j];
                    const double d_gg = dcj * gi[j];
                    dz[j] = d_gi * gi[j] * (1.0 - gi[j]);
                    dz[h + j] = d_gf * gf[j] * (1.0 - gf[j]);
                    dz[2 * h + j] = d_gg * (1.0 - gg[j] * gg[j]);
                    dz[3 * h + j] = d_go * go[j] * (1.0 - go[j]);
                    dc[j] = dcj * gf[j];
                }
                if (b->requires_grad) {
                    for (std::size_t j = 0; j < 4 * h; ++j) b->grad[j] += dz[j];
                }
                const double* xr = &x->value[t * f];
                if (w->requires_grad) {
                    for (std::size_t i = 0; i < f; ++i) {
                        const double xv = xr[i];
                        if (xv == 0.0) continue;
                        double* wg = &w->grad[i * 4 * h];
                        for (std::size_t j = 0; j < 4 * h; ++j) wg[j] += xv * dz[j];
                    }
                }
                if (u->requires_grad) {
                    for (std::size_t i = 0; i < h; ++i) {
                        const double hv = cc->h_prev[t][i];
                        if (hv == 0.0) continue;
                        double* ug = &u->grad[i * 4 * h];
                        for (std::size_t j = 0; j < 4 * h; ++j) ug[j] += hv * dz[j];
                    }
                }
                if (x->requires_grad) {
                    double* xg = &x->grad[t * f];
                    for (std::size_t i = 0; i < f; ++i) {
                        const double* wr = &w->value[i * 4 * h];
                        double acc = 0.0;
                        for (std::size_t j = 0; j < 4 * h; ++j) acc += wr[j] * dz[j];
                        xg[i] += acc;
                    }
                }
                // dh for the previous step: dz . U^T
                std::vector<double> dh_prev(h, 0.0);
                for (std::size_t i = 0; i < h; ++i) {
                    const double* ur = &u->value[i * 4 * h];
                    double acc = 0.0;
                    for (std::size_t j = 0; j < 4 * h; ++j) acc += ur[j] * dz[j];
                    dh_prev[i] = acc;
                }
                dh = std::move(dh_prev);
            }
        });
    }
    return out;
}

Var Graph::dense(const Var& x, const Var& w, const Var& b, Activation act) {
    if (x->shape.size() != 1) throw ShapeError("dense: x must be [F], got " + shape_str(x->shape));
    const std::size_t f = x->shape[0];
    if (w->shape.size() != 2 || w->shape[0] != f) {
        throw ShapeError("dense: W must be [" + std::to_string(f) + ", G], got " +
                         shape_str(w->shape));
    }
    const std::size_t g = w->shape[1];
    if (b->shape != std::vector<std::size_t>{g}) {
        throw ShapeError("dense: b must be [" + std::to_string(g) + "], got " +
                         shape_str(b->shape));
    }
    auto pre = std::make_shared<std::vector<double>>(g);
    for (std::size_t j = 0; j < g; ++j) (*pre)[j] = b->value[j];
    for (std::size_t i = 0; i < f; ++i) {
        const double xv = x->value[i];
        if (xv == 0.0) continue;
        const double* wr = &w->value[i * g];
        for (std::size_t j = 0; j < g; ++j) (*pre)[j] += xv * wr[j];
    }
    std::vector<double> val(g);
    for (std::size_t j = 0; j < g; ++j) {
        if (act == Activation::Relu) {
            note_relu_preact((*pre)[j]);
            val[j] = std::max(0.0, (*pre)[j]);
        } else {
            val[j] = (*pre)[j];
        }
    }
    const bool needs_grad = x->requires_grad || w->requires_grad || b->requires_grad;
    Var out = make_out({g}, std::move(val), needs_grad);
    if (needs_grad) {
        tape_.push_back([x, w, b, out, pre, act, f, g] {
            std::vector<double> dz(g);
            for (std::size_t j = 0; j < g; ++j) {
                dz[j] = act == Activation::Relu && (*pre)[j] <= 0.0 ? 0.0 : out->grad[j];
            }
            if (b->requires_grad) {
                for (std::size_t j = 0; j < g; ++j) b->grad[j] += dz[j];
            }
            for (std::size_t i = 0; i < f; ++i) {
                const double xv = x->value[i];
                if (w->requires_grad && xv != 0.0) {
                    double* wg = &w->grad[i * g];
                    for (std::size_t j = 0; j < g; ++j) wg[j] += xv * dz[j];
                }
                if (x->requires_grad) {
                    const double* wr = &w->value[i * g];
                    double acc = 0.0;
                    for (std::size_t j = 0; j < g; ++j) acc += wr[j] * dz[j];
                    x->grad[i] += acc;
                }
            }
        });
    }
    return out;
}

namespace {

// Stable row softmax into `probs`; returns the row's log-sum-exp.
double softmax_row(const double* logits, std::size_t c, double* probs) {
    double mx = logits[0];
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, logits[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(logits[j] - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t j = 0; j < c; ++j) probs[j] = std::exp(logits[j] - lse);
    return lse;
}

}  // namespace

Var Graph::softmax(const Var& logits) {
    const std::size_t dims = logits->shape.size();
    if (dims != 1 && dims != 2) {
        throw ShapeError("softmax: expects [C] or [N, C], got " + shape_str(logits->shape));
    }
    const std::size_t c = logits->shape[dims - 1];
    const std::size_t n = dims == 1 ? 1 : logits->shape[0];
    if (c < 1) throw ShapeError("softmax: empty rows");
    std::vector<double> val(n * c);
    for (std::size_t r = 0; r < n; ++r) softmax_row(&logits->value[r * c], c, &val[r * c]);
    Var out = make_out(logits->shape, std::move(val), logits->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([logits, out, n, c] {
            for (std::size_t r = 0; r < n; ++r) {
                const double* p = &out->value[r * c];
                const double* gp = &out->grad[r * c];
                double dot = 0.0;
                for (std::size_t j = 0; j < c; ++j) dot += gp[j] * p[j];
                for (std::size_t j = 0; j < c; ++j)
                    logits->grad[r * c + j] += p[j] * (gp[j] - dot);
            }
        });
    }
    return out;
}

Var Graph::softmax_xent(const Var& logits, const Var& targets) {
    if (logits->shape.size() != 2) {
        throw ShapeError("softmax_xent: logits must be [N, C], got " + shape_str(logits->shape));
    }
    require_same_shape(logits, targets, "softmax_xent");
    const std::size_t n = logits->shape[0], c = logits->shape[1];
    auto target_idx = std::make_shared<std::vector<std::size_t>>(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t ones = 0, idx = 0;
        for (std::size_t j = 0; j < c; ++j) {
            const double y = targets->value[r * c + j];
            if (y == 1.0) {
                ones++;
                idx = j;
            } else if (y != 0.0) {
                throw DataError("softmax_xent: target row " + std::to_string(r) +
                                " is not one-hot");
            }
        }
        if (ones != 1) {
            throw DataError("softmax_xent: target row " + std::to_string(r) + " is not one-hot");
        }
        (*target_idx)[r] = idx;
    }
    auto probs = std::make_shared<std::vector<double>>(n * c);
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double lse = softmax_row(&logits->value[r * c], c, &(*probs)[r * c]);
        loss += lse - logits->value[r * c + (*target_idx)[r]];
    }
    loss /= static_cast<double>(n);
    Var out = make_out({1}, {loss}, logits->requires_grad);
    if (out->requires_grad) {
        tape_.push_back([logits, out, probs, target_idx, n, c] {
            const double go = out->grad[0] / static_cast<double>(n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < c; ++j) {
                    const double y = j == (*target_idx)[r] ? 1.0 : 0.0;
                    logits->grad[r * c + j] += go * ((*probs)[r * c + j] - y);
                }
            }
        });
    }
    return out;
}

Var Graph::l2_penalty(const std::vector<Var>& weights, double lambda) {
    if (!(lambda >= 0.0)) throw ConfigError("l2_penalty: lambda must be >= 0");
    double total = 0.0;
    bool needs_grad = false;
    for (const Var& w : weights) {
        for (double v : w->value) total += v * v;
        needs_grad = needs_grad || w->requires_grad;
    }
    Var out = make_out({1}, {lambda * total}, needs_grad);
    if (needs_grad) {
        tape_.push_back([weights, out, lambda] {
            const double go = out->grad[0];
            for (const Var& w : weights) {
                if (!w->requires_grad) continue;
                for (std::size_t i = 0; i < w->size(); ++i) {
                    w->grad[i] += go * 2.0 * lambda * w->value[i];
                }
            }
        });
    }
    return out;
}

void Graph::backward(const Var& loss) {
    if (loss->size() != 1) {
        throw ShapeError("backward: loss must be scalar, got " + shape_str(loss->shape));
    }
    if (!loss->requires_grad) {
        throw ConfigError("backward: loss does not depend on any differentiable input");
    }
    std::fill(loss->grad.begin(), loss->grad.end(), 0.0);
    loss->grad[0] = 1.0;
    for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) (*it)();
}

void zero_grads(std::vector<NamedParam>& params) {
    for (auto& p : params) std::fill(p.var->grad.begin(), p.var->grad.end(), 0.0);
}

void adam_step(std::vector<NamedParam>& params, AdamState& state) {
    if (state.m.size() != params.size()) {
        state.m.assign(params.size(), {});
        state.v.assign(params.size(), {});
        for (std::size_t i = 0; i < params.size(); ++i) {
            state.m[i].assign(params[i].var->size(), 0.0);
            state.v[i].assign(params[i].var->size(), 0.0);
        }
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = *params[i].var;
        if (state.m[i].size() != p.size()) {
            throw ShapeError("adam_step: state shape mismatch for " + params[i].name);
        }
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double g = p.grad[j];
            if (!std::isfinite(g)) {
                throw NumericError("adam_step: non-finite gradient in parameter " +
                                   params[i].name);
            }
            state.m[i][j] = state.beta1 * state.m[i][j] + (1.0 - state.beta1) * g;
            state.v[i][j] = state.beta2 * state.v[i][j] + (1.0 - state.beta2) * g * g;
            const double mh = state.m[i][j] / bc1;
            const double vh = state.v[i][j] / bc2;
            p.value[j] -= state.lr * mh / (std::sqrt(vh) + state.eps);
        }
    }
}

namespace {

// A coordinate's central difference is invalid when its perturbation moves a
// relu input near or across the kink. Relu inputs the coordinate never
// touches are identical in all three evaluations and cancel from the loss
// difference, so only the values that vary between them are examined.
bool kink_interference(const std::vector<double>& center, const std::vector<double>& plus,
                       const std::vector<double>& minus, double h) {
    if (center.size() != plus.size() || center.size() != minus.size()) return true;
    for (std::size_t i = 0; i < center.size(); ++i) {
        if (center[i] == plus[i] && center[i] == minus[i]) continue;
        const double margin =
            std::min({std::abs(center[i]), std::abs(plus[i]), std::abs(minus[i])});
        if (margin < 10.0 * h) return true;
    }
    return false;
}

}  // namespace

GradCheckResult grad_check(const std::function<Var(Graph&)>& f, const std::vector<Var>& params,
                           double h) {
    for (const Var& p : params) {
        if (!p->requires_grad) throw ConfigError("grad_check: parameter without requires_grad");
        std::fill(p->grad.begin(), p->grad.end(), 0.0);
    }
    Graph center;
    Var loss = f(center);
    center.backward(loss);

    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const Var& p : params) analytic.push_back(p->grad);

    GradCheckResult res;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Var p = params[pi];
        for (std::size_t j = 0; j < p->size(); ++j) {
            const double saved = p->value[j];

            p->value[j] = saved + h;
            Graph gp;
            const double f_plus = f(gp)->value[0];
            p->value[j] = saved - h;
            Graph gm;
            const double f_minus = f(gm)->value[0];
            p->value[j] = saved;

            if (kink_interference(center.relu_preacts(), gp.relu_preacts(), gm.relu_preacts(),
                                  h)) {
                res.n_skipped++;
                continue;
            }
            const double numeric = (f_plus - f_minus) / (2.0 * h);
            const double a = analytic[pi][j];
            const double rel =
                std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
            res.max_rel_err = std::max(res.max_rel_err, rel);
            res.n_checked++;
        }
    }
    return res;
}

}  // namespace neurostream
