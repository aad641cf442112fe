#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "neurostream/rng.hpp"

namespace neurostream {

// Row-major 64-bit float tensor. grad has the same length as value whenever
// requires_grad is set and accumulates additively across backward passes.
struct TensorData {
    std::vector<std::size_t> shape;
    std::vector<double> value;
    std::vector<double> grad;
    bool requires_grad = false;

    std::size_t size() const { return value.size(); }
};

using Var = std::shared_ptr<TensorData>;

std::size_t shape_size(const std::vector<std::size_t>& shape);
std::string shape_str(const std::vector<std::size_t>& shape);

// Leaves can be created outside any Graph and reused across graphs; that is
// how persistent parameters work.
Var make_leaf(std::vector<std::size_t> shape, std::vector<double> value,
              bool requires_grad = false);
Var make_scalar(double v, bool requires_grad = false);

enum class Mode { Train, Eval };
enum class Activation { None, Relu };

// Records one backward closure per op, replayed in reverse by backward().
// Forward values are computed eagerly; the tape only writes gradients.
class Graph {
  public:
    Var add(const Var& a, const Var& b);
    Var mul(const Var& a, const Var& b);
    Var scale(const Var& a, double s);
    Var relu(const Var& a);
    Var concat(const Var& a, const Var& b);                // 1-D
    Var stack_rows(const std::vector<Var>& rows);          // N x [C] -> [N, C]

    // out[t,o] = sum_{k,i} x[t+k,i] * kernels[k,i,o] + bias[o]
    Var conv1d(const Var& x, const Var& kernels, const Var& bias);
    // Window maxima over the time axis; remainder frames dropped; gradient
    // goes to the first argmax of each window.
    Var maxpool1d(const Var& x, std::size_t pool);
    // Inverted dropout; identity in eval mode or at rate 0.
    Var dropout(const Var& x, double rate, Mode mode, Rng& rng);
    // x: [T, F]; W: [F, 4H]; U: [H, 4H]; b: [4H], gate column order i,f,g,o.
    // h0 = c0 = 0; returns the final hidden state h_T of shape [H].
    Var lstm(const Var& x, const Var& W, const Var& U, const Var& b);
    // x: [F]; W: [F, G]; b: [G]; out = act(xW + b)
    Var dense(const Var& x, const Var& W, const Var& b, Activation act);
    // Row-wise stable softmax of [N, C] (or a single [C] vector).
    Var softmax(const Var& logits);
    // Mean cross-entropy of softmax(logits) against one-hot targets, both
    // [N, C], in the log-sum-exp form. Targets carry no gradient.
    Var softmax_xent(const Var& logits, const Var& targets);
    // lambda * sum of squared entries over the given tensors.
    Var l2_penalty(const std::vector<Var>& weights, double lambda);

    // Seeds d(loss)/d(loss) = 1 and replays the tape in reverse, accumulating
    // into every reachable grad buffer. loss must be scalar.
    void backward(const Var& loss);

    // Pre-activation values every relu saw while building this graph, in op
    // order. grad_check compares them across its perturbed evaluations so the
    // kink rule can tell which relus a coordinate actually moves.
    const std::vector<double>& relu_preacts() const { return relu_preacts_; }

  private:
    void note_relu_preact(double preact);

    std::vector<std::function<void()>> tape_;
    std::vector<double> relu_preacts_;
};

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long t = 0;
    std::vector<std::vector<double>> m;  // one buffer per parameter, lazily sized
    std::vector<std::vector<double>> v;
};

struct NamedParam {
    std::string name;
    Var var;  // persistent leaf, requires_grad = true
};

void zero_grads(std::vector<NamedParam>& params);
// One Adam update over all parameters from their accumulated grads.
// Non-finite gradients raise a numeric error naming the parameter.
void adam_step(std::vector<NamedParam>& params, AdamState& state);

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::size_t n_checked = 0;
    std::size_t n_skipped = 0;  // coordinates excluded by the relu kink rule
};

// Central-difference check of d f / d params. f must rebuild the scalar loss
// from the current parameter values on every call. Coordinates where any of
// the three evaluations puts a relu pre-activation within 10h of its kink are
// skipped. Relative error: |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const std::function<Var(Graph&)>& f,
                           const std::vector<Var>& params, double h = 1e-6);

}  // namespace neurostream
