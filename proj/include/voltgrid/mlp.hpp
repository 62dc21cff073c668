#pragma once

#include "voltgrid/rng.hpp"

#include <span>
#include <vector>

namespace voltgrid {

// Fully connected network with tanh hidden layers and a linear output.
// Parameters live in one flat vector (per layer: row-major weights, then
// biases) so optimizers and checkpoints can treat them as a single block.
class Mlp {
public:
    explicit Mlp(std::vector<int> dims); // {input, hidden..., output}

    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }
    const std::vector<int>& dims() const { return dims_; }
    std::size_t param_count() const { return params_.size(); }
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    // Uniform(-s, s) with s = scale / sqrt(fan_in), biases zero.
    void init_random(Rng& rng, double scale);

    void forward(std::span<const double> input, std::span<double> output) const;
    std::vector<double> forward(std::span<const double> input) const;

    // Post-activation values per layer, kept for the backward pass.
    struct Trace {
        std::vector<std::vector<double>> activations; // [0]=input .. [L]=output
        std::span<const double> output() const { return activations.back(); }
    };

    Trace forward_trace(std::span<const double> input) const;

    // Accumulates dL/dparams into `param_grad` (same layout as params())
    // given dL/doutput; writes dL/dinput into `input_grad` unless empty.
    void backward(const Trace& trace, std::span<const double> output_grad,
                  std::span<double> param_grad, std::span<double> input_grad) const;

private:
    std::vector<int> dims_;
    std::vector<double> params_;
    std::vector<std::size_t> layer_offsets_; // start of each layer's block
};

// Momentum SGD over a flat parameter block.
class SgdMomentum {
public:
    SgdMomentum(std::size_t param_count, double learning_rate, double momentum)
        : velocity_(param_count, 0.0), lr_(learning_rate), momentum_(momentum) {}

    void step(std::span<double> params, std::span<const double> grads);

private:
    std::vector<double> velocity_;
    double lr_;
    double momentum_;
};

} // namespace voltgrid
