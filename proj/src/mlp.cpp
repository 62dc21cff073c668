#include "voltgrid/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace voltgrid {

Mlp::Mlp(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("Mlp needs at least input and output dims");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        if (dims_[l] < 1 || dims_[l + 1] < 1) throw std::invalid_argument("Mlp layer dims must be positive");
        layer_offsets_.push_back(total);
        total += static_cast<std::size_t>(dims_[l]) * static_cast<std::size_t>(dims_[l + 1]) +
                 static_cast<std::size_t>(dims_[l + 1]);
    }
    params_.assign(total, 0.0);
}

void Mlp::init_random(Rng& rng, double scale) {
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const auto in = static_cast<std::size_t>(dims_[l]);
        const auto out = static_cast<std::size_t>(dims_[l + 1]);
        const double s = scale / std::sqrt(static_cast<double>(in));
        double* w = params_.data() + layer_offsets_[l];
        for (std::size_t k = 0; k < in * out; ++k) w[k] = rng.uniform(-s, s);
        double* b = w + in * out;
        for (std::size_t k = 0; k < out; ++k) b[k] = 0.0;
    }
}

void Mlp::forward(std::span<const double> input, std::span<double> output) const {
    auto trace = forward_trace(input);
    const auto& y = trace.activations.back();
    for (std::size_t i = 0; i < y.size(); ++i) output[i] = y[i];
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    return forward_trace(input).activations.back();
}

Mlp::Trace Mlp::forward_trace(std::span<const double> input) const {
    if (input.size() != static_cast<std::size_t>(dims_.front()))
        throw std::invalid_argument("Mlp input dimension mismatch");
    Trace trace;
    trace.activations.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const auto in = static_cast<std::size_t>(dims_[l]);
        const auto out = static_cast<std::size_t>(dims_[l + 1]);
        const double* w = params_.data() + layer_offsets_[l];
        const double* b = w + in * out;
        const auto& a = trace.activations.back();
        std::vector<double> z(out);
        const bool last = (l + 2 == dims_.size());
        for (std::size_t r = 0; r < out; ++r) {
            double acc = b[r];
            const double* wr = w + r * in;
            for (std::size_t c = 0; c < in; ++c) acc += wr[c] * a[c];
            z[r] = last ? acc : std::tanh(acc);
        }
        trace.activations.push_back(std::move(z));
    }
    return trace;
}

void Mlp::backward(const Trace& trace, std::span<const double> output_grad,
                   std::span<double> param_grad, std::span<double> input_grad) const {
    if (param_grad.size() != params_.size())
        throw std::invalid_argument("Mlp param_grad size mismatch");
    if (output_grad.size() != static_cast<std::size_t>(dims_.back()))
        throw std::invalid_argument("Mlp output_grad size mismatch");

    std::vector<double> delta(output_grad.begin(), output_grad.end());
    for (std::size_t l = dims_.size() - 1; l-- > 0;) {
        const auto in = static_cast<std::size_t>(dims_[l]);
        const auto out = static_cast<std::size_t>(dims_[l + 1]);
        const double* w = params_.data() + layer_offsets_[l];
        double* gw = param_grad.data() + layer_offsets_[l];
        double* gb = gw + in * out;
        const auto& a = trace.activations[l];

        for (std::size_t r = 0; r < out; ++r) {
            gb[r] += delta[r];
            double* gwr = gw + r * in;
            for (std::size_t c = 0; c < in; ++c) gwr[c] += delta[r] * a[c];
        }

        if (l == 0 && input_grad.empty()) break;
        std::vector<double> prev(in, 0.0);
        for (std::size_t r = 0; r < out; ++r) {
            const double* wr = w + r * in;
            for (std::size_t c = 0; c < in; ++c) prev[c] += wr[c] * delta[r];
        }
        if (l == 0) {
            for (std::size_t c = 0; c < in; ++c) input_grad[c] = prev[c];
            break;
        }
        // chain through tanh: a' = 1 - a^2 on the post-activation values
        for (std::size_t c = 0; c < in; ++c) prev[c] *= 1.0 - a[c] * a[c];
        delta = std::move(prev);
    }
}

void SgdMomentum::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != velocity_.size() || grads.size() != velocity_.size())
        throw std::invalid_argument("optimizer size mismatch");
    for (std::size_t i = 0; i < velocity_.size(); ++i) {
        velocity_[i] = momentum_ * velocity_[i] + grads[i];
        params[i] -= lr_ * velocity_[i];
    }
}

} // namespace voltgrid
