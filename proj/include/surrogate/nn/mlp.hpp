#pragma once

#include "surrogate/nn/dense_layer.hpp"

#include <cstdint>
#include <vector>

namespace surrogate::nn {

/// Stack of dense layers: tanh on every hidden layer, identity on the last.
template <typename T>
struct BasicMlp {
    std::vector<DenseLayer<T>> layers;
    /// Bumped on every parameter update; activations remember the value they
    /// were computed under so backward() can reject stale ones.
    std::uint64_t revision = 0;

    Index depth() const { return static_cast<Index>(layers.size()); }
    Index width() const { return layers.size() > 1 ? layers.front().out_dim() : 0; }
    Index input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
    Index output_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }

    Index parameter_count() const {
        Index n = 0;
        for (const auto& l : layers) n += l.weights.size() + l.bias.size();
        return n;
    }

    std::vector<TensorRef<T>> parameters() { return layer_tensors(layers); }

    template <typename U>
    BasicMlp<U> cast() const {
        BasicMlp<U> out;
        out.layers.reserve(layers.size());
        for (const auto& l : layers) out.layers.push_back(l.template cast<U>());
        return out;
    }
};

using MlpModel = BasicMlp<double>;

/// Outputs of every layer for one batch, last entry is the network output.
template <typename T>
struct Activations {
    std::vector<MatrixT<T>> outputs;
    std::uint64_t model_revision = 0;

    const MatrixT<T>& output() const { return outputs.back(); }
};

/// Parameter count of a depth x width MLP without building it.
inline Index mlp_parameter_count(Index depth, Index width, Index input_dim, Index output_dim) {
    if (depth < 2) return 0;
    return (input_dim * width + width) + (depth - 2) * (width * width + width) +
           (width * output_dim + output_dim);
}

/// `depth` dense layers: input_dim -> width -> ... -> width -> output_dim.
template <typename T = double>
BasicMlp<T> init_model(int depth, int width, int input_dim, int output_dim, std::uint64_t seed) {
    if (depth < 2) throw ConfigError("init_model: depth must be >= 2, got " + std::to_string(depth));
    if (width < 1 || input_dim < 1 || output_dim < 1) {
        throw ConfigError("init_model: width and dimensions must be >= 1");
    }
    std::mt19937_64 rng(seed);
    BasicMlp<T> model;
    model.layers.reserve(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i) {
        const int in = i == 0 ? input_dim : width;
        const int out = i == depth - 1 ? output_dim : width;
        DenseLayer<T> layer(in, out);
        layer.glorot_init(rng);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

template <typename T>
Activations<T> forward(const BasicMlp<T>& model, const MatrixT<T>& batch) {
    if (model.layers.empty()) throw ConfigError("forward: model has no layers");
    detail::check_batch_cols(batch.cols(), model.input_dim(), "forward");

    Activations<T> acts;
    acts.model_revision = model.revision;
    acts.outputs.reserve(model.layers.size());
    const MatrixT<T>* x = &batch;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        MatrixT<T> z = detail::affine(model.layers[i], *x);
        if (i + 1 < model.layers.size()) z = z.array().tanh();
        acts.outputs.push_back(std::move(z));
        x = &acts.outputs.back();
    }
    return acts;
}

/// Gradients of mse_loss(forward(batch).output(), target) for every parameter.
template <typename T>
Gradients<T> backward(const BasicMlp<T>& model, const Activations<T>& acts,
                      const MatrixT<T>& batch, const MatrixT<T>& target) {
    if (acts.model_revision != model.revision || acts.outputs.size() != model.layers.size()) {
        throw ContractError("backward: activations were not produced by this model state");
    }
    detail::check_batch_cols(batch.cols(), model.input_dim(), "backward");
    for (const auto& a : acts.outputs) {
        if (a.rows() != batch.rows()) {
            throw ContractError("backward: activations were computed on a different batch");
        }
    }

    const std::size_t n = model.layers.size();
    Gradients<T> grads;
    grads.layers.resize(n);

    MatrixT<T> dz = mse_grad(acts.output(), target);
    for (std::size_t i = n; i-- > 0;) {
        const MatrixT<T>& x = i == 0 ? batch : acts.outputs[i - 1];
        detail::accumulate_affine_grad(grads.layers[i], dz, x);
        if (i == 0) break;
        MatrixT<T> da(dz.rows(), model.layers[i].in_dim());
        da.noalias() = dz * model.layers[i].weights;
        // tanh'(z) = 1 - tanh(z)^2
        dz = da.array() * (T(1) - x.array().square());
    }
    return grads;
}

/// Single-sample inference.
template <typename T>
VectorT<T> predict(const BasicMlp<T>& model, std::span<const T> input) {
    detail::check_batch_cols(static_cast<Index>(input.size()), model.input_dim(), "predict");
    MatrixT<T> batch(1, static_cast<Index>(input.size()));
    for (std::size_t j = 0; j < input.size(); ++j) batch(0, static_cast<Index>(j)) = input[j];
    return forward(model, batch).output().row(0).transpose();
}

} // namespace surrogate::nn
