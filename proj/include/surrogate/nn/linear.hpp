#pragma once

#include "surrogate/nn/dense_layer.hpp"

#include <cstdint>

namespace surrogate::nn {

/// Baseline: one affine map from the normalized inputs to the targets.
template <typename T>
struct BasicLinear {
    DenseLayer<T> affine;
    std::uint64_t revision = 0;

    Index input_dim() const { return affine.in_dim(); }
    Index output_dim() const { return affine.out_dim(); }
    Index parameter_count() const { return affine.weights.size() + affine.bias.size(); }

    std::vector<TensorRef<T>> parameters() {
        return {{"linear.weights",
                 {affine.weights.data(), static_cast<std::size_t>(affine.weights.size())}},
                {"linear.bias", {affine.bias.data(), static_cast<std::size_t>(affine.bias.size())}}};
    }

    template <typename U>
    BasicLinear<U> cast() const {
        BasicLinear<U> out;
        out.affine = affine.template cast<U>();
        return out;
    }
};

using LinearModel = BasicLinear<double>;

/// Same initialization scheme as the MLP layers.
template <typename T = double>
BasicLinear<T> init_linear(int input_dim, int output_dim, std::uint64_t seed) {
    if (input_dim < 1 || output_dim < 1) {
        throw ConfigError("init_linear: dimensions must be >= 1");
    }
    std::mt19937_64 rng(seed);
    BasicLinear<T> model;
    model.affine = DenseLayer<T>(input_dim, output_dim);
    model.affine.glorot_init(rng);
    return model;
}

template <typename T>
MatrixT<T> linear_forward(const BasicLinear<T>& model, const MatrixT<T>& batch) {
    detail::check_batch_cols(batch.cols(), model.input_dim(), "linear_forward");
    return detail::affine(model.affine, batch);
}

/// Gradients of mse_loss(pred, target) where pred = linear_forward(model, batch).
template <typename T>
Gradients<T> linear_backward(const BasicLinear<T>& model, const MatrixT<T>& batch,
                             const MatrixT<T>& pred, const MatrixT<T>& target) {
    detail::check_batch_cols(batch.cols(), model.input_dim(), "linear_backward");
    if (pred.rows() != batch.rows() || pred.cols() != model.output_dim()) {
        throw ShapeError("linear_backward: prediction does not match batch and model");
    }
    Gradients<T> grads;
    grads.layers.resize(1);
    detail::accumulate_affine_grad(grads.layers[0], mse_grad(pred, target), batch);
    return grads;
}

template <typename T>
VectorT<T> predict(const BasicLinear<T>& model, std::span<const T> input) {
    detail::check_batch_cols(static_cast<Index>(input.size()), model.input_dim(), "predict");
    Eigen::Map<const VectorT<T>> x(input.data(), static_cast<Index>(input.size()));
    return model.affine.weights * x + model.affine.bias;
}

} // namespace surrogate::nn
