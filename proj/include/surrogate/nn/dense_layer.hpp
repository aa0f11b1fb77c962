#pragma once

#include "surrogate/error.hpp"
#include "surrogate/nn/tensor.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace surrogate::nn {

/// Affine map x -> W x + b with W stored out x in.
template <typename T>
struct DenseLayer {
    MatrixT<T> weights;
    VectorT<T> bias;

    DenseLayer() = default;
    DenseLayer(Index in_dim, Index out_dim)
        : weights(MatrixT<T>::Zero(out_dim, in_dim)), bias(VectorT<T>::Zero(out_dim)) {}

    Index in_dim() const { return weights.cols(); }
    Index out_dim() const { return weights.rows(); }

    /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero bias.
    void glorot_init(std::mt19937_64& rng) {
        const double bound = std::sqrt(6.0 / static_cast<double>(in_dim() + out_dim()));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Index i = 0; i < weights.size(); ++i) {
            weights.data()[i] = static_cast<T>(dist(rng));
        }
        bias.setZero();
    }

    template <typename U>
    DenseLayer<U> cast() const {
        DenseLayer<U> out;
        out.weights = weights.template cast<U>();
        out.bias = bias.template cast<U>();
        return out;
    }
};

/// Gradient set, one entry per layer with the same shapes as the parameters.
template <typename T>
struct Gradients {
    std::vector<DenseLayer<T>> layers;

    std::vector<TensorRef<const T>> tensors() const {
        std::vector<TensorRef<const T>> out;
        out.reserve(layers.size() * 2);
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& l = layers[i];
            out.push_back({"layer" + std::to_string(i) + ".weights",
                           {l.weights.data(), static_cast<std::size_t>(l.weights.size())}});
            out.push_back({"layer" + std::to_string(i) + ".bias",
                           {l.bias.data(), static_cast<std::size_t>(l.bias.size())}});
        }
        return out;
    }
};

template <typename T>
std::vector<TensorRef<T>> layer_tensors(std::vector<DenseLayer<T>>& layers) {
    std::vector<TensorRef<T>> out;
    out.reserve(layers.size() * 2);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        auto& l = layers[i];
        out.push_back({"layer" + std::to_string(i) + ".weights",
                       {l.weights.data(), static_cast<std::size_t>(l.weights.size())}});
        out.push_back({"layer" + std::to_string(i) + ".bias",
                       {l.bias.data(), static_cast<std::size_t>(l.bias.size())}});
    }
    return out;
}

/// Mean over all elements of the squared difference.
template <typename T>
T mse_loss(const MatrixT<T>& pred, const MatrixT<T>& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw ShapeError("mse_loss: prediction is " + std::to_string(pred.rows()) + "x" +
                         std::to_string(pred.cols()) + ", target is " +
                         std::to_string(target.rows()) + "x" + std::to_string(target.cols()));
    }
    if (pred.size() == 0) return T(0);
    return (pred - target).squaredNorm() / static_cast<T>(pred.size());
}

/// d(mse)/d(pred).
template <typename T>
MatrixT<T> mse_grad(const MatrixT<T>& pred, const MatrixT<T>& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw ShapeError("mse_grad: prediction and target shapes differ");
    }
    return (pred - target) * (T(2) / static_cast<T>(pred.size()));
}

namespace detail {

template <typename T>
MatrixT<T> affine(const DenseLayer<T>& layer, const MatrixT<T>& x) {
    MatrixT<T> z(x.rows(), layer.out_dim());
    z.noalias() = x * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    return z;
}

template <typename T>
void accumulate_affine_grad(DenseLayer<T>& grad, const MatrixT<T>& dz, const MatrixT<T>& x) {
    grad.weights.noalias() = dz.transpose() * x;
    grad.bias = dz.colwise().sum().transpose();
}

inline void check_batch_cols(Index cols, Index expected, const char* who) {
    if (cols != expected) {
        throw ShapeError(std::string(who) + ": batch has " + std::to_string(cols) +
                         " columns, model expects " + std::to_string(expected));
    }
}

} // namespace detail

} // namespace surrogate::nn
