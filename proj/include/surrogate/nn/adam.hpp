#pragma once

#include "surrogate/nn/linear.hpp"
#include "surrogate/nn/mlp.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace surrogate::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Bias-corrected Adam moments. Moments are allocated lazily on the first
/// step to match the parameter tensors they are applied to.
template <typename T>
struct AdamState {
    AdamConfig config;
    std::vector<VectorT<T>> first_moment;
    std::vector<VectorT<T>> second_moment;
    std::uint64_t step_count = 0;

    AdamState() = default;
    explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

template <typename T>
void adam_step(const std::vector<TensorRef<T>>& params, const std::vector<TensorRef<const T>>& grads,
               AdamState<T>& state) {
    if (params.size() != grads.size()) {
        throw ShapeError("adam_step: " + std::to_string(params.size()) + " parameter tensors but " +
                         std::to_string(grads.size()) + " gradient tensors");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].values.size() != grads[i].values.size()) {
            throw ShapeError("adam_step: gradient for " + params[i].name + " has wrong size");
        }
        if (!all_finite(grads[i].values)) {
            throw NumericError("adam_step: non-finite gradient in tensor " + grads[i].name);
        }
    }
    if (state.first_moment.empty()) {
        for (const auto& p : params) {
            const auto n = static_cast<Index>(p.values.size());
            state.first_moment.push_back(VectorT<T>::Zero(n));
            state.second_moment.push_back(VectorT<T>::Zero(n));
        }
    } else if (state.first_moment.size() != params.size()) {
        throw ShapeError("adam_step: optimizer state was built for a different parameter set");
    }

    ++state.step_count;
    const auto& cfg = state.config;
    const T b1 = static_cast<T>(cfg.beta1);
    const T b2 = static_cast<T>(cfg.beta2);
    const T eps = static_cast<T>(cfg.epsilon);
    const double t = static_cast<double>(state.step_count);
    const T bc1 = static_cast<T>(1.0 - std::pow(cfg.beta1, t));
    const T bc2 = static_cast<T>(1.0 - std::pow(cfg.beta2, t));
    const T lr = static_cast<T>(cfg.learning_rate);

    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& m = state.first_moment[i];
        auto& v = state.second_moment[i];
        if (static_cast<std::size_t>(m.size()) != params[i].values.size()) {
            throw ShapeError("adam_step: moment size mismatch for " + params[i].name);
        }
        T* theta = params[i].values.data();
        const T* g = grads[i].values.data();
        T* mp = m.data();
        T* vp = v.data();
        const std::size_t n = params[i].values.size();
        for (std::size_t j = 0; j < n; ++j) {
            mp[j] = b1 * mp[j] + (T(1) - b1) * g[j];
            vp[j] = b2 * vp[j] + (T(1) - b2) * g[j] * g[j];
            const T m_hat = mp[j] / bc1;
            const T v_hat = vp[j] / bc2;
            theta[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
        }
    }
}

template <typename T>
void adam_step(BasicMlp<T>& model, const Gradients<T>& grads, AdamState<T>& state) {
    adam_step(model.parameters(), grads.tensors(), state);
    ++model.revision;
}

template <typename T>
void adam_step(BasicLinear<T>& model, const Gradients<T>& grads, AdamState<T>& state) {
    auto g = grads.tensors();
    if (g.size() == 2) {
        g[0].name = "linear.weights";
        g[1].name = "linear.bias";
    }
    adam_step(model.parameters(), g, state);
    ++model.revision;
}

} // namespace surrogate::nn
