#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <string>

namespace surrogate::nn {

using Index = Eigen::Index;

/// Row-major so that a mini-batch is B contiguous samples and checkpoints
/// can store parameter tensors as flat row-major blocks.
template <typename T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using VectorT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Matrix = MatrixT<double>;
using Vector = VectorT<double>;

/// Named view of one parameter (or gradient) tensor.
template <typename T>
struct TensorRef {
    std::string name;
    std::span<T> values;
};

template <typename T>
bool all_finite(std::span<const T> values) {
    for (T v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace surrogate::nn
