#pragma once

#include "surrogate/nn/linear.hpp"
#include "surrogate/nn/mlp.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace surrogate::nn {

/// A trained model plus the hash of the training configuration that
/// produced it. Layout on disk is documented in docs/checkpoint_format.md.
struct Checkpoint {
    std::variant<MlpModel, LinearModel> model;
    std::uint64_t config_hash = 0;

    bool is_mlp() const { return std::holds_alternative<MlpModel>(model); }
    Index input_dim() const;
    Index output_dim() const;
    /// Prediction for a batch of normalized inputs, whichever the model kind.
    Matrix predict_batch(const Matrix& inputs) const;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace surrogate::nn
