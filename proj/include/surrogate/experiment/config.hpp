#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace surrogate::experiment {

enum class ModelKind { mlp, linear };
enum class Precision { f64, f32 };

const char* to_string(ModelKind kind);
const char* to_string(Precision precision);
ModelKind parse_model_kind(std::string_view text);
Precision parse_precision(std::string_view text);

/// Hyper-parameters of one training run. Defaults are the desk-scale
/// settings; full_scale() returns the full-length schedule.
struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 32;
    int max_epochs = 300;
    int k = 200;
    std::uint64_t seed = 1;
    int depth = 10;
    int width = 128;
    int eval_every = 5;
    ModelKind kind = ModelKind::mlp;
    Precision precision = Precision::f64;

    static TrainConfig full_scale();

    /// Throws ConfigError on out-of-range values.
    void validate() const;
    /// Stable "key=value;..." rendering of every field.
    std::string canonical() const;
    /// FNV-1a of canonical(); stored in checkpoints.
    std::uint64_t hash() const;
};

/// Sweep-level settings: which k, seeds and architectures to run.
struct SweepSettings {
    std::vector<int> k_set{50, 100, 200, 500};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::vector<int> depths{5, 10};
    std::vector<int> widths{64, 128, 256};
    int jobs = 1;
    double per_case_cost_hours = 0.75;
    bool grid_search = false;

    static SweepSettings full_scale();
};

struct ExperimentConfig {
    TrainConfig train;
    SweepSettings sweep;
};

/// Applies one `key = value` assignment. Throws ConfigError for unknown
/// keys or unparsable values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat UTF-8 `key = value` text; '#' starts a comment line.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

} // namespace surrogate::experiment
