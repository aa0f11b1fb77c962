#pragma once

#include "surrogate/data/dataset.hpp"
#include "surrogate/experiment/config.hpp"
#include "surrogate/metrics/report.hpp"
#include "surrogate/nn/checkpoint.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace surrogate::experiment {

struct EpochLog {
    int epoch = 0;
    /// Size-weighted mean of the mini-batch losses seen during the epoch.
    double train_mse = 0;
    /// Present on evaluated epochs only.
    std::optional<double> val_mse;

    bool operator==(const EpochLog&) const = default;
};

struct RunResult {
    int best_epoch = 0;
    double best_val_mse = 0;
    metrics::MetricReport val;
    metrics::MetricReport test;
    double train_seconds = 0;
    std::vector<EpochLog> log;
    /// Parameters at the best epoch.
    nn::Checkpoint checkpoint;
    /// Case ids of the training subset, in sampling order.
    std::vector<int> training_ids;
};

/// Optional instrumentation. on_batch sees the case ids of every mini-batch.
struct TrainHooks {
    std::function<void(std::span<const int>)> on_batch;
    std::function<void(const EpochLog&)> on_epoch;
};

/// Trains on the first k cases of the seeded training shuffle, evaluates
/// validation MSE every eval_every epochs (and at the last epoch), keeps the
/// first snapshot attaining the minimum and scores it on val and test.
RunResult train(const TrainConfig& config, const data::Dataset& dataset, const data::SplitSpec& split,
                const TrainHooks& hooks = {}, const metrics::SsimConfig& ssim_cfg = {});

/// One JSON object per line: {"epoch":..,"train_mse":..,"val_mse":..|null}.
void write_loss_log(const std::filesystem::path& path, std::span<const EpochLog> log);

} // namespace surrogate::experiment
