#pragma once

#include "surrogate/data/dataset.hpp"
#include "surrogate/metrics/ssim.hpp"
#include "surrogate/nn/checkpoint.hpp"

#include <span>
#include <vector>

namespace surrogate::metrics {

struct MeanStd {
    double mean = 0;
    double std = 0;  // population
};

/// Two-pass mean and population standard deviation. Throws ConfigError on
/// empty input.
MeanStd mean_std(std::span<const double> values);

/// The "mean +- std" entry for one (k, split) cell over per-seed results.
inline MeanStd aggregate_over_seeds(std::span<const double> per_seed) { return mean_std(per_seed); }

/// Per-case scores for one model on one list of cases.
struct MetricReport {
    std::vector<int> case_ids;
    std::vector<double> ssim;
    /// Mean squared error in normalized target space, per case.
    std::vector<double> mse;
    double ssim_mean = 0;
    double ssim_std = 0;
    double mse_mean = 0;
};

/// Bounding box of the target pixels.
PixelBox target_bounding_box(const data::TargetPixelMap& map);

/// Restores each prediction row into an image and scores it against the
/// ground-truth image of the corresponding case.
MetricReport evaluate_predictions(const nn::Matrix& predictions, std::span<const int> ids,
                                  const data::Dataset& dataset, const SsimConfig& cfg = {});

MetricReport evaluate_model(const nn::MlpModel& model, std::span<const int> ids,
                            const data::Dataset& dataset, const SsimConfig& cfg = {});
MetricReport evaluate_model(const nn::LinearModel& model, std::span<const int> ids,
                            const data::Dataset& dataset, const SsimConfig& cfg = {});
MetricReport evaluate_model(const nn::Checkpoint& ckpt, std::span<const int> ids,
                            const data::Dataset& dataset, const SsimConfig& cfg = {});

} // namespace surrogate::metrics
