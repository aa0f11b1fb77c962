#include "surrogate/metrics/report.hpp"
#include "surrogate/error.hpp"

#include <algorithm>
#include <cmath>

namespace surrogate::metrics {

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) throw ConfigError("mean_std: no values to aggregate");
    double sum = 0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

PixelBox target_bounding_box(const data::TargetPixelMap& map) {
    if (map.coords.empty()) throw ConfigError("target_bounding_box: map has no target pixels");
    PixelBox box{map.coords.front().row, map.coords.front().col, map.coords.front().row,
                 map.coords.front().col};
    for (const auto& p : map.coords) {
        box.row0 = std::min(box.row0, p.row);
        box.row1 = std::max(box.row1, p.row);
        box.col0 = std::min(box.col0, p.col);
        box.col1 = std::max(box.col1, p.col);
    }
    return box;
}

MetricReport evaluate_predictions(const nn::Matrix& predictions, std::span<const int> ids,
                                  const data::Dataset& dataset, const SsimConfig& cfg) {
    if (predictions.rows() != static_cast<nn::Index>(ids.size()) ||
        predictions.cols() != static_cast<nn::Index>(dataset.num_targets())) {
        throw ShapeError("evaluate_predictions: prediction matrix is " + std::to_string(predictions.rows()) +
                         "x" + std::to_string(predictions.cols()) + ", expected " +
                         std::to_string(ids.size()) + "x" + std::to_string(dataset.num_targets()));
    }
    const nn::Matrix truth = dataset.targets(ids);
    MetricReport report;
    report.case_ids.assign(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto r = static_cast<nn::Index>(i);
        const nn::Vector row = predictions.row(r).transpose();
        const Image8 restored = data::restore({row.data(), static_cast<std::size_t>(row.size())}, dataset.map);
        report.ssim.push_back(ssim(restored, dataset.corpus.images.at(static_cast<std::size_t>(ids[i])), cfg));
        report.mse.push_back(predictions.cols() == 0
                                 ? 0.0
                                 : (predictions.row(r) - truth.row(r)).squaredNorm() /
                                       static_cast<double>(predictions.cols()));
    }
    if (!ids.empty()) {
        const auto s = mean_std(report.ssim);
        report.ssim_mean = s.mean;
        report.ssim_std = s.std;
        report.mse_mean = mean_std(report.mse).mean;
    }
    return report;
}

MetricReport evaluate_model(const nn::MlpModel& model, std::span<const int> ids,
                            const data::Dataset& dataset, const SsimConfig& cfg) {
    return evaluate_predictions(nn::forward(model, dataset.inputs(ids)).output(), ids, dataset, cfg);
}

MetricReport evaluate_model(const nn::LinearModel& model, std::span<const int> ids,
                            const data::Dataset& dataset, const SsimConfig& cfg) {
    return evaluate_predictions(nn::linear_forward(model, dataset.inputs(ids)), ids, dataset, cfg);
}

MetricReport evaluate_model(const nn::Checkpoint& ckpt, std::span<const int> ids,
                            const data::Dataset& dataset, const SsimConfig& cfg) {
    return evaluate_predictions(ckpt.predict_batch(dataset.inputs(ids)), ids, dataset, cfg);
}

} // namespace surrogate::metrics
