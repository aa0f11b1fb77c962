#include "surrogate/experiment/train.hpp"
#include "surrogate/data/split.hpp"
#include "surrogate/error.hpp"
#include "surrogate/nn/adam.hpp"
#include "surrogate/util/hash.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace surrogate::experiment {

namespace {

using nn::Index;
using nn::MatrixT;

template <typename T>
struct MlpOps {
    using Model = nn::BasicMlp<T>;

    static Model init(const TrainConfig& c, Index in, Index out) {
        return nn::init_model<T>(c.depth, c.width, static_cast<int>(in), static_cast<int>(out), c.seed);
    }
    static MatrixT<T> predict(const Model& m, const MatrixT<T>& x) { return nn::forward(m, x).output(); }

    // Returns the pre-update loss; parameters are left untouched if it is not finite.
    static T step(Model& m, nn::AdamState<T>& opt, const MatrixT<T>& x, const MatrixT<T>& y) {
        const auto acts = nn::forward(m, x);
        const T loss = nn::mse_loss(acts.output(), y);
        if (!std::isfinite(loss)) return loss;
        nn::adam_step(m, nn::backward(m, acts, x, y), opt);
        return loss;
    }
};

template <typename T>
struct LinearOps {
    using Model = nn::BasicLinear<T>;

    static Model init(const TrainConfig& c, Index in, Index out) {
        return nn::init_linear<T>(static_cast<int>(in), static_cast<int>(out), c.seed);
    }
    static MatrixT<T> predict(const Model& m, const MatrixT<T>& x) { return nn::linear_forward(m, x); }

    static T step(Model& m, nn::AdamState<T>& opt, const MatrixT<T>& x, const MatrixT<T>& y) {
        const MatrixT<T> pred = nn::linear_forward(m, x);
        const T loss = nn::mse_loss(pred, y);
        if (!std::isfinite(loss)) return loss;
        nn::adam_step(m, nn::linear_backward(m, x, pred, y), opt);
        return loss;
    }
};

template <typename T>
void gather_rows(const MatrixT<T>& src, std::span<const std::size_t> rows, MatrixT<T>& dst) {
    dst.resize(static_cast<Index>(rows.size()), src.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) dst.row(static_cast<Index>(i)) = src.row(static_cast<Index>(rows[i]));
}

template <typename Ops, typename T>
RunResult run(const TrainConfig& cfg, const data::Dataset& dataset, const data::SplitSpec& split,
              const TrainHooks& hooks) {
    RunResult result;
    result.training_ids = data::sample_first_k(split, cfg.seed, static_cast<std::size_t>(cfg.k));

    const MatrixT<T> x_train = dataset.inputs(result.training_ids).template cast<T>();
    const MatrixT<T> y_train = dataset.targets(result.training_ids).template cast<T>();
    const MatrixT<T> x_val = dataset.inputs(split.val_ids).template cast<T>();
    const MatrixT<T> y_val = dataset.targets(split.val_ids).template cast<T>();

    auto model = Ops::init(cfg, x_train.cols(), y_train.cols());
    auto best = model;
    nn::AdamState<T> opt(nn::AdamConfig{.learning_rate = cfg.learning_rate});
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 1));

    std::vector<std::size_t> order(result.training_ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<int> batch_ids;
    MatrixT<T> xb, yb;
    double best_val = std::numeric_limits<double>::infinity();
    const auto batch = static_cast<std::size_t>(cfg.batch_size);

    const auto started = std::chrono::steady_clock::now();
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0;
        for (std::size_t start = 0, b = 0; start < order.size(); start += batch, ++b) {
            const std::span<const std::size_t> rows(order.data() + start, std::min(batch, order.size() - start));
            gather_rows(x_train, rows, xb);
            gather_rows(y_train, rows, yb);
            if (hooks.on_batch) {
                batch_ids.clear();
                for (auto r : rows) batch_ids.push_back(result.training_ids[r]);
                hooks.on_batch(batch_ids);
            }
            const T loss = Ops::step(model, opt, xb, yb);
            if (!std::isfinite(loss)) {
                std::ostringstream os;
                os << "non-finite training loss " << loss << " at epoch " << epoch << ", batch " << b;
                throw NumericError(os.str());
            }
            loss_sum += static_cast<double>(loss) * static_cast<double>(rows.size());
        }

        EpochLog entry{epoch, loss_sum / static_cast<double>(order.size()), std::nullopt};
        if (epoch % cfg.eval_every == 0 || epoch == cfg.max_epochs) {
            const double val = static_cast<double>(nn::mse_loss(Ops::predict(model, x_val), y_val));
            if (!std::isfinite(val)) {
                throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));
            }
            entry.val_mse = val;
            if (val < best_val) {
                best_val = val;
                best = model;
                result.best_epoch = epoch;
            }
        }
        result.log.push_back(entry);
        if (hooks.on_epoch) hooks.on_epoch(entry);
    }
    result.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.best_val_mse = best_val;

    best.revision = 0;
    result.checkpoint.model = best.template cast<double>();
    result.checkpoint.config_hash = cfg.hash();
    return result;
}

} // namespace

RunResult train(const TrainConfig& config, const data::Dataset& dataset, const data::SplitSpec& split,
                const TrainHooks& hooks, const metrics::SsimConfig& ssim_cfg) {
    config.validate();
    if (split.val_ids.empty()) throw ConfigError("train: validation split is empty");

    RunResult r;
    const bool f64 = config.precision == Precision::f64;
    if (config.kind == ModelKind::mlp) {
        r = f64 ? run<MlpOps<double>, double>(config, dataset, split, hooks)
                : run<MlpOps<float>, float>(config, dataset, split, hooks);
    } else {
        r = f64 ? run<LinearOps<double>, double>(config, dataset, split, hooks)
                : run<LinearOps<float>, float>(config, dataset, split, hooks);
    }
    r.val = metrics::evaluate_model(r.checkpoint, split.val_ids, dataset, ssim_cfg);
    r.test = metrics::evaluate_model(r.checkpoint, split.test_ids, dataset, ssim_cfg);
    return r;
}

void write_loss_log(const std::filesystem::path& path, std::span<const EpochLog> log) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& e : log) {
        nlohmann::json j;
        j["epoch"] = e.epoch;
        j["train_mse"] = e.train_mse;
        j["val_mse"] = e.val_mse ? nlohmann::json(*e.val_mse) : nlohmann::json(nullptr);
        out << j.dump() << '\n';
    }
}

} // namespace surrogate::experiment
