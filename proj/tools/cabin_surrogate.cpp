// Command-line front end: corpus generation, target extraction, training,
// evaluation, sweeps, inference and reports.

#include "surrogate/cabin/field.hpp"
#include "surrogate/data/dataset.hpp"
#include "surrogate/data/normalize.hpp"
#include "surrogate/error.hpp"
#include "surrogate/experiment/sweep.hpp"
#include "surrogate/metrics/report.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace surrogate;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::config: return kExitUsage;
    case ErrorKind::numeric: return kExitNumeric;
    default: return kExitData;
    }
}

// Single-line, key=value, so callers can parse failures.
void report_error(const char* kind, const std::string& message) {
    std::string flat = message;
    for (auto& c : flat) {
        if (c == '\n' || c == '"') c = ' ';
    }
    std::cerr << "error kind=" << kind << " message=\"" << flat << "\"\n";
}

std::pair<int, int> parse_grid(const std::string& text) {
    int w = 0, h = 0;
    char x = 0, extra = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X')) {
        throw ConfigError("--grid must look like WxH, got '" + text + "'");
    }
    if (w < cabin::min_grid_size || h < cabin::min_grid_size) {
        throw ConfigError("--grid must be at least 16x16");
    }
    return {w, h};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

data::Dataset load_dataset(const fs::path& data_dir, const fs::path& map_dir) {
    auto map = data::load_target_map(map_dir);
    auto corpus = data::read_corpus(data_dir);
    if (data::hash_image_stack(corpus.images) != map.source_hash) {
        throw DataError("target map " + map_dir.string() + " was not extracted from " + data_dir.string());
    }
    return data::Dataset(std::move(corpus), std::move(map));
}

// Options shared by train and sweep; explicit flags override --config.
struct TrainFlags {
    std::string config;
    std::optional<int> k, depth, width, epochs, eval_every, batch_size, jobs;
    std::optional<std::uint64_t> seed;
    std::optional<double> learning_rate;
    std::optional<std::string> kind, precision;

    void add_to(CLI::App* cmd, bool with_k_and_seed) {
        cmd->add_option("--config", config, "flat key = value config file");
        if (with_k_and_seed) {
            cmd->add_option("--k", k, "training subset size");
            cmd->add_option("--seed", seed, "initialization and sampling seed");
            cmd->add_option("--kind", kind, "mlp or linear");
        }
        cmd->add_option("--depth", depth, "number of dense layers");
        cmd->add_option("--width", width, "hidden layer size");
        cmd->add_option("--epochs", epochs, "maximum epochs");
        cmd->add_option("--eval-every", eval_every, "epochs between validation evaluations");
        cmd->add_option("--batch-size", batch_size, "mini-batch size");
        cmd->add_option("--learning-rate", learning_rate, "Adam learning rate");
        cmd->add_option("--precision", precision, "f64 or f32");
    }

    experiment::ExperimentConfig resolve() const {
        experiment::ExperimentConfig cfg;
        if (!config.empty()) experiment::apply_config_file(cfg, config);
        auto& t = cfg.train;
        if (k) t.k = *k;
        if (seed) t.seed = *seed;
        if (depth) t.depth = *depth;
        if (width) t.width = *width;
        if (epochs) t.max_epochs = *epochs;
        if (eval_every) t.eval_every = *eval_every;
        if (batch_size) t.batch_size = *batch_size;
        if (learning_rate) t.learning_rate = *learning_rate;
        if (kind) t.kind = experiment::parse_model_kind(*kind);
        if (precision) t.precision = experiment::parse_precision(*precision);
        t.validate();
        return cfg;
    }
};

nlohmann::json report_json(const metrics::MetricReport& m) {
    return {{"ssim_mean", m.ssim_mean}, {"ssim_std", m.ssim_std}, {"mse_mean", m.mse_mean}, {"cases", m.case_ids.size()}};
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::string run_stem(const experiment::SweepCell& c) {
    return std::string(experiment::to_string(c.kind)) + "_k" + std::to_string(c.k) + "_s" + std::to_string(c.seed);
}

void write_reports(const fs::path& out, std::span<const experiment::RunRow> rows,
                   std::span<const experiment::RunTiming> timings, double cost, int total_cases) {
    experiment::write_runs_csv(out / "runs_mlp.csv", rows, experiment::ModelKind::mlp);
    experiment::write_runs_csv(out / "runs_linear.csv", rows, experiment::ModelKind::linear);
    experiment::write_timings_csv(out / "timings.csv", timings);
    experiment::write_table1_csv(out / "table1.csv", experiment::table1(rows));
    experiment::write_table2_csv(out / "table2.csv", experiment::timing_report(timings, cost, total_cases));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cabin temperature-field surrogate toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate the synthetic case corpus");
    fs::path gen_out;
    std::string gen_grid = std::to_string(cabin::default_grid_width) + "x" + std::to_string(cabin::default_grid_height);
    std::uint64_t gen_seed = 0;
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--grid", gen_grid, "image size WxH");
    gen->add_option("--seed", gen_seed, "recorded in the manifest; the field oracle is deterministic");

    // extract
    auto* extract = app.add_subcommand("extract", "extract target pixels and split the cases");
    fs::path ex_data, ex_out;
    std::uint64_t ex_seed = 0;
    extract->add_option("--data", ex_data, "corpus directory")->required();
    extract->add_option("--out", ex_out, "output directory for the map and split")->required();
    extract->add_option("--seed", ex_seed, "split seed");

    // train
    auto* train_cmd = app.add_subcommand("train", "train one model");
    fs::path tr_data, tr_map, tr_out;
    TrainFlags tr_flags;
    train_cmd->add_option("--data", tr_data, "corpus directory")->required();
    train_cmd->add_option("--map", tr_map, "directory written by extract")->required();
    train_cmd->add_option("--out", tr_out, "output directory")->required();
    tr_flags.add_to(train_cmd, true);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a checkpoint on one split");
    fs::path ev_ckpt, ev_data, ev_map, ev_out;
    std::string ev_split = "test";
    bool ev_bbox = false;
    eval_cmd->add_option("--checkpoint", ev_ckpt)->required();
    eval_cmd->add_option("--data", ev_data, "corpus directory")->required();
    eval_cmd->add_option("--map", ev_map, "directory written by extract")->required();
    eval_cmd->add_option("--out", ev_out, "output directory")->required();
    eval_cmd->add_option("--split", ev_split, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));
    eval_cmd->add_flag("--bbox", ev_bbox, "score only the target-pixel bounding box");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "training-size x seed sweep for the MLP and the linear baseline");
    fs::path sw_data, sw_map, sw_out;
    TrainFlags sw_flags;
    std::optional<int> sw_jobs;
    std::string sw_k_set, sw_seeds;
    bool sw_grid = false;
    sweep_cmd->add_option("--data", sw_data, "corpus directory")->required();
    sweep_cmd->add_option("--map", sw_map, "directory written by extract")->required();
    sweep_cmd->add_option("--out", sw_out, "output directory")->required();
    sweep_cmd->add_option("--jobs", sw_jobs, "parallel runs");
    sweep_cmd->add_option("--k-set", sw_k_set, "comma-separated training sizes");
    sweep_cmd->add_option("--seeds", sw_seeds, "comma-separated seeds");
    sweep_cmd->add_flag("--grid-search", sw_grid, "pick depth and width by grid search with seed 0 first");
    sw_flags.add_to(sweep_cmd, false);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "predict one case and write the restored image");
    fs::path pr_ckpt, pr_map, pr_out;
    std::string pr_case;
    predict_cmd->add_option("--checkpoint", pr_ckpt)->required();
    predict_cmd->add_option("--map", pr_map, "directory written by extract")->required();
    predict_cmd->add_option("--case", pr_case, "S,altitude,azimuth,T_dis,Q,T_amb")->required();
    predict_cmd->add_option("--out", pr_out, "output PGM")->required();

    // render-diff
    auto* diff_cmd = app.add_subcommand("render-diff", "absolute difference image and SSIM of two PGMs");
    fs::path rd_a, rd_b, rd_out;
    diff_cmd->add_option("--a", rd_a)->required();
    diff_cmd->add_option("--b", rd_b)->required();
    diff_cmd->add_option("--out", rd_out, "output PGM")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "rebuild the SSIM and timing tables from sweep outputs");
    fs::path rp_runs, rp_out;
    double rp_cost = 0.75;
    int rp_total = 2160;
    report_cmd->add_option("--runs", rp_runs, "sweep output directory")->required();
    report_cmd->add_option("--out", rp_out, "output directory")->required();
    report_cmd->add_option("--cost", rp_cost, "simulation hours per case");
    report_cmd->add_option("--total-cases", rp_total, "size of the full case grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return kExitUsage;
    }

    try {
        if (*gen) {
            const auto [w, h] = parse_grid(gen_grid);
            const auto corpus = data::generate_corpus(w, h);
            data::write_corpus(gen_out, corpus, gen_seed);
            std::cout << "wrote " << corpus.images.size() << " images (" << w << "x" << h << ") to " << gen_out.string() << '\n';
        } else if (*extract) {
            const auto corpus = data::read_corpus(ex_data);
            const auto map = data::extract_target_pixels(corpus.images);
            const auto split = data::split_cases(corpus.cases, ex_seed);
            ensure_dir(ex_out);
            data::save_target_map(ex_out, map);
            data::save_split(ex_out, split);
            std::cout << map.size() << " target pixels; split " << split.train_ids.size() << '/'
                      << split.val_ids.size() << '/' << split.test_ids.size() << " after " << split.retries
                      << " retries\n";
        } else if (*train_cmd) {
            const auto cfg = tr_flags.resolve();
            const auto dataset = load_dataset(tr_data, tr_map);
            const auto split = data::load_split(tr_map);
            const auto result = experiment::train(cfg.train, dataset, split);
            ensure_dir(tr_out);
            nn::save_checkpoint(tr_out / "checkpoint.bin", result.checkpoint);
            experiment::write_loss_log(tr_out / "loss_log.jsonl", result.log);
            write_json(tr_out / "run.json", {{"config", cfg.train.canonical()},
                                             {"best_epoch", result.best_epoch},
                                             {"best_val_mse", result.best_val_mse},
                                             {"train_seconds", result.train_seconds},
                                             {"val", report_json(result.val)},
                                             {"test", report_json(result.test)}});
            std::cout << "best_epoch=" << result.best_epoch << " val_mse=" << result.best_val_mse
                      << " val_ssim=" << result.val.ssim_mean << " test_ssim=" << result.test.ssim_mean << '\n';
        } else if (*eval_cmd) {
            const auto ckpt = nn::load_checkpoint(ev_ckpt);
            const auto dataset = load_dataset(ev_data, ev_map);
            const auto split = data::load_split(ev_map);
            if (ckpt.input_dim() != static_cast<nn::Index>(cabin::CaseSpec::num_variables) ||
                ckpt.output_dim() != static_cast<nn::Index>(dataset.num_targets())) {
                throw ShapeError("checkpoint dimensions do not match the target map");
            }
            const auto& ids = ev_split == "train" ? split.train_ids : ev_split == "val" ? split.val_ids : split.test_ids;
            metrics::SsimConfig scfg;
            if (ev_bbox) scfg.region = metrics::target_bounding_box(dataset.map);
            const auto report = metrics::evaluate_model(ckpt, ids, dataset, scfg);
            ensure_dir(ev_out);
            std::ofstream out(ev_out / "eval.csv", std::ios::trunc);
            if (!out) throw DataError("cannot write " + (ev_out / "eval.csv").string());
            out.precision(17);
            out << "case_id,ssim,mse\n";
            for (std::size_t i = 0; i < report.case_ids.size(); ++i) {
                out << report.case_ids[i] << ',' << report.ssim[i] << ',' << report.mse[i] << '\n';
            }
            std::cout << ev_split << " ssim_mean=" << report.ssim_mean << " ssim_std=" << report.ssim_std
                      << " mse_mean=" << report.mse_mean << '\n';
        } else if (*sweep_cmd) {
            auto cfg = sw_flags.resolve();
            if (!sw_k_set.empty()) experiment::apply_setting(cfg, "k_set", sw_k_set);
            if (!sw_seeds.empty()) experiment::apply_setting(cfg, "seeds", sw_seeds);
            if (sw_jobs) cfg.sweep.jobs = *sw_jobs;
            if (sw_grid) cfg.sweep.grid_search = true;
            const auto dataset = load_dataset(sw_data, sw_map);
            const auto split = data::load_split(sw_map);
            for (int k : cfg.sweep.k_set) {
                if (k < 1 || static_cast<std::size_t>(k) > split.train_ids.size()) {
                    throw ConfigError("k = " + std::to_string(k) + " is outside the training split");
                }
            }
            ensure_dir(sw_out / "runs");

            if (cfg.sweep.grid_search) {
                const auto gs = experiment::grid_search(cfg.train, cfg.sweep.depths, cfg.sweep.widths,
                                                        cfg.sweep.k_set, dataset, split, cfg.sweep.jobs);
                std::ofstream out(sw_out / "grid_search.csv", std::ios::trunc);
                out.precision(17);
                out << "depth,width,k,test_ssim\n";
                for (const auto& s : gs.scores) out << s.arch.depth << ',' << s.arch.width << ',' << s.k << ',' << s.test_ssim << '\n';
                cfg.train.depth = gs.best.depth;
                cfg.train.width = gs.best.width;
                std::cout << "grid search selected depth=" << gs.best.depth << " width=" << gs.best.width << '\n';
            }

            const experiment::ModelKind kinds[] = {experiment::ModelKind::mlp, experiment::ModelKind::linear};
            experiment::SweepOptions opts;
            opts.jobs = cfg.sweep.jobs;
            opts.on_done = [&](const experiment::SweepCell& c) {
                const auto stem = run_stem(c);
                if (!c.result) {
                    std::cerr << stem << " failed: " << c.error << '\n';
                    return;
                }
                nn::save_checkpoint(sw_out / "runs" / (stem + ".ckpt"), c.result->checkpoint);
                experiment::write_loss_log(sw_out / "runs" / (stem + ".jsonl"), c.result->log);
                std::cout << stem << " best_epoch=" << c.result->best_epoch << " test_ssim=" << c.result->test.ssim_mean
                          << " train_s=" << c.result->train_seconds << std::endl;
            };
            const auto report = experiment::sweep(cfg.train, cfg.sweep.k_set, cfg.sweep.seeds, kinds, dataset, split, opts);
            write_reports(sw_out, experiment::run_rows(report), experiment::run_timings(report),
                          cfg.sweep.per_case_cost_hours, static_cast<int>(dataset.corpus.cases.size()));
            std::size_t failed = 0;
            for (const auto& c : report.cells) failed += c.result ? 0 : 1;
            if (failed) {
                report_error("numeric", std::to_string(failed) + " of " + std::to_string(report.cells.size()) + " runs failed");
                return kExitNumeric;
            }
        } else if (*predict_cmd) {
            const auto c = cabin::parse_case(pr_case);
            const auto ckpt = nn::load_checkpoint(pr_ckpt);
            const auto map = data::load_target_map(pr_map);
            if (ckpt.input_dim() != static_cast<nn::Index>(cabin::CaseSpec::num_variables) ||
                ckpt.output_dim() != static_cast<nn::Index>(map.size())) {
                throw ShapeError("checkpoint maps " + std::to_string(ckpt.input_dim()) + " -> " +
                                 std::to_string(ckpt.output_dim()) + " but the map has " + std::to_string(map.size()) +
                                 " target pixels");
            }
            const auto started = std::chrono::steady_clock::now();
            const auto x = data::normalize_input(c);
            nn::Matrix batch(1, static_cast<nn::Index>(x.size()));
            for (std::size_t i = 0; i < x.size(); ++i) batch(0, static_cast<nn::Index>(i)) = x[i];
            const nn::Matrix pred = ckpt.predict_batch(batch);
            const auto img = data::restore({pred.data(), static_cast<std::size_t>(pred.size())}, map);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            cabin::write_pgm(pr_out, img);
            std::cout << "inference_ms=" << ms << '\n';
        } else if (*diff_cmd) {
            const auto a = cabin::read_pgm(rd_a);
            const auto b = cabin::read_pgm(rd_b);
            if (!a.same_shape(b)) throw ShapeError("render-diff: images differ in size");
            cabin::Image8 diff(a.width, a.height);
            for (std::size_t i = 0; i < a.pixels.size(); ++i) {
                diff.pixels[i] = static_cast<std::uint8_t>(a.pixels[i] > b.pixels[i] ? a.pixels[i] - b.pixels[i]
                                                                                      : b.pixels[i] - a.pixels[i]);
            }
            const double s = metrics::ssim(a, b);
            cabin::write_pgm(rd_out, diff);
            std::printf("ssim=%.17g\n", s);
        } else if (*report_cmd) {
            auto rows = experiment::read_runs_csv(rp_runs / "runs_mlp.csv", experiment::ModelKind::mlp);
            const auto lin = experiment::read_runs_csv(rp_runs / "runs_linear.csv", experiment::ModelKind::linear);
            rows.insert(rows.end(), lin.begin(), lin.end());
            const auto timings = experiment::read_timings_csv(rp_runs / "timings.csv");
            ensure_dir(rp_out);
            experiment::write_table1_csv(rp_out / "table1.csv", experiment::table1(rows));
            experiment::write_table2_csv(rp_out / "table2.csv", experiment::timing_report(timings, rp_cost, rp_total));
            std::cout << "wrote " << (rp_out / "table1.csv").string() << " and " << (rp_out / "table2.csv").string() << '\n';
        }
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        report_error("data", e.what());
        return kExitData;
    }
    return 0;
}
