#include "surrogate/experiment/sweep.hpp"
#include "surrogate/error.hpp"
#include "surrogate/nn/mlp.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace surrogate::experiment {

void run_parallel(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (first_error) std::rethrow_exception(first_error);
}

Architecture select_architecture(std::span<const ArchitectureScore> scores, int input_dim, int output_dim) {
    if (scores.empty()) throw ConfigError("select_architecture: no scores");

    std::map<int, double> best_per_k;
    for (const auto& s : scores) {
        auto [it, inserted] = best_per_k.try_emplace(s.k, s.test_ssim);
        if (!inserted) it->second = std::max(it->second, s.test_ssim);
    }

    struct Tally {
        int wins = 0;
        double sum = 0;
        int n = 0;
    };
    std::vector<std::pair<Architecture, Tally>> tallies;
    for (const auto& s : scores) {
        auto it = std::find_if(tallies.begin(), tallies.end(), [&](const auto& t) { return t.first == s.arch; });
        if (it == tallies.end()) {
            tallies.push_back({s.arch, {}});
            it = std::prev(tallies.end());
        }
        it->second.sum += s.test_ssim;
        ++it->second.n;
        if (s.test_ssim == best_per_k[s.k]) ++it->second.wins;
    }

    const auto params = [&](const Architecture& a) {
        return nn::mlp_parameter_count(a.depth, a.width, input_dim, output_dim);
    };
    const auto better = [&](const auto& a, const auto& b) {
        if (a.second.wins != b.second.wins) return a.second.wins > b.second.wins;
        const double ma = a.second.sum / a.second.n;
        const double mb = b.second.sum / b.second.n;
        if (ma != mb) return ma > mb;
        return params(a.first) < params(b.first);
    };
    return std::min_element(tallies.begin(), tallies.end(), better)->first;
}

GridSearchResult grid_search(const TrainConfig& base, std::span<const int> depths, std::span<const int> widths,
                             std::span<const int> k_set, const data::Dataset& dataset,
                             const data::SplitSpec& split, int jobs) {
    GridSearchResult out;
    for (int d : depths)
        for (int w : widths)
            for (int k : k_set) out.scores.push_back({{d, w}, k, 0.0});
    if (out.scores.empty()) throw ConfigError("grid_search: empty search space");

    run_parallel(out.scores.size(), jobs, [&](std::size_t i) {
        auto& s = out.scores[i];
        TrainConfig cfg = base;
        cfg.kind = ModelKind::mlp;
        cfg.seed = 0;
        cfg.depth = s.arch.depth;
        cfg.width = s.arch.width;
        cfg.k = s.k;
        s.test_ssim = train(cfg, dataset, split).test.ssim_mean;
    });
    out.best = select_architecture(out.scores, static_cast<int>(cabin::CaseSpec::num_variables),
                                   static_cast<int>(dataset.num_targets()));
    return out;
}

SweepReport sweep(const TrainConfig& base, std::span<const int> k_set, std::span<const std::uint64_t> seeds,
                  std::span<const ModelKind> kinds, const data::Dataset& dataset, const data::SplitSpec& split,
                  const SweepOptions& options) {
    SweepReport report;
    report.arch = {base.depth, base.width};
    for (auto kind : kinds)
        for (int k : k_set)
            for (auto seed : seeds) report.cells.push_back({k, seed, kind, std::nullopt, {}});

    std::mutex callback_mutex;
    run_parallel(report.cells.size(), options.jobs, [&](std::size_t i) {
        auto& cell = report.cells[i];
        TrainConfig cfg = base;
        cfg.k = cell.k;
        cfg.seed = cell.seed;
        cfg.kind = cell.kind;
        try {
            cell.result = train(cfg, dataset, split);
        } catch (const std::exception& e) {
            cell.error = e.what();
            if (cell.error.empty()) cell.error = "unknown failure";
        }
        if (options.on_done) {
            std::lock_guard lock(callback_mutex);
            options.on_done(cell);
        }
        if (!options.keep_checkpoints && cell.result) cell.result->checkpoint = {};
    });
    return report;
}

std::vector<RunRow> run_rows(const SweepReport& report) {
    std::vector<RunRow> rows;
    for (const auto& c : report.cells) {
        if (!c.result) continue;
        for (const auto* split : {"val", "test"}) {
            const auto& m = std::string(split) == "val" ? c.result->val : c.result->test;
            rows.push_back({c.kind, c.k, c.seed, split, m.ssim_mean, m.ssim_std, m.mse_mean, c.result->best_epoch});
        }
    }
    return rows;
}

std::vector<RunTiming> run_timings(const SweepReport& report) {
    std::vector<RunTiming> out;
    for (const auto& c : report.cells) {
        if (c.result) out.push_back({c.kind, c.k, c.seed, c.result->train_seconds});
    }
    return out;
}

std::vector<Table1Cell> table1(std::span<const RunRow> rows) {
    std::map<std::tuple<int, std::string, int>, std::vector<double>> groups;
    for (const auto& r : rows) groups[{static_cast<int>(r.kind), r.split, r.k}].push_back(r.ssim_mean);
    std::vector<Table1Cell> cells;
    for (const auto& [key, values] : groups) {
        const auto& [kind, split, k] = key;
        cells.push_back({static_cast<ModelKind>(kind), split, k, metrics::aggregate_over_seeds(values),
                         static_cast<int>(values.size())});
    }
    return cells;
}

const Table1Cell* find_cell(std::span<const Table1Cell> cells, ModelKind kind, const std::string& split, int k) {
    for (const auto& c : cells) {
        if (c.kind == kind && c.split == split && c.k == k) return &c;
    }
    return nullptr;
}

TimingRow timing_row(int k, double training_hours, double per_case_cost_hours, int total_cases) {
    if (!(per_case_cost_hours > 0)) throw ConfigError("per-case simulation cost must be > 0");
    if (total_cases < 1) throw ConfigError("total_cases must be >= 1");
    TimingRow row;
    row.k = k;
    row.simulation_hours = k * per_case_cost_hours;
    row.training_hours = training_hours;
    row.total_hours = row.simulation_hours + training_hours;
    row.reduction_pct = 100.0 * (1.0 - row.total_hours / (total_cases * per_case_cost_hours));
    return row;
}

std::vector<TimingRow> timing_report(std::span<const RunTiming> timings, double per_case_cost_hours,
                                     int total_cases) {
    std::map<int, std::pair<double, int>> per_k;
    for (const auto& t : timings) {
        if (t.kind != ModelKind::mlp) continue;
        auto& acc = per_k[t.k];
        acc.first += t.train_seconds;
        ++acc.second;
    }
    std::vector<TimingRow> rows;
    for (const auto& [k, acc] : per_k) {
        rows.push_back(timing_row(k, acc.first / acc.second / 3600.0, per_case_cost_hours, total_cases));
    }
    return rows;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(17);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != header) throw DataError(path.string() + ": expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

constexpr const char* kRunsHeader = "k,seed,split,ssim_mean,ssim_std,mse_mean,best_epoch";
constexpr const char* kTimingsHeader = "k,seed,kind,train_seconds";

} // namespace

void write_runs_csv(const std::filesystem::path& path, std::span<const RunRow> rows, ModelKind kind) {
    auto out = open_out(path);
    out << kRunsHeader << '\n';
    for (const auto& r : rows) {
        if (r.kind != kind) continue;
        out << r.k << ',' << r.seed << ',' << r.split << ',' << r.ssim_mean << ',' << r.ssim_std << ','
            << r.mse_mean << ',' << r.best_epoch << '\n';
    }
}

std::vector<RunRow> read_runs_csv(const std::filesystem::path& path, ModelKind kind) {
    std::vector<RunRow> rows;
    for (const auto& f : read_csv(path, kRunsHeader)) {
        if (f.size() != 7) throw DataError(path.string() + ": expected 7 fields per row");
        try {
            rows.push_back({kind, std::stoi(f[0]), std::stoull(f[1]), f[2], std::stod(f[3]), std::stod(f[4]),
                            std::stod(f[5]), std::stoi(f[6])});
        } catch (const std::exception&) {
            throw DataError(path.string() + ": unparsable row");
        }
    }
    return rows;
}

void write_timings_csv(const std::filesystem::path& path, std::span<const RunTiming> timings) {
    auto out = open_out(path);
    out << kTimingsHeader << '\n';
    for (const auto& t : timings) out << t.k << ',' << t.seed << ',' << to_string(t.kind) << ',' << t.train_seconds << '\n';
}

std::vector<RunTiming> read_timings_csv(const std::filesystem::path& path) {
    std::vector<RunTiming> out;
    for (const auto& f : read_csv(path, kTimingsHeader)) {
        if (f.size() != 4) throw DataError(path.string() + ": expected 4 fields per row");
        try {
            out.push_back({parse_model_kind(f[2]), std::stoi(f[0]), std::stoull(f[1]), std::stod(f[3])});
        } catch (const ConfigError&) {
            throw DataError(path.string() + ": unknown model kind");
        } catch (const std::exception&) {
            throw DataError(path.string() + ": unparsable row");
        }
    }
    return out;
}

void write_table1_csv(const std::filesystem::path& path, std::span<const Table1Cell> cells) {
    std::vector<int> ks;
    for (const auto& c : cells) {
        if (std::find(ks.begin(), ks.end(), c.k) == ks.end()) ks.push_back(c.k);
    }
    std::sort(ks.begin(), ks.end());

    auto out = open_out(path);
    out << "model,split,stat";
    for (int k : ks) out << ',' << k;
    out << '\n';
    for (auto kind : {ModelKind::linear, ModelKind::mlp}) {
        for (const auto* split : {"val", "test"}) {
            for (const auto* stat : {"mean", "std"}) {
                out << (kind == ModelKind::linear ? "baseline" : "ours") << ',' << split << ',' << stat;
                for (int k : ks) {
                    out << ',';
                    if (const auto* c = find_cell(cells, kind, split, k)) {
                        out << (std::string(stat) == "mean" ? c->ssim.mean : c->ssim.std);
                    }
                }
                out << '\n';
            }
        }
    }
}

void write_table2_csv(const std::filesystem::path& path, std::span<const TimingRow> rows) {
    auto out = open_out(path);
    out << "k,simulation_hours,training_hours,total_hours,reduction_pct\n";
    for (const auto& r : rows) {
        out << r.k << ',' << r.simulation_hours << ',' << r.training_hours << ',' << r.total_hours << ','
            << r.reduction_pct << '\n';
    }
}

} // namespace surrogate::experiment
