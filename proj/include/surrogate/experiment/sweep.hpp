#pragma once

#include "surrogate/experiment/train.hpp"
#include "surrogate/metrics/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace surrogate::experiment {

/// Runs fn(0..count-1) on up to `jobs` threads. Exceptions from fn propagate
/// after all workers finish; callers wanting per-task isolation catch inside.
void run_parallel(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct Architecture {
    int depth = 0;
    int width = 0;
    bool operator==(const Architecture&) const = default;
};

struct ArchitectureScore {
    Architecture arch;
    int k = 0;
    double test_ssim = 0;
};

/// Most per-k wins on test SSIM (ties at the top all count as wins), then the
/// highest mean test SSIM, then the fewest parameters.
Architecture select_architecture(std::span<const ArchitectureScore> scores, int input_dim, int output_dim);

struct GridSearchResult {
    std::vector<ArchitectureScore> scores;
    Architecture best;
};

/// Every depth x width combination at every k with seed 0.
GridSearchResult grid_search(const TrainConfig& base, std::span<const int> depths, std::span<const int> widths,
                             std::span<const int> k_set, const data::Dataset& dataset,
                             const data::SplitSpec& split, int jobs = 1);

struct SweepCell {
    int k = 0;
    std::uint64_t seed = 0;
    ModelKind kind = ModelKind::mlp;
    std::optional<RunResult> result;
    std::string error;  // non-empty iff result is empty
};

struct SweepReport {
    Architecture arch;
    std::vector<SweepCell> cells;
};

struct SweepOptions {
    int jobs = 1;
    /// Keep best-epoch parameters in the report; otherwise they are released
    /// right after on_done has seen them.
    bool keep_checkpoints = false;
    std::function<void(const SweepCell&)> on_done;
};

/// Train + evaluate every (k, seed, kind). Failed runs are recorded, not thrown.
SweepReport sweep(const TrainConfig& base, std::span<const int> k_set, std::span<const std::uint64_t> seeds,
                  std::span<const ModelKind> kinds, const data::Dataset& dataset, const data::SplitSpec& split,
                  const SweepOptions& options = {});

/// One row of the per-run CSV, one per (run, split).
struct RunRow {
    ModelKind kind = ModelKind::mlp;
    int k = 0;
    std::uint64_t seed = 0;
    std::string split;
    double ssim_mean = 0;
    double ssim_std = 0;
    double mse_mean = 0;
    int best_epoch = 0;
};

struct RunTiming {
    ModelKind kind = ModelKind::mlp;
    int k = 0;
    std::uint64_t seed = 0;
    double train_seconds = 0;
};

std::vector<RunRow> run_rows(const SweepReport& report);
std::vector<RunTiming> run_timings(const SweepReport& report);

/// mean +- std of per-seed mean SSIM for one (kind, split, k).
struct Table1Cell {
    ModelKind kind = ModelKind::mlp;
    std::string split;
    int k = 0;
    metrics::MeanStd ssim;
    int runs = 0;
};

std::vector<Table1Cell> table1(std::span<const RunRow> rows);
const Table1Cell* find_cell(std::span<const Table1Cell> cells, ModelKind kind, const std::string& split, int k);

struct TimingRow {
    int k = 0;
    double simulation_hours = 0;
    double training_hours = 0;
    double total_hours = 0;
    double reduction_pct = 0;
};

/// Simulation time k * cost, measured training time, and the saving relative
/// to simulating all total_cases.
TimingRow timing_row(int k, double training_hours, double per_case_cost_hours, int total_cases);

/// Uses the mean measured MLP training time per k.
std::vector<TimingRow> timing_report(std::span<const RunTiming> timings, double per_case_cost_hours,
                                     int total_cases);

void write_runs_csv(const std::filesystem::path& path, std::span<const RunRow> rows, ModelKind kind);
std::vector<RunRow> read_runs_csv(const std::filesystem::path& path, ModelKind kind);
void write_timings_csv(const std::filesystem::path& path, std::span<const RunTiming> timings);
std::vector<RunTiming> read_timings_csv(const std::filesystem::path& path);
void write_table1_csv(const std::filesystem::path& path, std::span<const Table1Cell> cells);
void write_table2_csv(const std::filesystem::path& path, std::span<const TimingRow> rows);

} // namespace surrogate::experiment
