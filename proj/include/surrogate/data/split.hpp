#pragma once

#include "surrogate/cabin/case_spec.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace surrogate::data {

struct SplitSizes {
    std::size_t train = 0;
    std::size_t val = 0;
    std::size_t test = 0;
};

/// 2000/80/80 on the 2160-case grid, the same proportions otherwise.
SplitSizes default_split_sizes(std::size_t num_cases);

/// Disjoint train/val/test case ids.
struct SplitSpec {
    std::vector<int> train_ids;
    std::vector<int> val_ids;
    std::vector<int> test_ids;
    std::uint64_t seed = 0;
    /// Number of re-draws needed before every split covered every variable value.
    int retries = 0;
};

/// True if every variable attains each of its values (as seen in `cases`)
/// within the given ids.
bool covers_all_values(std::span<const cabin::CaseSpec> cases, std::span<const int> ids);

/// Seeded shuffle then partition. If a split misses any variable value the
/// draw is repeated with seed + retry, up to max_retries.
SplitSpec split_cases(std::span<const cabin::CaseSpec> cases, std::uint64_t seed,
                      std::optional<SplitSizes> sizes = std::nullopt, int max_retries = 1000);

/// First k ids of the training list shuffled with `seed`. Prefixes are nested
/// in k for a fixed seed.
std::vector<int> sample_first_k(const SplitSpec& split, std::uint64_t seed, std::size_t k);

/// split.csv (`case_id,split`) plus split.txt (seed, retries).
void save_split(const std::filesystem::path& dir, const SplitSpec& split);
SplitSpec load_split(const std::filesystem::path& dir);

} // namespace surrogate::data
