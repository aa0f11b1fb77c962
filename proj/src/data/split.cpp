#include "surrogate/data/split.hpp"
#include "surrogate/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace surrogate::data {

SplitSizes default_split_sizes(std::size_t num_cases) {
    const auto part = [&](double n) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(num_cases) * n / 2160.0));
    };
    SplitSizes s;
    s.val = part(80);
    s.test = part(80);
    s.train = num_cases - s.val - s.test;
    return s;
}

bool covers_all_values(std::span<const cabin::CaseSpec> cases, std::span<const int> ids) {
    for (std::size_t var = 0; var < cabin::CaseSpec::num_variables; ++var) {
        std::set<double> all;
        for (const auto& c : cases) all.insert(c.values()[var]);
        std::set<double> seen;
        for (int id : ids) seen.insert(cases[static_cast<std::size_t>(id)].values()[var]);
        if (seen != all) return false;
    }
    return true;
}

SplitSpec split_cases(std::span<const cabin::CaseSpec> cases, std::uint64_t seed,
                      std::optional<SplitSizes> sizes, int max_retries) {
    if (cases.empty()) throw ConfigError("split_cases: empty case list");
    const SplitSizes s = sizes.value_or(default_split_sizes(cases.size()));
    if (s.train + s.val + s.test > cases.size()) {
        throw ConfigError("split_cases: split sizes " + std::to_string(s.train) + "/" +
                          std::to_string(s.val) + "/" + std::to_string(s.test) + " exceed " +
                          std::to_string(cases.size()) + " cases");
    }

    std::vector<int> ids(cases.size());
    for (int retry = 0; retry <= max_retries; ++retry) {
        std::iota(ids.begin(), ids.end(), 0);
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(retry));
        std::shuffle(ids.begin(), ids.end(), rng);

        SplitSpec split;
        split.seed = seed;
        split.retries = retry;
        auto it = ids.begin();
        split.train_ids.assign(it, it + static_cast<std::ptrdiff_t>(s.train));
        it += static_cast<std::ptrdiff_t>(s.train);
        split.val_ids.assign(it, it + static_cast<std::ptrdiff_t>(s.val));
        it += static_cast<std::ptrdiff_t>(s.val);
        split.test_ids.assign(it, it + static_cast<std::ptrdiff_t>(s.test));

        if (covers_all_values(cases, split.train_ids) && covers_all_values(cases, split.val_ids) &&
            covers_all_values(cases, split.test_ids)) {
            return split;
        }
    }
    throw ConfigError("split_cases: no split covering every variable value after " +
                      std::to_string(max_retries) + " retries");
}

std::vector<int> sample_first_k(const SplitSpec& split, std::uint64_t seed, std::size_t k) {
    if (k > split.train_ids.size()) {
        throw ConfigError("sample_first_k: k = " + std::to_string(k) + " exceeds training set of " +
                          std::to_string(split.train_ids.size()));
    }
    std::vector<int> ids = split.train_ids;
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(k);
    return ids;
}

void save_split(const std::filesystem::path& dir, const SplitSpec& split) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "split.txt", std::ios::trunc);
        if (!out) throw DataError("cannot write " + (dir / "split.txt").string());
        out << "seed " << split.seed << "\nretries " << split.retries << '\n';
    }
    std::ofstream out(dir / "split.csv", std::ios::trunc);
    if (!out) throw DataError("cannot write " + (dir / "split.csv").string());
    out << "case_id,split\n";
    for (int id : split.train_ids) out << id << ",train\n";
    for (int id : split.val_ids) out << id << ",val\n";
    for (int id : split.test_ids) out << id << ",test\n";
}

SplitSpec load_split(const std::filesystem::path& dir) {
    SplitSpec split;
    {
        std::ifstream in(dir / "split.txt");
        std::string k1, k2;
        if (!in || !(in >> k1 >> split.seed >> k2 >> split.retries) || k1 != "seed" || k2 != "retries") {
            throw DataError("cannot read " + (dir / "split.txt").string());
        }
    }
    std::ifstream in(dir / "split.csv");
    if (!in) throw DataError("cannot read " + (dir / "split.csv").string());
    std::string line;
    std::getline(in, line);
    if (line != "case_id,split") throw DataError("split.csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("split.csv: bad line '" + line + "'");
        int id = 0;
        try {
            id = std::stoi(line.substr(0, comma));
        } catch (const std::exception&) {
            throw DataError("split.csv: bad case id in '" + line + "'");
        }
        const auto which = line.substr(comma + 1);
        if (which == "train") split.train_ids.push_back(id);
        else if (which == "val") split.val_ids.push_back(id);
        else if (which == "test") split.test_ids.push_back(id);
        else throw DataError("split.csv: unknown split '" + which + "'");
    }
    return split;
}

} // namespace surrogate::data
