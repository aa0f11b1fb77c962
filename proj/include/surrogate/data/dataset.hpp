#pragma once

#include "surrogate/cabin/case_spec.hpp"
#include "surrogate/cabin/image.hpp"
#include "surrogate/data/split.hpp"
#include "surrogate/data/target_pixels.hpp"
#include "surrogate/nn/tensor.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace surrogate::data {

/// Every case of the grid with its rendered ground-truth image.
struct Corpus {
    std::vector<cabin::CaseSpec> cases;
    std::vector<Image8> images;

    int width() const { return images.empty() ? 0 : images.front().width; }
    int height() const { return images.empty() ? 0 : images.front().height; }
};

/// Synthesizes and renders the full case grid in memory.
Corpus generate_corpus(int width, int height);

/// Writes cases.csv, images/case_NNNN.pgm and manifest.txt under dir.
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus, std::uint64_t seed);
Corpus read_corpus(const std::filesystem::path& dir);

/// Corpus plus its target-pixel map; immutable once built.
struct Dataset {
    Corpus corpus;
    TargetPixelMap map;

    Dataset() = default;
    Dataset(Corpus c, TargetPixelMap m);

    std::size_t num_targets() const { return map.size(); }

    /// Normalized inputs, one row per id.
    nn::Matrix inputs(std::span<const int> ids) const;
    /// Target pixel intensities in [0, 1], one row per id.
    nn::Matrix targets(std::span<const int> ids) const;
};

/// Builds the map from the corpus itself.
Dataset make_dataset(Corpus corpus);

} // namespace surrogate::data
