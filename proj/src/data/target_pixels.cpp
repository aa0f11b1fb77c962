#include "surrogate/data/target_pixels.hpp"
#include "surrogate/error.hpp"
#include "surrogate/util/hash.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace surrogate::data {

std::uint64_t hash_image_stack(std::span<const Image8> stack) {
    Fnv1a64 h;
    for (const auto& img : stack) {
        h.update(std::to_string(img.width) + "x" + std::to_string(img.height) + ";");
        h.update(img.pixels);
    }
    return h.digest();
}

TargetPixelMap extract_target_pixels(std::span<const Image8> stack) {
    if (stack.size() < 2) {
        throw ConfigError("extract_target_pixels: need at least 2 images, got " +
                          std::to_string(stack.size()));
    }
    const Image8& first = stack.front();
    for (const auto& img : stack) {
        if (!img.same_shape(first)) throw ShapeError("extract_target_pixels: mixed image dimensions");
    }

    std::vector<std::uint8_t> lo = first.pixels;
    std::vector<std::uint8_t> hi = first.pixels;
    for (const auto& img : stack.subspan(1)) {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            lo[i] = std::min(lo[i], img.pixels[i]);
            hi[i] = std::max(hi[i], img.pixels[i]);
        }
    }

    TargetPixelMap map;
    map.background = Image8(first.width, first.height);
    for (int r = 0; r < first.height; ++r) {
        for (int c = 0; c < first.width; ++c) {
            const auto i = static_cast<std::size_t>(r) * first.width + c;
            if (hi[i] > lo[i]) {
                map.coords.push_back({r, c});
            } else {
                map.background.at(r, c) = lo[i];
            }
        }
    }
    map.source_hash = hash_image_stack(stack);
    return map;
}

std::vector<double> targets_from_image(const Image8& img, const TargetPixelMap& map) {
    if (!img.same_shape(map.background)) {
        throw ShapeError("targets_from_image: image is " + std::to_string(img.width) + "x" +
                         std::to_string(img.height) + ", map is " + std::to_string(map.width()) + "x" +
                         std::to_string(map.height()));
    }
    std::vector<double> out;
    out.reserve(map.coords.size());
    for (const auto& p : map.coords) out.push_back(img.at(p.row, p.col) / 255.0);
    return out;
}

Image8 restore(std::span<const double> values, const TargetPixelMap& map) {
    if (values.size() != map.coords.size()) {
        throw ShapeError("restore: got " + std::to_string(values.size()) + " values for " +
                         std::to_string(map.coords.size()) + " target pixels");
    }
    Image8 img = map.background;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double v = std::isnan(values[j]) ? 0.0 : std::clamp(values[j], 0.0, 1.0);
        img.at(map.coords[j].row, map.coords[j].col) = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return img;
}

void save_target_map(const std::filesystem::path& dir, const TargetPixelMap& map) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "map.txt", std::ios::trunc);
        if (!out) throw DataError("cannot write " + (dir / "map.txt").string());
        out << map.width() << ' ' << map.height() << ' ' << map.coords.size() << ' ' << std::hex
            << std::setw(16) << std::setfill('0') << map.source_hash << '\n';
    }
    {
        std::ofstream out(dir / "coords.csv", std::ios::trunc);
        if (!out) throw DataError("cannot write " + (dir / "coords.csv").string());
        out << "row,col\n";
        for (const auto& p : map.coords) out << p.row << ',' << p.col << '\n';
    }
    cabin::write_pgm(dir / "background.pgm", map.background);
}

TargetPixelMap load_target_map(const std::filesystem::path& dir) {
    TargetPixelMap map;
    int w = 0, h = 0;
    std::size_t count = 0;
    {
        std::ifstream in(dir / "map.txt");
        if (!in) throw DataError("cannot read " + (dir / "map.txt").string());
        std::string hash;
        if (!(in >> w >> h >> count >> hash)) throw DataError("malformed map.txt in " + dir.string());
        try {
            map.source_hash = std::stoull(hash, nullptr, 16);
        } catch (const std::exception&) {
            throw DataError("malformed source hash in map.txt");
        }
    }
    map.background = cabin::read_pgm(dir / "background.pgm");
    if (map.background.width != w || map.background.height != h) {
        throw DataError("background.pgm does not match map.txt dimensions");
    }
    std::ifstream in(dir / "coords.csv");
    if (!in) throw DataError("cannot read " + (dir / "coords.csv").string());
    std::string line;
    std::getline(in, line);
    if (line != "row,col") throw DataError("coords.csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        PixelCoord p;
        char comma = 0;
        std::istringstream ls(line);
        if (!(ls >> p.row >> comma >> p.col) || comma != ',' || p.row < 0 || p.col < 0 || p.row >= h ||
            p.col >= w) {
            throw DataError("coords.csv: bad line '" + line + "'");
        }
        if (!map.coords.empty()) {
            const auto& q = map.coords.back();
            if (p.row < q.row || (p.row == q.row && p.col <= q.col)) {
                throw DataError("coords.csv: coordinates not strictly increasing in scan order");
            }
        }
        map.coords.push_back(p);
    }
    if (map.coords.size() != count) throw DataError("coords.csv: count disagrees with map.txt");
    return map;
}

} // namespace surrogate::data
