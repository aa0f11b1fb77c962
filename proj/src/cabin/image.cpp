#include "surrogate/cabin/image.hpp"
#include "surrogate/error.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace surrogate::cabin {

void write_pgm(const std::filesystem::path& path, const Image8& img) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in, const std::filesystem::path& path) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    if (tok.empty()) throw DataError(path.string() + ": truncated PGM header");
    return tok;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
    const auto tok = header_token(in, path);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw DataError(path.string() + ": bad PGM header field '" + tok + "'");
    }
}

} // namespace

Image8 read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    if (header_token(in, path) != "P5") throw DataError(path.string() + ": not a binary PGM (P5)");
    const int w = header_int(in, path);
    const int h = header_int(in, path);
    const int maxval = header_int(in, path);
    if (w <= 0 || h <= 0) throw DataError(path.string() + ": invalid PGM dimensions");
    if (maxval != 255) throw DataError(path.string() + ": only maxval 255 is supported");
    // header_token consumed exactly one whitespace byte after maxval.
    Image8 img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw DataError(path.string() + ": truncated PGM pixel data");
    }
    return img;
}

} // namespace surrogate::cabin
