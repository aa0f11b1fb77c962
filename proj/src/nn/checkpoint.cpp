#include "surrogate/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace surrogate::nn {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'R', 'G', 'T', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kKindMlp = 0;
constexpr std::uint32_t kKindLinear = 1;

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }

    template <typename Derived>
    void tensor(const Eigen::MatrixBase<Derived>& m) {
        u32(static_cast<std::uint32_t>(m.rows()));
        u32(static_cast<std::uint32_t>(m.cols()));
        // Row-major traversal regardless of storage order.
        for (Index r = 0; r < m.rows(); ++r) {
            for (Index c = 0; c < m.cols(); ++c) f64(m(r, c));
        }
    }

    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    void raw(char* out, std::size_t n) {
        need(n);
        std::memcpy(out, bytes_.data() + pos_, n);
        pos_ += n;
    }

    void tensor(Matrix& m, Index rows, Index cols, const std::string& name) {
        const auto r = u32();
        const auto c = u32();
        if (r != rows || c != cols) {
            throw DataError("checkpoint: tensor " + name + " is " + std::to_string(r) + "x" +
                            std::to_string(c) + ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
        }
        m.resize(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) m(i, j) = f64();
        }
    }
    void tensor(Vector& v, Index rows, const std::string& name) {
        Matrix m;
        tensor(m, rows, 1, name);
        v = Eigen::Map<const Vector>(m.data(), rows);
    }

    bool at_end() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw DataError("checkpoint: truncated file");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void write_layers(Writer& w, const std::vector<DenseLayer<double>>& layers) {
    w.u32(static_cast<std::uint32_t>(layers.size() * 2));
    for (const auto& l : layers) {
        w.tensor(l.weights);
        w.tensor(l.bias);
    }
}

} // namespace

Index Checkpoint::input_dim() const {
    return std::visit([](const auto& m) { return m.input_dim(); }, model);
}

Index Checkpoint::output_dim() const {
    return std::visit([](const auto& m) { return m.output_dim(); }, model);
}

Matrix Checkpoint::predict_batch(const Matrix& inputs) const {
    if (const auto* mlp = std::get_if<MlpModel>(&model)) return forward(*mlp, inputs).output();
    return linear_forward(std::get<LinearModel>(model), inputs);
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
    Writer w;
    w.raw(kMagic.data(), kMagic.size());
    w.u32(kVersion);
    if (const auto* mlp = std::get_if<MlpModel>(&ckpt.model)) {
        w.u32(kKindMlp);
        w.u32(static_cast<std::uint32_t>(mlp->depth()));
        w.u32(static_cast<std::uint32_t>(mlp->width()));
        w.u32(static_cast<std::uint32_t>(mlp->input_dim()));
        w.u32(static_cast<std::uint32_t>(mlp->output_dim()));
        w.u64(ckpt.config_hash);
        write_layers(w, mlp->layers);
    } else {
        const auto& lin = std::get<LinearModel>(ckpt.model);
        w.u32(kKindLinear);
        w.u32(1);
        w.u32(0);
        w.u32(static_cast<std::uint32_t>(lin.input_dim()));
        w.u32(static_cast<std::uint32_t>(lin.output_dim()));
        w.u64(ckpt.config_hash);
        write_layers(w, {lin.affine});
    }
    return w.take();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    std::array<char, 8> magic{};
    r.raw(magic.data(), magic.size());
    if (magic != kMagic) throw DataError("checkpoint: bad magic");
    if (const auto version = r.u32(); version != kVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    const auto kind = r.u32();
    const auto depth = static_cast<Index>(r.u32());
    const auto width = static_cast<Index>(r.u32());
    const auto input_dim = static_cast<Index>(r.u32());
    const auto output_dim = static_cast<Index>(r.u32());
    Checkpoint ckpt;
    ckpt.config_hash = r.u64();
    const auto tensors = static_cast<Index>(r.u32());

    if (kind == kKindMlp) {
        if (depth < 2 || width < 1 || input_dim < 1 || output_dim < 1 || tensors != 2 * depth) {
            throw DataError("checkpoint: inconsistent MLP header");
        }
        MlpModel mlp;
        for (Index i = 0; i < depth; ++i) {
            const Index in = i == 0 ? input_dim : width;
            const Index out = i == depth - 1 ? output_dim : width;
            DenseLayer<double> layer;
            const auto name = "layer" + std::to_string(i);
            r.tensor(layer.weights, out, in, name + ".weights");
            r.tensor(layer.bias, out, name + ".bias");
            mlp.layers.push_back(std::move(layer));
        }
        ckpt.model = std::move(mlp);
    } else if (kind == kKindLinear) {
        if (depth != 1 || input_dim < 1 || output_dim < 1 || tensors != 2) {
            throw DataError("checkpoint: inconsistent linear header");
        }
        LinearModel lin;
        r.tensor(lin.affine.weights, output_dim, input_dim, "linear.weights");
        r.tensor(lin.affine.bias, output_dim, "linear.bias");
        ckpt.model = std::move(lin);
    } else {
        throw DataError("checkpoint: unknown model kind " + std::to_string(kind));
    }
    if (!r.at_end()) throw DataError("checkpoint: trailing bytes");
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    const auto bytes = encode_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read checkpoint " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

} // namespace surrogate::nn
