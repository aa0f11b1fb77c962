#include "surrogate/experiment/config.hpp"
#include "surrogate/error.hpp"
#include "surrogate/util/hash.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace surrogate::experiment {

const char* to_string(ModelKind kind) { return kind == ModelKind::mlp ? "mlp" : "linear"; }
const char* to_string(Precision precision) { return precision == Precision::f64 ? "f64" : "f32"; }

ModelKind parse_model_kind(std::string_view text) {
    if (text == "mlp") return ModelKind::mlp;
    if (text == "linear") return ModelKind::linear;
    throw ConfigError("unknown model kind '" + std::string(text) + "' (expected mlp or linear)");
}

Precision parse_precision(std::string_view text) {
    if (text == "f64") return Precision::f64;
    if (text == "f32") return Precision::f32;
    throw ConfigError("unknown precision '" + std::string(text) + "' (expected f64 or f32)");
}

TrainConfig TrainConfig::full_scale() {
    TrainConfig c;
    c.max_epochs = 2000;
    c.eval_every = 1;
    return c;
}

SweepSettings SweepSettings::full_scale() {
    SweepSettings s;
    s.k_set = {50, 100, 150, 200, 500, 1000, 1500, 2000};
    s.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    return s;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0)) throw ConfigError("learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
    if (kind == ModelKind::mlp && (depth < 2 || width < 1)) {
        throw ConfigError("mlp needs depth >= 2 and width >= 1");
    }
}

std::string TrainConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "learning_rate=" << learning_rate << ";batch_size=" << batch_size << ";max_epochs=" << max_epochs
       << ";k=" << k << ";seed=" << seed << ";depth=" << depth << ";width=" << width
       << ";eval_every=" << eval_every << ";kind=" << to_string(kind) << ";precision=" << to_string(precision);
    return os.str();
}

std::uint64_t TrainConfig::hash() const { return fnv1a64(canonical()); }

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
    Int v{};
    const auto* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return v;
}

double parse_double(std::string_view key, std::string_view value) {
    double v{};
    const auto* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

template <typename Int>
std::vector<Int> parse_list(std::string_view key, std::string_view value) {
    std::vector<Int> out;
    while (true) {
        const auto comma = value.find(',');
        out.push_back(parse_int<Int>(key, trim(value.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    auto& t = cfg.train;
    auto& s = cfg.sweep;
    if (key == "learning_rate") t.learning_rate = parse_double(key, value);
    else if (key == "batch_size") t.batch_size = parse_int<int>(key, value);
    else if (key == "max_epochs") t.max_epochs = parse_int<int>(key, value);
    else if (key == "k") t.k = parse_int<int>(key, value);
    else if (key == "seed") t.seed = parse_int<std::uint64_t>(key, value);
    else if (key == "depth") t.depth = parse_int<int>(key, value);
    else if (key == "width") t.width = parse_int<int>(key, value);
    else if (key == "eval_every") t.eval_every = parse_int<int>(key, value);
    else if (key == "kind") t.kind = parse_model_kind(value);
    else if (key == "precision") t.precision = parse_precision(value);
    else if (key == "k_set") s.k_set = parse_list<int>(key, value);
    else if (key == "seeds") s.seeds = parse_list<std::uint64_t>(key, value);
    else if (key == "depths") s.depths = parse_list<int>(key, value);
    else if (key == "widths") s.widths = parse_list<int>(key, value);
    else if (key == "jobs") s.jobs = parse_int<int>(key, value);
    else if (key == "per_case_cost_hours") s.per_case_cost_hours = parse_double(key, value);
    else if (key == "grid_search") s.grid_search = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        ++line_no;
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

} // namespace surrogate::experiment
