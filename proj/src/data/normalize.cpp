#include "surrogate/data/normalize.hpp"

namespace surrogate::data {

std::array<double, cabin::CaseSpec::num_variables> normalize_input(const cabin::CaseSpec& c) {
    const auto& domains = cabin::variable_domains();
    const auto raw = c.values();
    std::array<double, cabin::CaseSpec::num_variables> out{};
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double lo = domains[i].front();
        const double hi = domains[i].back();
        out[i] = 2.0 * (raw[i] - lo) / (hi - lo) - 1.0;
    }
    return out;
}

} // namespace surrogate::data
