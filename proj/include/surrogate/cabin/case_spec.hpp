#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace surrogate::cabin {

/// Operating conditions of one cabin case.
struct CaseSpec {
    double solar_load = 0;      // W/m^2
    double sun_altitude = 0;    // degrees
    double sun_azimuth = 0;     // degrees
    double discharge_temp = 0;  // deg C
    double flow_rate = 0;       // CFM
    double ambient_temp = 0;    // deg C

    static constexpr std::size_t num_variables = 6;

    std::array<double, num_variables> values() const {
        return {solar_load, sun_altitude, sun_azimuth, discharge_temp, flow_rate, ambient_temp};
    }
    static CaseSpec from_values(std::span<const double, num_variables> v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }

    bool operator==(const CaseSpec&) const = default;
};

/// Discrete domain of every variable, ascending, in CaseSpec field order.
inline const std::array<std::vector<double>, CaseSpec::num_variables>& variable_domains() {
    static const std::array<std::vector<double>, CaseSpec::num_variables> domains = {{
        {500, 600, 700, 800, 900, 1000},
        {45, 90},
        {-90, 90},
        {5, 10, 15},
        {50, 100, 150, 200, 250, 300},
        {20, 25, 30, 35, 40},
    }};
    return domains;
}

inline constexpr std::array<const char*, CaseSpec::num_variables> variable_names = {
    "solar_load", "sun_altitude", "sun_azimuth", "discharge_temp", "flow_rate", "ambient_temp"};

/// Full Cartesian product of the domains. The first variable varies slowest,
/// so case_id i is the i-th tuple in lexicographic order.
std::vector<CaseSpec> enumerate_cases();

/// Parses "S,alt,az,Tdis,Q,Tamb". Throws ConfigError on malformed input.
CaseSpec parse_case(const std::string& text);

} // namespace surrogate::cabin
