#pragma once

#include "surrogate/cabin/case_spec.hpp"
#include "surrogate/cabin/image.hpp"

#include <string_view>
#include <vector>

namespace surrogate::cabin {

inline constexpr std::string_view oracle_version = "gaussian-jets-solar-bump/1";
inline constexpr int default_grid_width = 96;
inline constexpr int default_grid_height = 64;
inline constexpr int min_grid_size = 16;
inline constexpr int border_width = 3;
inline constexpr double border_temperature = 0.0;
inline constexpr double color_scale_min = 0.0;
inline constexpr double color_scale_max = 60.0;

/// Steady-state temperature field on a pixel grid, row-major deg C.
struct FieldGrid {
    int width = 0;
    int height = 0;
    std::vector<double> temps;

    double at(int row, int col) const { return temps[static_cast<std::size_t>(row) * width + col]; }
};

inline bool is_border_pixel(int row, int col, int width, int height) {
    return row < border_width || col < border_width || row >= height - border_width ||
           col >= width - border_width;
}

/// Synthetic cabin field: two vent jets mixing toward the discharge
/// temperature, a solar hot spot, ambient elsewhere, and a constant border.
FieldGrid synth_field(const CaseSpec& c, int width = default_grid_width,
                      int height = default_grid_height);

/// Maps [0, 60] deg C onto 0..255, clamping outside.
Image8 render(const FieldGrid& field);

/// Byte value of one temperature on the fixed color scale.
std::uint8_t temperature_to_pixel(double temp);

} // namespace surrogate::cabin
