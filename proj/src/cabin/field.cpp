#include "surrogate/cabin/field.hpp"
#include "surrogate/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace surrogate::cabin {

namespace {

struct Vent {
    double u;
    double v;
};

constexpr Vent kVents[] = {{0.25, 0.12}, {0.75, 0.12}};
constexpr double kMaxFlow = 300.0;
constexpr double kSolarSigma = 0.12;
constexpr double kSolarPeak = 15.0;  // deg C at 1000 W/m^2, sun overhead

} // namespace

FieldGrid synth_field(const CaseSpec& c, int width, int height) {
    if (width < min_grid_size || height < min_grid_size) {
        throw ConfigError("synth_field: grid must be at least 16x16, got " + std::to_string(width) +
                          "x" + std::to_string(height));
    }
    const double q = c.flow_rate / kMaxFlow;
    const double sigma_u = 0.06 + 0.10 * q;
    const double sigma_v = 0.18 + 0.25 * q;
    const double sun_u = 0.5 + 0.3 * (c.sun_azimuth / 90.0);
    const double sun_v = 0.35 + 0.3 * (1.0 - c.sun_altitude / 90.0);
    const double sun_dt =
        kSolarPeak * (c.solar_load / 1000.0) * std::sin(c.sun_altitude * std::numbers::pi / 180.0);

    FieldGrid f{width, height, std::vector<double>(static_cast<std::size_t>(width) * height)};
    for (int y = 0; y < height; ++y) {
        const double v = (y + 0.5) / height;
        for (int x = 0; x < width; ++x) {
            double& t = f.temps[static_cast<std::size_t>(y) * width + x];
            if (is_border_pixel(y, x, width, height)) {
                t = border_temperature;
                continue;
            }
            const double u = (x + 0.5) / width;
            double w_jet = 0.0;
            for (const auto& vent : kVents) {
                const double du = u - vent.u;
                const double dv = v - vent.v;
                w_jet += q * std::exp(-(du * du / (2 * sigma_u * sigma_u) + dv * dv / (2 * sigma_v * sigma_v)));
            }
            w_jet = std::min(1.0, w_jet);
            const double su = u - sun_u;
            const double sv = v - sun_v;
            const double bump = sun_dt * std::exp(-(su * su + sv * sv) / (2 * kSolarSigma * kSolarSigma));
            t = c.ambient_temp + (c.discharge_temp - c.ambient_temp) * w_jet + bump * (1.0 - w_jet);
        }
    }
    return f;
}

std::uint8_t temperature_to_pixel(double temp) {
    const double clamped = std::clamp(temp, color_scale_min, color_scale_max);
    return static_cast<std::uint8_t>(
        std::lround((clamped - color_scale_min) / (color_scale_max - color_scale_min) * 255.0));
}

Image8 render(const FieldGrid& field) {
    Image8 img(field.width, field.height);
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            img.at(y, x) = is_border_pixel(y, x, field.width, field.height)
                               ? std::uint8_t{0}
                               : temperature_to_pixel(field.at(y, x));
        }
    }
    return img;
}

} // namespace surrogate::cabin
