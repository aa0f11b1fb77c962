#pragma once

#include "surrogate/cabin/case_spec.hpp"

#include <array>

namespace surrogate::data {

/// Affine map of each variable's fixed domain [lo, hi] onto [-1, 1].
/// Values outside the domain extrapolate linearly.
std::array<double, cabin::CaseSpec::num_variables> normalize_input(const cabin::CaseSpec& c);

} // namespace surrogate::data
