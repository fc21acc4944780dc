// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "vanetsim/montecarlo.hpp"

namespace vanetsim {

/// Minimal line chart of a sweep result: one polyline per scheme, the sweep
/// value on the x axis and mean sum-rate on the y axis.
void write_sweep_svg(const std::vector<AggregatePoint>& rows,
                     const std::string& x_label, const std::string& path);

}  // namespace vanetsim
