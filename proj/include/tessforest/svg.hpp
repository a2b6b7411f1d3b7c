#pragma once

#include <string>

#include "tessforest/tessellation.hpp"

namespace tessforest {

// Stroke-only rendering of a 2D partition on a box window; one polygon per
// cell, fixed numeric formatting so the same partition always produces the
// same bytes.
std::string render_partition_svg(const Partition& p, double px_per_unit = 256.0);

} // namespace tessforest
