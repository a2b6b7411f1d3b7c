#pragma once

#include <string>

#include "json.hpp"
#include "tessforest/forest.hpp"

namespace tessforest {

using Json = nlohmann::json;

// Bumped when any on-disk schema changes; embedded in every artifact.
inline constexpr const char* kFormatVersion = "1";

Json window_to_json(const Window& w);
Window window_from_json(const Json& j);

Json phi_to_json(const DirectionalDistribution& phi);
DirectionalDistribution phi_from_json(const Json& j);

// Partition document: window, phi spec, lambda and the cut structure
// (STIT: flat node array with times; PHT: hyperplane list). Cells are not
// stored; they are replayed deterministically on load, so behavior is
// bit-exact for a fixed format version.
Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j);

Json forest_to_json(const ForestModel& m);
ForestModel forest_from_json(const Json& j);

// CSV with header x1..xd,y.
std::string dataset_to_csv(const Dataset& d);
Dataset dataset_from_csv(const std::string& text, const Window& window);

// CSV with header x1..xd (a trailing y column, if present, is ignored).
std::vector<Vec> points_from_csv(const std::string& text, int dim);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace tessforest
