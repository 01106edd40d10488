#pragma once

#include <vector>

namespace imdp {

/// Tarjan's algorithm without recursion. Returns a component id per vertex.
std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adj);

}  // namespace imdp
