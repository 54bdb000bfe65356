#pragma once

#include <set>
#include <string>
#include <vector>

#include "sfl/triangulation.hpp"

namespace sfl::oracle {

// Enumerates the triangulations of a convex polygon with m labeled boundary
// vertices as explicit non-crossing diagonal sets and returns how many there
// are. Independent of the flip machinery.
long long polygon_triangulation_count(int m);

// Exhaustive gluing enumeration of all combinatorial triangulations of the
// spec (boundary segments pinned), deduplicated by canonical form. Supports
// at most one puncture.
std::vector<Triangulation> all_triangulations(const SurfaceSpec& spec);

std::set<std::string> canonical_keys(const std::vector<Triangulation>& ts);

} // namespace sfl::oracle
