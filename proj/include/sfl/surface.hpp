#pragma once

#include <string>
#include <vector>

#include "sfl/error.hpp"

namespace sfl {

// Numerical data of a marked surface with punctures: genus, boundary
// components with their marked-point counts, and interior punctures split
// into plain ones and vortices (the latter carry Z/2 signs downstream).
struct SurfaceSpec {
    int genus = 0;
    std::vector<int> boundaries;                 // entry j = marked points on boundary j
    std::vector<std::string> plain_punctures;    // sorted, duplicate-free
    std::vector<std::string> vortex_punctures;   // sorted, disjoint from plain

    int boundary_count() const { return static_cast<int>(boundaries.size()); }
    int marked_points() const;
    int puncture_count() const {
        return static_cast<int>(plain_punctures.size() + vortex_punctures.size());
    }
    bool has_vortices() const { return !vortex_punctures.empty(); }
    bool is_plain(const std::string& p) const;
    bool is_vortex(const std::string& p) const;
    std::vector<std::string> all_punctures() const; // plain then vortex, each sorted

    bool operator==(const SurfaceSpec&) const = default;
};

struct Diagnostics {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks every SurfaceSpec invariant and names each violated rule.
Diagnostics validate(const SurfaceSpec& spec);

// Throws InvalidSpec with the first diagnostic if the spec is not valid.
void require_valid(const SurfaceSpec& spec);

// n = 6g + 3p + 3b + m - 6.
int rank_open_arcs(const SurfaceSpec& spec);

// (2n + m) / 3, the number of triangles in any triangulation.
int triangle_count(const SurfaceSpec& spec);

// aleph = 4g + 2p + 2b + m - 4; equal to triangle_count for valid specs.
int decoration_count(const SurfaceSpec& spec);

// rk = 2g + b + p - 1, the number of delta generators of SBr.
int sbr_rank(const SurfaceSpec& spec);

// JSON spec files: {"genus": int, "boundaries": [int...],
// "punctures": {"plain": [...], "vortex": [...]}}. Unknown keys rejected.
SurfaceSpec spec_from_json_text(const std::string& text);
std::string spec_to_json_text(const SurfaceSpec& spec);

// Convenience builders used all over the tests.
SurfaceSpec disk(int m);
SurfaceSpec punctured_disk(int m, int plain, int vortex = 0);
SurfaceSpec annulus(int m1, int m2, int plain = 0, int vortex = 0);

} // namespace sfl
