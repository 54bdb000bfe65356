#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sfl/surface.hpp"

namespace sfl {

// A dart is one side-slot of an arc inside a triangle. Internal arcs have two
// sides (0/1); boundary segments have a single side 0.
struct Dart {
    int arc = -1;
    int side = 0;
    bool operator==(const Dart&) const = default;
};

struct ArcInfo {
    std::string label;
    bool boundary = false;
    bool operator==(const ArcInfo&) const = default;
};

// Triangle sides listed anticlockwise; corner[k] is the vertex at the start
// of side[k], so side[k] runs corner[k] -> corner[(k+1)%3].
struct Triangle {
    std::array<Dart, 3> side;
    std::array<int, 3> corner;
    bool operator==(const Triangle&) const = default;
};

struct SelfFolded {
    int folded_arc;        // the self-folded edge (occupies two sides of tri)
    int tri;               // the self-folded triangle
    Dart enclosing;        // the third side (may be a boundary segment)
    int puncture_vertex;   // vertex id of the isolated puncture
};

class Triangulation {
public:
    Triangulation() = default;
    Triangulation(SurfaceSpec spec, std::vector<ArcInfo> arcs,
                  std::vector<Triangle> triangles, std::vector<std::string> vertex_names);

    const SurfaceSpec& spec() const { return spec_; }
    const std::vector<ArcInfo>& arcs() const { return arcs_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<std::string>& vertex_names() const { return vertex_names_; }

    int arc_index(const std::string& label) const; // -1 if unknown
    const std::string& arc_label(int arc) const { return arcs_[arc].label; }
    bool is_internal(int arc) const { return !arcs_[arc].boundary; }
    std::vector<std::string> internal_arc_labels() const;

    // Location of a dart: (triangle, position). Internal arcs have both sides
    // placed, boundary segments only side 0.
    std::pair<int, int> locate(const Dart& d) const;

    bool is_self_folded_edge(int arc) const;
    bool is_self_folded_edge(const std::string& label) const;
    std::vector<SelfFolded> self_folded_triangles() const;
    // Self-folded triangle whose enclosing edge is the given internal arc.
    std::optional<SelfFolded> self_folded_with_enclosing(int arc) const;

    // Punctures enclosed in self-folded triangles.
    std::set<std::string> isolated_punctures() const;
    bool is_admissible() const;

    // Diagonal exchange at a non-self-folded internal arc. The arc label is
    // kept (slot semantics); only the glued geometry changes.
    Triangulation flip(const std::string& arc_label) const;
    Triangulation flip_at(int arc) const;

    // Loop move at a self-folded edge; returns an equal triangulation.
    Triangulation lflip(const std::string& arc_label) const;

    // Relabeling-invariant encoding; boundary segments, marked points and
    // puncture identities are pinned, internal arc labels are not.
    std::string canonical_form() const;

    Diagnostics validate() const;
    void require_valid() const;

    std::string to_json_text() const;
    static Triangulation from_json_text(const std::string& text, const SurfaceSpec& spec);

    bool operator==(const Triangulation& o) const = default;

private:
    SurfaceSpec spec_;
    std::vector<ArcInfo> arcs_;
    std::vector<Triangle> triangles_;
    std::vector<std::string> vertex_names_;
};

class SignedTriangulation {
public:
    SignedTriangulation() = default;
    // Signs are normalized on construction: every vortex enclosed in a
    // self-folded triangle gets sign +1.
    SignedTriangulation(Triangulation base, std::map<std::string, int> sign);

    const Triangulation& base() const { return base_; }
    const std::map<std::string, int>& sign() const { return sign_; }
    int sign_of(const std::string& vortex) const;

    // Flip with the sign carried along with this value's representative.
    // lflips at plain self-folded edges are allowed (identity); at vortices
    // they raise VortexLFlip.
    SignedTriangulation flip(const std::string& arc_label) const;

    // All flip targets from this vertex at the given arc; two results when
    // the flip releases a vortex from its self-folded triangle.
    std::vector<SignedTriangulation> flip_targets(const std::string& arc_label) const;

    // Two successive flips at the enclosing position of a self-folded
    // triangle; keeps the puncture isolated.
    SignedTriangulation diamond_flip(const std::string& enclosing_arc_label) const;

    std::string canonical_form() const;

    bool operator==(const SignedTriangulation& o) const = default;

private:
    Triangulation base_;
    std::map<std::string, int> sign_;
    void normalize();
};

// Deterministic admissible triangulation: fan of the polygon model with each
// puncture isolated in its own self-folded triangle.
Triangulation initial_triangulation(const SurfaceSpec& spec);
SignedTriangulation initial_signed_triangulation(const SurfaceSpec& spec);

} // namespace sfl
