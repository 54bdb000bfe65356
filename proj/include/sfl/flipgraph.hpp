#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sfl/triangulation.hpp"

namespace sfl {

enum class GraphMode { undecorated, signed_mode };
enum class EdgeKind { flip, lflip };

struct FlipEdge {
    int src = -1;
    int dst = -1;
    std::string arc;   // slot label of the flipped arc
    EdgeKind kind = EdgeKind::flip;
    bool operator==(const FlipEdge&) const = default;
};

struct FlipGraph {
    GraphMode mode = GraphMode::undecorated;
    std::vector<std::string> keys;                    // canonical encodings, index = vertex id
    std::vector<SignedTriangulation> reps;            // representative per vertex
    std::vector<FlipEdge> edges;                      // sorted (src, arc, kind, dst)
    bool complete = false;
    bool truncated = false;

    int vertex_count() const { return static_cast<int>(keys.size()); }
    const Triangulation& rep(int v) const { return reps[static_cast<size_t>(v)].base(); }

    std::vector<int> out_edges(int v) const;          // edge indices from v
    std::vector<int> in_degree_table() const;
    // Unique target of the (arc, kind) move from v; -1 if absent/ambiguous.
    int step(int v, const std::string& arc, EdgeKind kind) const;
    // All targets (sign branches can make two).
    std::vector<int> step_targets(int v, const std::string& arc, EdgeKind kind) const;
    int loop_count(int v) const;
};

// BFS enumeration from the initial triangulation with canonical dedup.
// threads <= 0 reads SFL_THREADS (default 1). The result is deterministic
// regardless of thread count.
FlipGraph build(const SurfaceSpec& spec, GraphMode mode, std::size_t max_vertices = 1000000,
                int threads = 0);

struct UnorientedGraph {
    std::vector<std::string> keys;
    std::vector<std::pair<int, int>> edges; // src < dst, sorted, deduplicated
};

// Loops removed, 2-cycles collapsed to one unoriented edge.
UnorientedGraph to_unoriented(const FlipGraph& fg);

// Direct unoriented BFS (no loop edges), for cross-checking to_unoriented.
UnorientedGraph build_unoriented(const SurfaceSpec& spec, GraphMode mode,
                                 std::size_t max_vertices = 1000000);

struct RelationStat {
    long long found = 0;
    long long verified = 0;
    std::vector<std::string> counterexamples;
};

struct RelationReport {
    std::map<std::string, RelationStat> by_kind; // square, pentagon, fat-db, thin-db, sym-hex, br4
    bool all_verified() const;
    std::string summary() const;
};

// Endpoint-closure checks for the square/pentagon, fat dumbbell, thin
// dumbbell and symmetric hexagon configurations over a complete graph.
RelationReport verify_relations(const FlipGraph& fg);

// Br^4 assembly: s.u.u.s.u.u and u.u.s.u.u.s loops at every self-folded
// configuration plus endpoint consistency of the rewrite chain.
RelationReport verify_br4_assembly(const FlipGraph& fg);

std::string export_dot(const FlipGraph& fg);
std::string export_json(const FlipGraph& fg);
FlipGraph import_json(const std::string& text, const SurfaceSpec& spec);

} // namespace sfl
