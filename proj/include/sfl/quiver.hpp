#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfl/triangulation.hpp"

namespace sfl {

struct QPArrow {
    int src = -1;
    int dst = -1;
    bool operator==(const QPArrow&) const = default;
};

// Cyclic word of arrow ids in diagram order: arrows[i].dst == arrows[i+1].src.
struct PotentialTerm {
    int coeff = 0;
    std::vector<int> arrows;
    bool operator==(const PotentialTerm&) const = default;
};

struct QuiverWithPotential {
    std::vector<std::string> vertices;
    std::vector<QPArrow> arrows;         // arrow id = index
    std::vector<PotentialTerm> potential;
    bool reduced = false;
    std::vector<std::string> notes;      // review flags (not part of equality)

    int vertex_index(const std::string& label) const;
    int loops_at(int v) const;
    int arrow_count(int src, int dst) const;
    bool has_two_cycle_through(int v) const;
    int two_cycle_count() const;

    // Canonical rotation of every term, merged duplicates, sorted terms.
    void canonicalize();
    void check_well_formed() const;
};

QuiverWithPotential qp_from_triangulation(const Triangulation& t);

// Signed construction: twin arrows at vortex self-folded triangles, W_T terms
// with twin replacements, minus the W_V fan cycles; reduced before returning.
QuiverWithPotential qp_from_signed(const SignedTriangulation& st);

// Same construction on an explicit, possibly non-normalized sign map; only
// the W_V twin-skipping rule reads the signs.
QuiverWithPotential qp_from_signed_raw(const Triangulation& t,
                                       const std::map<std::string, int>& sign);
QuiverWithPotential unreduced_qp_from_signed_raw(const Triangulation& t,
                                                 const std::map<std::string, int>& sign);

// Kills +-1 coefficient 2-cycles of the potential by the trivial-part
// splitting; idempotent. NonUnitQuadraticTerm outside that class.
QuiverWithPotential reduce(const QuiverWithPotential& qp);

// DWZ premutation at the vertex followed by reduce. UndefinedMutation at
// vertices carrying loops or 2-cycles.
QuiverWithPotential mutate(const QuiverWithPotential& qp, const std::string& vertex);

// Vertex bijection matching arrow multiplicities; first one found in a
// deterministic backtracking order, or nullopt.
std::optional<std::vector<int>> quiver_iso(const QuiverWithPotential& a,
                                           const QuiverWithPotential& b);

// Equality up to arrow relabeling with the identity vertex map.
bool same_up_to_arrow_relabeling(const QuiverWithPotential& a, const QuiverWithPotential& b);

struct GradedArrow {
    int src = -1;
    int dst = -1;
    int degree = 1;
    bool operator==(const GradedArrow&) const = default;
};

struct GradedQuiver {
    std::vector<std::string> vertices;
    std::vector<GradedArrow> arrows;
};

// Degree-1 input arrows plus one reversed degree-2 arrow each and one
// degree-3 loop per vertex.
GradedQuiver cy3_double(const QuiverWithPotential& q);

std::string qp_to_json_text(const QuiverWithPotential& qp);
QuiverWithPotential qp_from_json_text(const std::string& text);

} // namespace sfl
