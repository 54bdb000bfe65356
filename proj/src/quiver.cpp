#include "sfl/quiver.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sfl {

int QuiverWithPotential::vertex_index(const std::string& label) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == label) return static_cast<int>(i);
    return -1;
}

int QuiverWithPotential::loops_at(int v) const {
    int c = 0;
    for (const auto& a : arrows)
        if (a.src == v && a.dst == v) c++;
    return c;
}

int QuiverWithPotential::arrow_count(int src, int dst) const {
    int c = 0;
    for (const auto& a : arrows)
        if (a.src == src && a.dst == dst) c++;
    return c;
}

bool QuiverWithPotential::has_two_cycle_through(int v) const {
    for (size_t w = 0; w < vertices.size(); ++w) {
        if (static_cast<int>(w) == v) continue;
        if (arrow_count(v, static_cast<int>(w)) > 0 && arrow_count(static_cast<int>(w), v) > 0)
            return true;
    }
    return false;
}

int QuiverWithPotential::two_cycle_count() const {
    int c = 0;
    for (size_t v = 0; v < vertices.size(); ++v)
        for (size_t w = v + 1; w < vertices.size(); ++w)
            c += std::min(arrow_count(static_cast<int>(v), static_cast<int>(w)),
                          arrow_count(static_cast<int>(w), static_cast<int>(v)));
    return c;
}

static std::vector<int> min_rotation(const std::vector<int>& w) {
    std::vector<int> best = w;
    std::vector<int> cur = w;
    for (size_t r = 1; r < w.size(); ++r) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

void QuiverWithPotential::canonicalize() {
    for (auto& t : potential) t.arrows = min_rotation(t.arrows);
    std::sort(potential.begin(), potential.end(),
              [](const PotentialTerm& a, const PotentialTerm& b) { return a.arrows < b.arrows; });
    std::vector<PotentialTerm> merged;
    for (const auto& t : potential) {
        if (!merged.empty() && merged.back().arrows == t.arrows) merged.back().coeff += t.coeff;
        else merged.push_back(t);
    }
    potential.clear();
    for (auto& t : merged)
        if (t.coeff != 0) potential.push_back(t);
}

void QuiverWithPotential::check_well_formed() const {
    for (const auto& a : arrows)
        if (a.src < 0 || a.dst < 0 || a.src >= static_cast<int>(vertices.size()) ||
            a.dst >= static_cast<int>(vertices.size()))
            fail(Errc::Internal, "arrow endpoint out of range");
    for (const auto& t : potential) {
        if (t.arrows.empty()) fail(Errc::Internal, "empty potential term");
        for (size_t i = 0; i < t.arrows.size(); ++i) {
            int a = t.arrows[i], b = t.arrows[(i + 1) % t.arrows.size()];
            if (a < 0 || a >= static_cast<int>(arrows.size()) || b < 0 ||
                b >= static_cast<int>(arrows.size()))
                fail(Errc::Internal, "potential references unknown arrow");
            if (arrows[static_cast<size_t>(a)].dst != arrows[static_cast<size_t>(b)].src)
                fail(Errc::Internal, "potential term is not a composable cycle");
        }
    }
}

// ---------------------------------------------------------------------------
// Construction from triangulations.

namespace {

struct AngleArrows {
    // arrow id of the angle instance at (triangle, position k), i.e. the pair
    // (side[k], side[k+1]); -1 when one of the sides is a boundary segment or
    // the triangle is skipped.
    std::vector<std::array<int, 3>> at;
};

// Rotation orbit of corners around an interior vertex, in the fixed
// orientation. Entries are (triangle, corner position).
std::vector<std::pair<int, int>> fan_around(const Triangulation& t, int vertex) {
    std::pair<int, int> start{-1, -1};
    for (size_t ti = 0; ti < t.triangles().size() && start.first < 0; ++ti)
        for (int k = 0; k < 3; ++k)
            if (t.triangles()[ti].corner[k] == vertex) {
                start = {static_cast<int>(ti), k};
                break;
            }
    if (start.first < 0) fail(Errc::Internal, "vertex not found in any triangle");
    std::vector<std::pair<int, int>> orbit;
    auto cur = start;
    do {
        orbit.push_back(cur);
        const Dart out = t.triangles()[static_cast<size_t>(cur.first)].side[cur.second];
        if (t.arcs()[out.arc].boundary) fail(Errc::Internal, "puncture fan touches the boundary");
        auto [nt, nk] = t.locate({out.arc, 1 - out.side});
        cur = {nt, (nk + 1) % 3};
    } while (cur != start);
    return orbit;
}

} // namespace

QuiverWithPotential qp_from_triangulation(const Triangulation& t) {
    t.require_valid();
    QuiverWithPotential qp;
    std::map<int, int> vert_of_arc;
    for (size_t a = 0; a < t.arcs().size(); ++a) {
        if (t.arcs()[a].boundary) continue;
        vert_of_arc[static_cast<int>(a)] = static_cast<int>(qp.vertices.size());
        qp.vertices.push_back(t.arcs()[a].label);
    }
    AngleArrows ang;
    ang.at.assign(t.triangles().size(), {-1, -1, -1});
    for (size_t ti = 0; ti < t.triangles().size(); ++ti) {
        const Triangle& tri = t.triangles()[ti];
        for (int k = 0; k < 3; ++k) {
            const Dart &a = tri.side[k], &b = tri.side[(k + 1) % 3];
            if (t.arcs()[a.arc].boundary || t.arcs()[b.arc].boundary) continue;
            ang.at[ti][static_cast<size_t>(k)] = static_cast<int>(qp.arrows.size());
            qp.arrows.push_back({vert_of_arc.at(a.arc), vert_of_arc.at(b.arc)});
        }
        bool all_internal = ang.at[ti][0] >= 0 && ang.at[ti][1] >= 0 && ang.at[ti][2] >= 0;
        if (all_internal)
            qp.potential.push_back({+1, {ang.at[ti][0], ang.at[ti][1], ang.at[ti][2]}});
    }
    qp.canonicalize();
    qp.check_well_formed();

    int loops = 0;
    for (const auto& a : qp.arrows)
        if (a.src == a.dst) loops++;
    const int isolated = static_cast<int>(t.isolated_punctures().size());
    if (loops != isolated) fail(Errc::Internal, "loop census does not match isolated punctures");
    return qp;
}

QuiverWithPotential unreduced_qp_from_signed_raw(const Triangulation& t,
                                                 const std::map<std::string, int>& sign) {
    t.require_valid();
    const SurfaceSpec& spec = t.spec();
    for (const auto& v : spec.vortex_punctures)
        if (!sign.count(v)) fail(Errc::IndexOutOfRange, "missing sign for vortex " + v);

    QuiverWithPotential qp;
    std::map<int, int> vert_of_arc;
    for (size_t a = 0; a < t.arcs().size(); ++a) {
        if (t.arcs()[a].boundary) continue;
        vert_of_arc[static_cast<int>(a)] = static_cast<int>(qp.vertices.size());
        qp.vertices.push_back(t.arcs()[a].label);
    }

    // Vortex self-folded triangles: no own arrows, twins instead.
    std::set<int> skipped_tris;
    std::map<int, int> twin_of_enclosing;  // enclosing arc -> folded arc
    std::map<int, std::string> vortex_of_enclosing;
    for (const auto& sf : t.self_folded_triangles()) {
        const std::string& p = t.vertex_names()[sf.puncture_vertex];
        if (!spec.is_vortex(p)) continue;
        if (t.arcs()[sf.enclosing.arc].boundary)
            fail(Errc::Internal, "vortex self-folded triangle with boundary enclosing edge");
        skipped_tris.insert(sf.tri);
        twin_of_enclosing[sf.enclosing.arc] = sf.folded_arc;
        vortex_of_enclosing[sf.enclosing.arc] = p;
    }

    AngleArrows ang;
    ang.at.assign(t.triangles().size(), {-1, -1, -1});
    // twin_arrow[{id, enclosing arc}] = twin instance with the folded arc instead
    std::map<std::pair<int, int>, int> twin_arrow;
    for (size_t ti = 0; ti < t.triangles().size(); ++ti) {
        if (skipped_tris.count(static_cast<int>(ti))) continue;
        const Triangle& tri = t.triangles()[ti];
        for (int k = 0; k < 3; ++k) {
            const Dart &a = tri.side[k], &b = tri.side[(k + 1) % 3];
            if (t.arcs()[a.arc].boundary || t.arcs()[b.arc].boundary) continue;
            int id = static_cast<int>(qp.arrows.size());
            ang.at[ti][static_cast<size_t>(k)] = id;
            qp.arrows.push_back({vert_of_arc.at(a.arc), vert_of_arc.at(b.arc)});
            for (const auto& [enc, folded] : twin_of_enclosing) {
                if (a.arc == enc) {
                    twin_arrow[{id, enc}] = static_cast<int>(qp.arrows.size());
                    qp.arrows.push_back({vert_of_arc.at(folded), vert_of_arc.at(b.arc)});
                }
                if (b.arc == enc) {
                    twin_arrow[{id, enc}] = static_cast<int>(qp.arrows.size());
                    qp.arrows.push_back({vert_of_arc.at(a.arc), vert_of_arc.at(folded)});
                }
            }
        }
    }

    // W_T: one term per choice of twin replacement on each enclosing side.
    for (size_t ti = 0; ti < t.triangles().size(); ++ti) {
        if (skipped_tris.count(static_cast<int>(ti))) continue;
        if (ang.at[ti][0] < 0 || ang.at[ti][1] < 0 || ang.at[ti][2] < 0) continue;
        const Triangle& tri = t.triangles()[ti];
        std::vector<int> twin_sides;
        for (int k = 0; k < 3; ++k)
            if (twin_of_enclosing.count(tri.side[k].arc)) twin_sides.push_back(k);
        const int choices = 1 << twin_sides.size();
        for (int mask = 0; mask < choices; ++mask) {
            std::array<int, 3> word = {ang.at[ti][0], ang.at[ti][1], ang.at[ti][2]};
            bool usable = true;
            for (size_t s = 0; s < twin_sides.size(); ++s) {
                if (!(mask & (1 << s))) continue;
                int k = twin_sides[s];
                int enc = tri.side[k].arc;
                // replace both angle arrows touching side k by their twins
                auto in_it = twin_arrow.find({ang.at[ti][(k + 2) % 3], enc});
                auto out_it = twin_arrow.find({ang.at[ti][static_cast<size_t>(k)], enc});
                if (in_it == twin_arrow.end() || out_it == twin_arrow.end()) {
                    usable = false;
                    break;
                }
                word[static_cast<size_t>((k + 2) % 3)] = in_it->second;
                word[static_cast<size_t>(k)] = out_it->second;
            }
            if (usable) qp.potential.push_back({+1, {word[0], word[1], word[2]}});
        }
    }

    // W_V: fan cycle around each vortex that is not isolated.
    std::set<std::string> isolated = t.isolated_punctures();
    std::map<int, std::string> plain_folded;    // folded arc of a plain self-folded triangle
    for (const auto& sf : t.self_folded_triangles()) {
        const std::string& p = t.vertex_names()[sf.puncture_vertex];
        if (!spec.is_vortex(p)) plain_folded[sf.folded_arc] = p;
    }
    for (const auto& vx : spec.vortex_punctures) {
        if (isolated.count(vx)) continue;
        int vertex_id = -1;
        for (size_t i = 0; i < t.vertex_names().size(); ++i)
            if (t.vertex_names()[i] == vx) vertex_id = static_cast<int>(i);
        if (vertex_id < 0) fail(Errc::Internal, "vortex vertex missing");
        auto fan = fan_around(t, vertex_id);
        // Collect sector arrows; sectors inside skipped (vortex) self-folded
        // triangles contribute nothing here.
        struct Sector {
            int arrow;
            int in_arc, out_arc;
            bool skipped;
            int tri;
        };
        std::vector<Sector> sectors;
        for (auto [ti, k] : fan) {
            const Triangle& tri = t.triangles()[static_cast<size_t>(ti)];
            Sector s;
            s.tri = ti;
            s.in_arc = tri.side[(k + 2) % 3].arc;
            s.out_arc = tri.side[static_cast<size_t>(k)].arc;
            s.skipped = skipped_tris.count(ti) > 0;
            s.arrow = s.skipped ? -1 : ang.at[static_cast<size_t>(ti)][static_cast<size_t>((k + 2) % 3)];
            if (!s.skipped && s.arrow < 0)
                fail(Errc::Internal, "missing angle arrow around a vortex");
            sectors.push_back(s);
        }
        int adjacent_twins = 0;
        std::vector<int> word;
        for (size_t i = 0; i < sectors.size(); ++i) {
            const Sector& s = sectors[i];
            if (s.skipped) continue;
            int arrow = s.arrow;
            // sign rule: if this sector's in or out arc is a vortex enclosing
            // edge with sign -1, reroute the arrow through the twin.
            auto reroute = [&](int arc_id, int arrow_id) {
                auto encIt = vortex_of_enclosing.find(arc_id);
                if (encIt == vortex_of_enclosing.end()) return arrow_id;
                if (sign.at(encIt->second) == +1) return arrow_id;
                auto tw = twin_arrow.find({arrow_id, arc_id});
                if (tw == twin_arrow.end())
                    fail(Errc::Internal, "missing twin arrow for sign rule");
                return tw->second;
            };
            arrow = reroute(s.in_arc, arrow);
            arrow = reroute(s.out_arc, arrow);
            word.push_back(arrow);
            if (vortex_of_enclosing.count(s.out_arc)) adjacent_twins++;
            // plain self-folded detour: when the walk leaves through a plain
            // folded edge, the loop arrow at the tip is traversed once.
            if (plain_folded.count(s.out_arc)) {
                for (const auto& sf : t.self_folded_triangles()) {
                    if (sf.folded_arc != s.out_arc) continue;
                    const Triangle& tri = t.triangles()[static_cast<size_t>(sf.tri)];
                    for (int k = 0; k < 3; ++k) {
                        const Dart &a = tri.side[k], &b = tri.side[(k + 1) % 3];
                        if (a.arc == sf.folded_arc && b.arc == sf.folded_arc)
                            word.push_back(ang.at[static_cast<size_t>(sf.tri)][static_cast<size_t>(k)]);
                    }
                }
            }
        }
        if (adjacent_twins >= 2)
            qp.notes.push_back("W_V fan around " + vx + " has " + std::to_string(adjacent_twins) +
                               " adjacent vortex twin pairs; review manually");
        if (word.empty()) fail(Errc::Internal, "empty fan cycle around vortex " + vx);
        // composability check
        for (size_t i = 0; i < word.size(); ++i) {
            const QPArrow &a = qp.arrows[static_cast<size_t>(word[i])],
                          &b = qp.arrows[static_cast<size_t>(word[(i + 1) % word.size()])];
            if (a.dst != b.src) fail(Errc::Internal, "fan cycle around " + vx + " not composable");
        }
        qp.potential.push_back({-1, word});
    }

    qp.canonicalize();
    qp.check_well_formed();
    return qp;
}

QuiverWithPotential qp_from_signed_raw(const Triangulation& t,
                                       const std::map<std::string, int>& sign) {
    return reduce(unreduced_qp_from_signed_raw(t, sign));
}

QuiverWithPotential qp_from_signed(const SignedTriangulation& st) {
    return qp_from_signed_raw(st.base(), st.sign());
}

// ---------------------------------------------------------------------------
// Reduction.

namespace {

// Cyclic derivative of a term with respect to one arrow: for each occurrence,
// the path read от the position after it, with the term's coefficient.
struct Path {
    int coeff;
    std::vector<int> arrows; // possibly empty
};

std::vector<Path> cyclic_derivative(const std::vector<PotentialTerm>& terms, int arrow) {
    std::vector<Path> out;
    for (const auto& t : terms) {
        for (size_t i = 0; i < t.arrows.size(); ++i) {
            if (t.arrows[i] != arrow) continue;
            Path p;
            p.coeff = t.coeff;
            for (size_t k = 1; k < t.arrows.size(); ++k)
                p.arrows.push_back(t.arrows[(i + k) % t.arrows.size()]);
            out.push_back(std::move(p));
        }
    }
    return out;
}

// Substitute sums of paths for single arrows inside a term (distributing).
std::vector<PotentialTerm> substitute(const PotentialTerm& term,
                                      const std::map<int, std::vector<Path>>& subst) {
    std::vector<PotentialTerm> acc = {{term.coeff, {}}};
    for (int a : term.arrows) {
        auto it = subst.find(a);
        std::vector<PotentialTerm> next;
        if (it == subst.end()) {
            for (auto& t : acc) {
                t.arrows.push_back(a);
                next.push_back(t);
            }
        } else {
            for (const auto& t : acc) {
                for (const auto& p : it->second) {
                    PotentialTerm nt = t;
                    nt.coeff *= p.coeff;
                    nt.arrows.insert(nt.arrows.end(), p.arrows.begin(), p.arrows.end());
                    next.push_back(std::move(nt));
                }
            }
        }
        acc = std::move(next);
    }
    return acc;
}

QuiverWithPotential drop_arrows(const QuiverWithPotential& qp, const std::set<int>& dead) {
    QuiverWithPotential out;
    out.vertices = qp.vertices;
    out.notes = qp.notes;
    std::map<int, int> remap;
    for (size_t i = 0; i < qp.arrows.size(); ++i) {
        if (dead.count(static_cast<int>(i))) continue;
        remap[static_cast<int>(i)] = static_cast<int>(out.arrows.size());
        out.arrows.push_back(qp.arrows[i]);
    }
    for (const auto& t : qp.potential) {
        PotentialTerm nt;
        nt.coeff = t.coeff;
        bool alive = true;
        for (int a : t.arrows) {
            auto it = remap.find(a);
            if (it == remap.end()) {
                alive = false;
                break;
            }
            nt.arrows.push_back(it->second);
        }
        if (alive && nt.coeff != 0) out.potential.push_back(std::move(nt));
        else if (!alive)
            fail(Errc::Internal, "potential still references a killed arrow");
    }
    return out;
}

} // namespace

QuiverWithPotential reduce(const QuiverWithPotential& qp_in) {
    QuiverWithPotential qp = qp_in;
    qp.canonicalize();
    for (int guard = 0; guard < 1000; ++guard) {
        int quad = -1;
        for (size_t i = 0; i < qp.potential.size(); ++i)
            if (qp.potential[i].arrows.size() == 2) {
                quad = static_cast<int>(i);
                break;
            }
        if (quad < 0) break;
        const PotentialTerm term = qp.potential[static_cast<size_t>(quad)];
        if (term.coeff != 1 && term.coeff != -1)
            fail(Errc::NonUnitQuadraticTerm,
                 "quadratic term with coefficient " + std::to_string(term.coeff));
        const int a = term.arrows[0], b = term.arrows[1];
        if (a == b) fail(Errc::NonUnitQuadraticTerm, "quadratic term on a single loop");
        std::vector<PotentialTerm> rest;
        for (size_t i = 0; i < qp.potential.size(); ++i)
            if (static_cast<int>(i) != quad) rest.push_back(qp.potential[i]);
        for (const auto& t : rest)
            if (t.arrows.size() == 2 &&
                (std::count(t.arrows.begin(), t.arrows.end(), a) ||
                 std::count(t.arrows.begin(), t.arrows.end(), b)))
                fail(Errc::NonUnitQuadraticTerm,
                     "arrows of a quadratic term appear in another quadratic term");

        // a |-> -c d_b(rest), b |-> -c d_a(rest)
        std::map<int, std::vector<Path>> subst;
        auto build = [&](int dead, int wrt) {
            std::vector<Path> d = cyclic_derivative(rest, wrt);
            for (auto& p : d) {
                p.coeff *= -term.coeff;
                for (int x : p.arrows)
                    if (x == a || x == b)
                        fail(Errc::NonUnitQuadraticTerm,
                             "self-referential substitution outside the handled class");
            }
            subst[dead] = std::move(d);
        };
        build(a, b);
        build(b, a);

        std::vector<PotentialTerm> next;
        for (const auto& t : rest)
            for (auto& s : substitute(t, subst))
                if (!s.arrows.empty()) next.push_back(std::move(s));
        qp.potential = std::move(next);
        qp = drop_arrows(qp, {a, b});
        qp.canonicalize();
    }
    qp.reduced = true;
    qp.check_well_formed();
    return qp;
}

// ---------------------------------------------------------------------------
// Mutation.

QuiverWithPotential mutate(const QuiverWithPotential& qp_in, const std::string& vertex) {
    QuiverWithPotential qp = qp_in;
    qp.canonicalize();
    const int k = qp.vertex_index(vertex);
    if (k < 0) fail(Errc::IndexOutOfRange, "unknown vertex " + vertex);
    if (qp.loops_at(k) > 0)
        fail(Errc::UndefinedMutation, "vertex " + vertex + " carries a loop");
    if (qp.has_two_cycle_through(k))
        fail(Errc::UndefinedMutation, "vertex " + vertex + " lies on a 2-cycle");

    QuiverWithPotential out;
    out.vertices = qp.vertices;
    out.notes = qp.notes;
    std::map<int, int> keep;      // old arrow -> new id (arrows not at k)
    std::map<int, int> star;      // old arrow at k -> reversed arrow id
    for (size_t i = 0; i < qp.arrows.size(); ++i) {
        const QPArrow& ar = qp.arrows[i];
        if (ar.src != k && ar.dst != k) {
            keep[static_cast<int>(i)] = static_cast<int>(out.arrows.size());
            out.arrows.push_back(ar);
        }
    }
    for (size_t i = 0; i < qp.arrows.size(); ++i) {
        const QPArrow& ar = qp.arrows[i];
        if (ar.src == k || ar.dst == k) {
            star[static_cast<int>(i)] = static_cast<int>(out.arrows.size());
            out.arrows.push_back({ar.dst, ar.src});
        }
    }
    // composite [ab] for a: i->k, b: k->j
    std::map<std::pair<int, int>, int> comp;
    for (size_t ia = 0; ia < qp.arrows.size(); ++ia) {
        if (qp.arrows[ia].dst != k) continue;
        for (size_t ib = 0; ib < qp.arrows.size(); ++ib) {
            if (qp.arrows[ib].src != k) continue;
            comp[{static_cast<int>(ia), static_cast<int>(ib)}] =
                static_cast<int>(out.arrows.size());
            out.arrows.push_back({qp.arrows[ia].src, qp.arrows[ib].dst});
        }
    }

    // [W]: replace consecutive passes through k by the composite arrow.
    for (const auto& t : qp.potential) {
        std::vector<int> w = t.arrows;
        // rotate so position 0 does not start inside a pass through k
        size_t rot = 0;
        while (rot < w.size() && qp.arrows[static_cast<size_t>(w[rot])].src == k) rot++;
        if (rot == w.size())
            fail(Errc::Internal, "potential cycle lies entirely at the mutated vertex");
        std::rotate(w.begin(), w.begin() + static_cast<long>(rot), w.end());
        std::vector<int> nw;
        for (size_t i = 0; i < w.size(); ++i) {
            int a = w[i];
            if (qp.arrows[static_cast<size_t>(a)].dst == k) {
                if (i + 1 >= w.size()) fail(Errc::Internal, "dangling pass through mutated vertex");
                int b = w[i + 1];
                nw.push_back(comp.at({a, b}));
                ++i;
            } else {
                nw.push_back(keep.at(a));
            }
        }
        out.potential.push_back({t.coeff, nw});
    }
    // Delta terms: [ab] b* a*
    for (const auto& [pair_ab, cid] : comp) {
        out.potential.push_back({+1, {cid, star.at(pair_ab.second), star.at(pair_ab.first)}});
    }
    out.canonicalize();
    out.check_well_formed();
    return reduce(out);
}

// ---------------------------------------------------------------------------
// Isomorphism.

std::optional<std::vector<int>> quiver_iso(const QuiverWithPotential& a,
                                           const QuiverWithPotential& b) {
    const int n = static_cast<int>(a.vertices.size());
    if (n != static_cast<int>(b.vertices.size())) return std::nullopt;
    if (a.arrows.size() != b.arrows.size()) return std::nullopt;

    auto profile = [](const QuiverWithPotential& q, int v) {
        std::vector<int> out, in;
        for (size_t w = 0; w < q.vertices.size(); ++w) {
            out.push_back(q.arrow_count(v, static_cast<int>(w)));
            in.push_back(q.arrow_count(static_cast<int>(w), v));
        }
        int loops = q.loops_at(v);
        std::sort(out.begin(), out.end());
        std::sort(in.begin(), in.end());
        out.push_back(loops);
        out.insert(out.end(), in.begin(), in.end());
        return out;
    };
    std::vector<std::vector<int>> pa(static_cast<size_t>(n)), pb(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        pa[static_cast<size_t>(v)] = profile(a, v);
        pb[static_cast<size_t>(v)] = profile(b, v);
    }
    {
        auto sa = pa, sb = pb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }

    std::vector<int> map(static_cast<size_t>(n), -1), used(static_cast<size_t>(n), 0);
    std::function<bool(int)> go = [&](int v) -> bool {
        if (v == n) return true;
        for (int w = 0; w < n; ++w) {
            if (used[static_cast<size_t>(w)]) continue;
            if (pa[static_cast<size_t>(v)] != pb[static_cast<size_t>(w)]) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u) {
                int wu = map[static_cast<size_t>(u)];
                if (a.arrow_count(v, u) != b.arrow_count(w, wu)) ok = false;
                if (a.arrow_count(u, v) != b.arrow_count(wu, w)) ok = false;
            }
            if (a.loops_at(v) != b.loops_at(w)) ok = false;
            if (!ok) continue;
            map[static_cast<size_t>(v)] = w;
            used[static_cast<size_t>(w)] = 1;
            if (go(v + 1)) return true;
            map[static_cast<size_t>(v)] = -1;
            used[static_cast<size_t>(w)] = 0;
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return map;
}

bool same_up_to_arrow_relabeling(const QuiverWithPotential& a, const QuiverWithPotential& b) {
    if (a.vertices != b.vertices) return false;
    auto key = [](const QuiverWithPotential& q) {
        std::multiset<std::pair<int, int>> arrows;
        for (const auto& ar : q.arrows) arrows.insert({ar.src, ar.dst});
        std::multiset<std::pair<int, std::vector<std::pair<int, int>>>> terms;
        for (const auto& t : q.potential) {
            std::vector<std::pair<int, int>> w;
            for (int id : t.arrows)
                w.push_back({q.arrows[static_cast<size_t>(id)].src,
                             q.arrows[static_cast<size_t>(id)].dst});
            // canonical rotation
            auto best = w;
            for (size_t r = 1; r < w.size(); ++r) {
                std::rotate(w.begin(), w.begin() + 1, w.end());
                if (w < best) best = w;
            }
            terms.insert({t.coeff, best});
        }
        return std::make_pair(arrows, terms);
    };
    return key(a) == key(b);
}

GradedQuiver cy3_double(const QuiverWithPotential& q) {
    GradedQuiver g;
    g.vertices = q.vertices;
    for (const auto& a : q.arrows) g.arrows.push_back({a.src, a.dst, 1});
    for (const auto& a : q.arrows) g.arrows.push_back({a.dst, a.src, 2});
    for (size_t v = 0; v < q.vertices.size(); ++v)
        g.arrows.push_back({static_cast<int>(v), static_cast<int>(v), 3});
    return g;
}

std::string qp_to_json_text(const QuiverWithPotential& qp) {
    nlohmann::json j;
    j["vertices"] = qp.vertices;
    j["arrows"] = nlohmann::json::array();
    for (size_t i = 0; i < qp.arrows.size(); ++i)
        j["arrows"].push_back({{"id", static_cast<int>(i)},
                               {"source", qp.vertices[static_cast<size_t>(qp.arrows[i].src)]},
                               {"target", qp.vertices[static_cast<size_t>(qp.arrows[i].dst)]}});
    j["potential"] = nlohmann::json::array();
    for (const auto& t : qp.potential)
        j["potential"].push_back({{"coeff", t.coeff}, {"arrows", t.arrows}});
    j["reduced"] = qp.reduced;
    return j.dump(2);
}

QuiverWithPotential qp_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ParseError, e.what());
    }
    QuiverWithPotential qp;
    qp.vertices = j.at("vertices").get<std::vector<std::string>>();
    for (const auto& aj : j.at("arrows")) {
        QPArrow a;
        a.src = qp.vertex_index(aj.at("source").get<std::string>());
        a.dst = qp.vertex_index(aj.at("target").get<std::string>());
        if (a.src < 0 || a.dst < 0) fail(Errc::ParseError, "arrow references unknown vertex");
        qp.arrows.push_back(a);
    }
    for (const auto& tj : j.at("potential"))
        qp.potential.push_back(
            {tj.at("coeff").get<int>(), tj.at("arrows").get<std::vector<int>>()});
    if (j.contains("reduced")) qp.reduced = j.at("reduced").get<bool>();
    qp.check_well_formed();
    return qp;
}

} // namespace sfl
