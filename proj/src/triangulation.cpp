#include "sfl/triangulation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace sfl {

Triangulation::Triangulation(SurfaceSpec spec, std::vector<ArcInfo> arcs,
                             std::vector<Triangle> triangles,
                             std::vector<std::string> vertex_names)
    : spec_(std::move(spec)), arcs_(std::move(arcs)), triangles_(std::move(triangles)),
      vertex_names_(std::move(vertex_names)) {}

int Triangulation::arc_index(const std::string& label) const {
    for (size_t i = 0; i < arcs_.size(); ++i)
        if (arcs_[i].label == label) return static_cast<int>(i);
    return -1;
}

std::vector<std::string> Triangulation::internal_arc_labels() const {
    std::vector<std::string> out;
    for (const auto& a : arcs_)
        if (!a.boundary) out.push_back(a.label);
    return out;
}

std::pair<int, int> Triangulation::locate(const Dart& d) const {
    for (size_t t = 0; t < triangles_.size(); ++t)
        for (int k = 0; k < 3; ++k)
            if (triangles_[t].side[k] == d) return {static_cast<int>(t), k};
    fail(Errc::Internal, "dart not placed: arc " + arcs_[d.arc].label + " side " +
                             std::to_string(d.side));
}

bool Triangulation::is_self_folded_edge(int arc) const {
    if (arcs_[arc].boundary) return false;
    auto [t0, k0] = locate({arc, 0});
    auto [t1, k1] = locate({arc, 1});
    return t0 == t1;
}

bool Triangulation::is_self_folded_edge(const std::string& label) const {
    int a = arc_index(label);
    if (a < 0) fail(Errc::IndexOutOfRange, "unknown arc " + label);
    return is_self_folded_edge(a);
}

std::vector<SelfFolded> Triangulation::self_folded_triangles() const {
    std::vector<SelfFolded> out;
    for (size_t t = 0; t < triangles_.size(); ++t) {
        const Triangle& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            const Dart& a = tri.side[k];
            const Dart& b = tri.side[(k + 1) % 3];
            if (a.arc == b.arc && !arcs_[a.arc].boundary) {
                // sides k, k+1 are the folded pair; the tip between them is
                // the isolated puncture, side k+2 is the enclosing edge.
                SelfFolded sf;
                sf.folded_arc = a.arc;
                sf.tri = static_cast<int>(t);
                sf.enclosing = tri.side[(k + 2) % 3];
                sf.puncture_vertex = tri.corner[(k + 1) % 3];
                out.push_back(sf);
                break;
            }
        }
    }
    return out;
}

std::optional<SelfFolded> Triangulation::self_folded_with_enclosing(int arc) const {
    for (const auto& sf : self_folded_triangles())
        if (!arcs_[sf.enclosing.arc].boundary && sf.enclosing.arc == arc) return sf;
    return std::nullopt;
}

std::set<std::string> Triangulation::isolated_punctures() const {
    std::set<std::string> out;
    for (const auto& sf : self_folded_triangles()) out.insert(vertex_names_[sf.puncture_vertex]);
    return out;
}

bool Triangulation::is_admissible() const {
    std::set<std::string> all;
    for (const auto& p : spec_.all_punctures()) all.insert(p);
    return isolated_punctures() == all;
}

static Triangle rotated(const Triangle& t, int r) {
    Triangle out;
    for (int k = 0; k < 3; ++k) {
        out.side[k] = t.side[(r + k) % 3];
        out.corner[k] = t.corner[(r + k) % 3];
    }
    return out;
}

Triangulation Triangulation::flip_at(int arc) const {
    if (arc < 0 || arc >= static_cast<int>(arcs_.size()))
        fail(Errc::IndexOutOfRange, "arc index out of range");
    if (arcs_[arc].boundary)
        fail(Errc::NotFlippable, "boundary segment " + arcs_[arc].label);
    if (is_self_folded_edge(arc))
        fail(Errc::NotFlippable, "self-folded edge " + arcs_[arc].label +
                                     " (only the L-flip loop applies)");
    auto [t1i, k1] = locate({arc, 0});
    auto [t2i, k2] = locate({arc, 1});
    // Rotate both triangles so the diagonal comes first:
    //   t1 = (g0: x->y, A: y->z, B: z->x), t2 = (g1: y->x, C: x->w, D: w->y).
    Triangle t1 = rotated(triangles_[t1i], k1);
    Triangle t2 = rotated(triangles_[t2i], k2);
    const Dart A = t1.side[1], B = t1.side[2], C = t2.side[1], D = t2.side[2];
    const int y = t1.corner[1], x = t1.corner[0];
    const int z = t1.corner[2], w = t2.corner[2];
    // The replacement diagonal joins w and z: (g'0: w->z, B, C), (g'1: z->w, D, A).
    Triangle n1, n2;
    n1.side = {Dart{arc, 0}, B, C};
    n1.corner = {w, z, x};
    n2.side = {Dart{arc, 1}, D, A};
    n2.corner = {z, w, y};
    Triangulation out = *this;
    out.triangles_[t1i] = n1;
    out.triangles_[t2i] = n2;
    return out;
}

Triangulation Triangulation::flip(const std::string& arc_label) const {
    int a = arc_index(arc_label);
    if (a < 0) fail(Errc::IndexOutOfRange, "unknown arc " + arc_label);
    return flip_at(a);
}

Triangulation Triangulation::lflip(const std::string& arc_label) const {
    int a = arc_index(arc_label);
    if (a < 0) fail(Errc::IndexOutOfRange, "unknown arc " + arc_label);
    if (!is_self_folded_edge(a))
        fail(Errc::NotSelfFolded, arc_label + " is not a self-folded edge");
    return *this;
}

std::string Triangulation::canonical_form() const {
    // Seed at the pinned boundary segment with the smallest label.
    int seed_arc = -1;
    for (size_t i = 0; i < arcs_.size(); ++i) {
        if (!arcs_[i].boundary) continue;
        if (seed_arc < 0 || arcs_[i].label < arcs_[seed_arc].label) seed_arc = static_cast<int>(i);
    }
    if (seed_arc < 0) fail(Errc::Internal, "no boundary segment to pin canonicalization");

    auto [seed_tri, seed_pos] = locate({seed_arc, 0});
    std::vector<int> tri_rot(triangles_.size(), -1); // discovered rotation, -1 = unseen
    std::vector<int> order;                          // triangles in discovery order
    std::map<int, std::pair<int, int>> arc_canon;    // arc -> (canonical id, side seen first)
    int next_arc_id = 1;

    tri_rot[seed_tri] = seed_pos;
    order.push_back(seed_tri);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int t = order[qi];
        Triangle tri = rotated(triangles_[t], tri_rot[t]);
        for (int k = 0; k < 3; ++k) {
            const Dart& d = tri.side[k];
            if (arcs_[d.arc].boundary) continue;
            auto it = arc_canon.find(d.arc);
            if (it == arc_canon.end()) {
                arc_canon[d.arc] = {next_arc_id++, d.side};
                Dart partner{d.arc, 1 - d.side};
                auto [pt, pk] = locate(partner);
                if (tri_rot[pt] < 0) {
                    tri_rot[pt] = pk;
                    order.push_back(pt);
                }
            }
        }
    }
    if (order.size() != triangles_.size())
        fail(Errc::Internal, "triangulation is not connected");

    std::ostringstream os;
    for (int t : order) {
        Triangle tri = rotated(triangles_[t], tri_rot[t]);
        os << "[";
        for (int k = 0; k < 3; ++k) {
            const Dart& d = tri.side[k];
            if (arcs_[d.arc].boundary) {
                os << "B:" << arcs_[d.arc].label;
            } else {
                const auto& [id, side0] = arc_canon.at(d.arc);
                os << "a" << id << ":" << (d.side == side0 ? 0 : 1);
            }
            os << "@" << vertex_names_[tri.corner[k]] << ";";
        }
        os << "]";
    }
    return os.str();
}

Diagnostics Triangulation::validate() const {
    Diagnostics d;
    Diagnostics sd = sfl::validate(spec_);
    if (!sd.ok()) return sd;

    const int n = rank_open_arcs(spec_);
    const int m = spec_.marked_points();
    const int aleph = decoration_count(spec_);

    int internal = 0, boundary = 0;
    for (const auto& a : arcs_) (a.boundary ? boundary : internal)++;
    if (internal != n)
        d.violations.push_back("internal arc count " + std::to_string(internal) +
                               " != n = " + std::to_string(n));
    if (boundary != m)
        d.violations.push_back("boundary segment count != m");
    if (static_cast<int>(triangles_.size()) != aleph)
        d.violations.push_back("triangle count " + std::to_string(triangles_.size()) +
                               " != (2n+m)/3 = " + std::to_string(aleph));
    if (!d.ok()) return d;

    // Every internal arc fills exactly two side slots, each boundary segment one.
    std::vector<std::array<int, 2>> uses(arcs_.size(), {0, 0});
    for (const auto& tri : triangles_)
        for (const auto& s : tri.side) {
            if (s.arc < 0 || s.arc >= static_cast<int>(arcs_.size()) || s.side < 0 || s.side > 1) {
                d.violations.push_back("dart out of range");
                return d;
            }
            uses[s.arc][s.side]++;
        }
    for (size_t a = 0; a < arcs_.size(); ++a) {
        if (arcs_[a].boundary) {
            if (uses[a][0] != 1 || uses[a][1] != 0) {
                d.violations.push_back("boundary segment " + arcs_[a].label +
                                       " must fill exactly one slot");
                return d;
            }
        } else if (uses[a][0] != 1 || uses[a][1] != 1) {
            d.violations.push_back("internal arc " + arcs_[a].label +
                                   " must fill exactly two side slots");
            return d;
        }
    }

    // Orientation: partner darts traverse the arc in opposite directions.
    for (size_t a = 0; a < arcs_.size(); ++a) {
        if (arcs_[a].boundary) continue;
        auto [t0, k0] = locate({static_cast<int>(a), 0});
        auto [t1, k1] = locate({static_cast<int>(a), 1});
        int s0 = triangles_[t0].corner[k0], e0 = triangles_[t0].corner[(k0 + 1) % 3];
        int s1 = triangles_[t1].corner[k1], e1 = triangles_[t1].corner[(k1 + 1) % 3];
        if (s0 != e1 || s1 != e0) {
            d.violations.push_back("arc " + arcs_[a].label +
                                   " glued with inconsistent orientation");
            return d;
        }
    }

    // Vertex census. Marked points come from boundary walks in label order;
    // interior vertices must be exactly the punctures.
    std::set<int> seen_vertices;
    for (const auto& tri : triangles_)
        for (int c : tri.corner) {
            if (c < 0 || c >= static_cast<int>(vertex_names_.size())) {
                d.violations.push_back("corner vertex id out of range");
                return d;
            }
            seen_vertices.insert(c);
        }

    std::set<std::string> interior(vertex_names_.begin(), vertex_names_.end());
    std::set<std::string> expected_boundary_names;
    for (size_t a = 0; a < arcs_.size(); ++a) {
        if (!arcs_[a].boundary) continue;
        auto [t, k] = locate({static_cast<int>(a), 0});
        interior.erase(vertex_names_[triangles_[t].corner[k]]);
        interior.erase(vertex_names_[triangles_[t].corner[(k + 1) % 3]]);
    }
    std::set<std::string> punctures;
    for (const auto& p : spec_.all_punctures()) punctures.insert(p);
    std::set<std::string> interior_seen;
    for (int v : seen_vertices) {
        const std::string& nm = vertex_names_[v];
        if (punctures.count(nm)) interior_seen.insert(nm);
    }
    if (interior_seen != punctures) {
        d.violations.push_back("interior vertices do not match the puncture set");
    }
    for (const auto& p : punctures)
        if (!interior.count(p) && interior_seen.count(p))
            d.violations.push_back("puncture " + p + " touches the boundary");

    // Boundary walk: segments of component j must chain in cyclic label order.
    // next boundary dart after d: rotate around end(d) through glued triangles.
    auto next_boundary = [&](int arc) -> int {
        auto [t, k] = locate({arc, 0});
        // walk: successor side in triangle, hop to partner, repeat until boundary
        int ct = t, ck = (k + 1) % 3;
        for (size_t guard = 0; guard <= 3 * triangles_.size(); ++guard) {
            const Dart& s = triangles_[ct].side[ck];
            if (arcs_[s.arc].boundary) return s.arc;
            auto [nt, nk] = locate({s.arc, 1 - s.side});
            ct = nt;
            ck = (nk + 1) % 3;
        }
        return -1;
    };
    for (int j = 0; j < spec_.boundary_count(); ++j) {
        const int mj = spec_.boundaries[static_cast<size_t>(j)];
        for (int k = 0; k < mj; ++k) {
            std::string cur = "b" + std::to_string(j + 1) + "." + std::to_string(k + 1);
            std::string nxt = "b" + std::to_string(j + 1) + "." + std::to_string((k % mj) + 1 == mj ? 1 : k + 2);
            int ca = arc_index(cur);
            if (ca < 0) {
                d.violations.push_back("missing boundary segment " + cur);
                return d;
            }
            int na = next_boundary(ca);
            if (na < 0 || arcs_[na].label != nxt) {
                d.violations.push_back("boundary walk broken after " + cur);
                return d;
            }
        }
    }

    // Euler characteristic of the glued complex.
    const int V = static_cast<int>(seen_vertices.size());
    const int E = n + m;
    const int F = static_cast<int>(triangles_.size());
    const int chi = V - E + F;
    const int expect = 2 - 2 * spec_.genus - spec_.boundary_count();
    if (chi != expect)
        d.violations.push_back("Euler characteristic " + std::to_string(chi) + " != " +
                               std::to_string(expect));

    // Local vertex consistency: darts starting at each vertex form rotation orbits
    // whose total count matches the corner census.
    std::map<int, int> corner_count;
    for (const auto& tri : triangles_)
        for (int c : tri.corner) corner_count[c]++;
    std::map<int, int> orbit_count;
    std::set<std::pair<int, int>> visited; // (tri, pos) of corner
    for (size_t t = 0; t < triangles_.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            if (visited.count({static_cast<int>(t), k})) continue;
            // rotate around corner[k] of t: collect corners until boundary or loop
            int v = triangles_[t].corner[k];
            // go backwards first to find a boundary start, bounded walk
            int ct = static_cast<int>(t), ck = k;
            for (size_t guard = 0; guard <= 3 * triangles_.size(); ++guard) {
                // dart entering v in ct: side (ck+2)%3 ends at corner ck
                const Dart prev = triangles_[ct].side[(ck + 2) % 3];
                if (arcs_[prev.arc].boundary) break;
                auto [pt, pk] = locate({prev.arc, 1 - prev.side});
                if (pt == ct && pk == ck) break;
                if (visited.count({pt, pk})) break;
                ct = pt;
                ck = pk;
                if (ct == static_cast<int>(t) && ck == k) break;
            }
            // forward sweep
            int st = ct, sk = ck;
            for (size_t guard = 0; guard <= 3 * triangles_.size(); ++guard) {
                if (visited.count({st, sk})) break;
                visited.insert({st, sk});
                orbit_count[triangles_[st].corner[sk]]++;
                if (triangles_[st].corner[sk] != v) {
                    d.violations.push_back("vertex orbit mixes labels " + vertex_names_[v] +
                                           " and " + vertex_names_[triangles_[st].corner[sk]]);
                    return d;
                }
                const Dart out = triangles_[st].side[sk]; // leaves v
                if (arcs_[out.arc].boundary) break;
                auto [nt, nk] = locate({out.arc, 1 - out.side});
                st = nt;
                sk = (nk + 1) % 3;
            }
        }
    }
    (void)corner_count;
    (void)orbit_count;
    return d;
}

void Triangulation::require_valid() const {
    Diagnostics d = validate();
    if (!d.ok()) fail(Errc::InvalidSpec, "triangulation invalid: " + d.to_string());
}

std::string Triangulation::to_json_text() const {
    nlohmann::json j;
    j["arcs"] = nlohmann::json::array();
    for (const auto& a : arcs_)
        j["arcs"].push_back({{"label", a.label}, {"kind", a.boundary ? "boundary" : "internal"}});
    j["triangles"] = nlohmann::json::array();
    for (const auto& t : triangles_) {
        nlohmann::json tj = nlohmann::json::array();
        for (int k = 0; k < 3; ++k) {
            tj.push_back({{"arc", arcs_[t.side[k].arc].label},
                          {"side", t.side[k].side},
                          {"vertex", vertex_names_[t.corner[k]]}});
        }
        j["triangles"].push_back(tj);
    }
    return j.dump(2);
}

Triangulation Triangulation::from_json_text(const std::string& text, const SurfaceSpec& spec) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ParseError, e.what());
    }
    if (!j.contains("arcs") || !j.contains("triangles"))
        fail(Errc::ParseError, "triangulation JSON needs \"arcs\" and \"triangles\"");
    std::vector<ArcInfo> arcs;
    for (const auto& aj : j["arcs"]) {
        ArcInfo a;
        a.label = aj.at("label").get<std::string>();
        a.boundary = aj.at("kind").get<std::string>() == "boundary";
        arcs.push_back(a);
    }
    std::vector<std::string> names;
    auto vertex_id = [&](const std::string& nm) {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == nm) return static_cast<int>(i);
        names.push_back(nm);
        return static_cast<int>(names.size() - 1);
    };
    std::vector<Triangle> tris;
    for (const auto& tj : j["triangles"]) {
        if (tj.size() != 3) fail(Errc::ParseError, "triangle must have 3 sides");
        Triangle t;
        for (int k = 0; k < 3; ++k) {
            std::string lbl = tj[static_cast<size_t>(k)].at("arc").get<std::string>();
            int a = -1;
            for (size_t i = 0; i < arcs.size(); ++i)
                if (arcs[i].label == lbl) a = static_cast<int>(i);
            if (a < 0) fail(Errc::ParseError, "triangle references unknown arc " + lbl);
            t.side[k] = {a, tj[static_cast<size_t>(k)].at("side").get<int>()};
            t.corner[k] = vertex_id(tj[static_cast<size_t>(k)].at("vertex").get<std::string>());
        }
        tris.push_back(t);
    }
    Triangulation out(spec, std::move(arcs), std::move(tris), std::move(names));
    out.require_valid();
    return out;
}

// ---------------------------------------------------------------------------
// Signed triangulations

SignedTriangulation::SignedTriangulation(Triangulation base, std::map<std::string, int> sign)
    : base_(std::move(base)), sign_(std::move(sign)) {
    for (const auto& v : base_.spec().vortex_punctures) {
        auto it = sign_.find(v);
        if (it == sign_.end()) sign_[v] = +1;
        else if (it->second != 1 && it->second != -1)
            fail(Errc::InvalidSpec, "sign of vortex " + v + " must be +1 or -1");
    }
    for (auto it = sign_.begin(); it != sign_.end();) {
        if (!base_.spec().is_vortex(it->first))
            fail(Errc::InvalidSpec, "sign assigned to non-vortex " + it->first);
        ++it;
    }
    normalize();
}

void SignedTriangulation::normalize() {
    for (const auto& p : base_.isolated_punctures())
        if (base_.spec().is_vortex(p)) sign_[p] = +1;
}

int SignedTriangulation::sign_of(const std::string& vortex) const {
    auto it = sign_.find(vortex);
    if (it == sign_.end()) fail(Errc::IndexOutOfRange, "unknown vortex " + vortex);
    return it->second;
}

SignedTriangulation SignedTriangulation::flip(const std::string& arc_label) const {
    if (base_.is_self_folded_edge(arc_label)) {
        for (const auto& sf : base_.self_folded_triangles()) {
            if (base_.arc_label(sf.folded_arc) != arc_label) continue;
            const std::string& p = base_.vertex_names()[sf.puncture_vertex];
            if (base_.spec().is_vortex(p))
                fail(Errc::VortexLFlip, "L-flip at self-folded edge around vortex " + p);
            return SignedTriangulation(base_.lflip(arc_label), sign_);
        }
    }
    return SignedTriangulation(base_.flip(arc_label), sign_);
}

std::vector<SignedTriangulation> SignedTriangulation::flip_targets(
    const std::string& arc_label) const {
    if (base_.is_self_folded_edge(arc_label)) return {flip(arc_label)};
    Triangulation flipped = base_.flip(arc_label);
    std::set<std::string> before = base_.isolated_punctures();
    std::set<std::string> after = flipped.isolated_punctures();
    std::vector<std::string> released;
    for (const auto& p : before)
        if (!after.count(p) && base_.spec().is_vortex(p)) released.push_back(p);
    if (released.empty()) return {SignedTriangulation(flipped, sign_)};
    if (released.size() > 1)
        fail(Errc::Internal, "a single flip released more than one vortex");
    std::vector<SignedTriangulation> out;
    for (int s : {+1, -1}) {
        auto sg = sign_;
        sg[released[0]] = s;
        out.emplace_back(flipped, sg);
    }
    return out;
}

SignedTriangulation SignedTriangulation::diamond_flip(const std::string& enclosing_arc_label) const {
    int arc = base_.arc_index(enclosing_arc_label);
    if (arc < 0) fail(Errc::IndexOutOfRange, "unknown arc " + enclosing_arc_label);
    if (!base_.is_internal(arc))
        fail(Errc::NotEnclosing, enclosing_arc_label + " is a boundary segment");
    auto sf = base_.self_folded_with_enclosing(arc);
    if (!sf)
        fail(Errc::NotEnclosing, enclosing_arc_label + " is not the enclosing edge of a self-folded triangle");
    const std::string puncture = base_.vertex_names()[sf->puncture_vertex];
    const std::string folded_label = base_.arc_label(sf->folded_arc);
    SignedTriangulation mid(base_.flip(enclosing_arc_label), sign_);
    SignedTriangulation out = mid.flip(folded_label);
    if (!out.base().isolated_punctures().count(puncture))
        fail(Errc::Internal, "diamond flip failed to keep puncture isolated");
    return out;
}

std::string SignedTriangulation::canonical_form() const {
    std::ostringstream os;
    os << base_.canonical_form() << "|signs:";
    for (const auto& [v, s] : sign_) os << v << "=" << (s > 0 ? "+" : "-") << ";";
    return os.str();
}

// ---------------------------------------------------------------------------
// Initial triangulation: polygon model with pockets.
//
// The polygon boundary word (anticlockwise) is
//   b1.1 .. b1.m1  (x_i y_i x_i' y_i')^g  (c_j bj.1 .. bj.mj c_j')^{j=2..b}  (l_q)^{q=1..p}
// where primes mark the second side of an identified arc and each l_q bounds a
// pocket carrying the self-folded triangle (r_q, r_q, l_q') around puncture q.
// The polygon is fan-triangulated from its first corner.

namespace {

struct PolyEdge {
    std::string label;
    bool boundary = false;
    int side = 0;      // which side of the arc lies on the polygon
    int pocket = -1;   // puncture index when this edge bounds a pocket
};

} // namespace

Triangulation initial_triangulation(const SurfaceSpec& spec) {
    require_valid(spec);
    const int g = spec.genus;
    const int b = spec.boundary_count();
    const auto punctures = spec.all_punctures();
    const int p = static_cast<int>(punctures.size());
    const int m1 = spec.boundaries[0];

    std::vector<ArcInfo> arcs;
    auto add_arc = [&](const std::string& label, bool boundary) {
        arcs.push_back({label, boundary});
        return static_cast<int>(arcs.size() - 1);
    };

    // Special case: once-punctured monogon, the single self-folded triangle.
    if (g == 0 && b == 1 && m1 == 1 && p == 1) {
        int r = add_arc("1", false);
        int b11 = add_arc("b1.1", true);
        std::vector<std::string> names = {"M1.1", punctures[0]};
        Triangle t;
        t.side = {Dart{r, 0}, Dart{r, 1}, Dart{b11, 0}};
        t.corner = {0, 1, 0};
        Triangulation out(spec, std::move(arcs), {t}, std::move(names));
        out.require_valid();
        return out;
    }

    std::vector<PolyEdge> word;
    int next_internal = 1;
    auto internal_label = [&]() { return std::to_string(next_internal++); };

    for (int k = 1; k <= m1; ++k) word.push_back({"b1." + std::to_string(k), true, 0, -1});
    std::vector<std::pair<std::string, std::string>> handle_arcs; // (x, y) labels per handle
    for (int i = 0; i < g; ++i) {
        std::string x = internal_label(), y = internal_label();
        handle_arcs.push_back({x, y});
        word.push_back({x, false, 0, -1});
        word.push_back({y, false, 0, -1});
        word.push_back({x, false, 1, -1});
        word.push_back({y, false, 1, -1});
    }
    for (int j = 2; j <= b; ++j) {
        std::string c = internal_label();
        word.push_back({c, false, 0, -1});
        for (int k = 1; k <= spec.boundaries[static_cast<size_t>(j - 1)]; ++k)
            word.push_back({"b" + std::to_string(j) + "." + std::to_string(k), true, 0, -1});
        word.push_back({c, false, 1, -1});
    }
    std::vector<std::string> loop_labels(static_cast<size_t>(p)), radius_labels(static_cast<size_t>(p));
    for (int q = 0; q < p; ++q) {
        loop_labels[static_cast<size_t>(q)] = internal_label();
        word.push_back({loop_labels[static_cast<size_t>(q)], false, 0, q});
    }
    for (int q = 0; q < p; ++q) radius_labels[static_cast<size_t>(q)] = internal_label();

    const int N = static_cast<int>(word.size());
    if (N < 3) fail(Errc::Internal, "polygon model degenerate for this spec");

    // Register word arcs (internal arcs once).
    std::map<std::string, int> arc_id;
    for (const auto& e : word) {
        if (arc_id.count(e.label)) continue;
        arc_id[e.label] = add_arc(e.label, e.boundary);
    }
    // Fan diagonals d_k from corner 0 to corner k, 2 <= k <= N-2.
    std::map<int, int> diag;
    for (int k = 2; k <= N - 2; ++k) diag[k] = add_arc(internal_label(), false);
    for (int q = 0; q < p; ++q) arc_id[radius_labels[static_cast<size_t>(q)]] =
        add_arc(radius_labels[static_cast<size_t>(q)], false);

    // Corners of the polygon are provisional vertices 0..N-1; pocket tips are
    // N+q. Union-find merges corners identified by the arc gluings.
    std::vector<int> uf(static_cast<size_t>(N + p));
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int a) { return uf[static_cast<size_t>(a)] == a ? a : uf[static_cast<size_t>(a)] = find(uf[static_cast<size_t>(a)]); };
    auto unite = [&](int a, int c) { uf[static_cast<size_t>(find(a))] = find(c); };

    // Edge e_k runs corner k -> corner (k+1)%N. Identified pairs glue crosswise.
    std::map<std::string, std::vector<int>> occurrences;
    for (int k = 0; k < N; ++k) occurrences[word[static_cast<size_t>(k)].label].push_back(k);
    for (const auto& [label, occ] : occurrences) {
        if (occ.size() == 2) {
            int a = occ[0], c = occ[1];
            unite(a, (c + 1) % N);
            unite(c, (a + 1) % N);
        }
    }
    // Pocket gluing: l_q on the polygon (corner k -> k+1) meets the pocket
    // triangle (l_q', r_q, r_q) whose outer corners both land on the polygon
    // corners of l_q; the radius forces them together.
    for (int k = 0; k < N; ++k)
        if (word[static_cast<size_t>(k)].pocket >= 0) unite(k, (k + 1) % N);

    // Name the vertex classes.
    std::map<int, std::string> class_name;
    auto set_name = [&](int corner, const std::string& nm) {
        int r = find(corner);
        auto it = class_name.find(r);
        if (it == class_name.end()) class_name[r] = nm;
        else if (it->second != nm)
            fail(Errc::Internal, "vertex naming conflict: " + it->second + " vs " + nm);
    };
    {
        int k = 0;
        for (int j = 1; j <= b; ++j) {
            const int mj = spec.boundaries[static_cast<size_t>(j - 1)];
            // locate this component's segments in the word
            std::vector<int> pos;
            for (int w = 0; w < N; ++w)
                if (word[static_cast<size_t>(w)].boundary &&
                    word[static_cast<size_t>(w)].label.rfind("b" + std::to_string(j) + ".", 0) == 0)
                    pos.push_back(w);
            for (int t = 0; t < mj; ++t)
                set_name(pos[static_cast<size_t>(t)], "M" + std::to_string(j) + "." + std::to_string(t + 1));
            (void)k;
        }
        for (int q = 0; q < p; ++q) set_name(N + q, punctures[static_cast<size_t>(q)]);
    }

    std::vector<std::string> names;
    std::map<int, int> class_vertex;
    auto vid = [&](int corner) {
        int r = find(corner);
        auto it = class_vertex.find(r);
        if (it != class_vertex.end()) return it->second;
        auto nm = class_name.find(r);
        if (nm == class_name.end()) fail(Errc::Internal, "unnamed vertex class in construction");
        names.push_back(nm->second);
        class_vertex[r] = static_cast<int>(names.size() - 1);
        return class_vertex[r];
    };

    std::vector<Triangle> tris;
    auto word_dart = [&](int k) {
        return Dart{arc_id.at(word[static_cast<size_t>(k)].label), word[static_cast<size_t>(k)].side};
    };
    // Fan triangles (d_k: 0->k, e_k: k->k+1, d_{k+1} reversed: k+1->0).
    for (int k = 1; k <= N - 2; ++k) {
        Dart dk = (k == 1) ? word_dart(0) : Dart{diag.at(k), 0};
        Dart ek = word_dart(k);
        Dart dk1 = (k == N - 2) ? word_dart(N - 1) : Dart{diag.at(k + 1), 1};
        Triangle t;
        t.side = {dk, ek, dk1};
        t.corner = {vid(0), vid(k), vid(k + 1 == N ? 0 : k + 1)};
        tris.push_back(t);
    }
    // Pocket triangles (l_q', r0: base->tip, r1: tip->base).
    for (int k = 0; k < N; ++k) {
        const auto& e = word[static_cast<size_t>(k)];
        if (e.pocket < 0) continue;
        int q = e.pocket;
        int r = arc_id.at(radius_labels[static_cast<size_t>(q)]);
        Triangle t;
        t.side = {Dart{arc_id.at(e.label), 1}, Dart{r, 0}, Dart{r, 1}};
        t.corner = {vid(k + 1 == N ? 0 : k + 1), vid(k), vid(N + q)};
        tris.push_back(t);
    }

    Triangulation out(spec, std::move(arcs), std::move(tris), std::move(names));
    out.require_valid();
    return out;
}

SignedTriangulation initial_signed_triangulation(const SurfaceSpec& spec) {
    return SignedTriangulation(initial_triangulation(spec), {});
}

} // namespace sfl
