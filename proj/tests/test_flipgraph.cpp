#include "doctest.h"

#include <map>
#include <set>

#include "oracles.hpp"
#include "sfl/flipgraph.hpp"

using namespace sfl;

namespace {

std::set<std::string> key_set(const FlipGraph& fg) {
    return std::set<std::string>(fg.keys.begin(), fg.keys.end());
}

void check_regular(const FlipGraph& fg, int n) {
    auto indeg = fg.in_degree_table();
    for (int v = 0; v < fg.vertex_count(); ++v) {
        CHECK(static_cast<int>(fg.out_edges(v).size()) == n);
        CHECK(indeg[static_cast<size_t>(v)] == n);
    }
}

} // namespace

TEST_CASE("polygon oracle matches the catalan numbers it must") {
    CHECK(oracle::polygon_triangulation_count(4) == 2);
    CHECK(oracle::polygon_triangulation_count(5) == 5);
    CHECK(oracle::polygon_triangulation_count(6) == 14);
    CHECK(oracle::polygon_triangulation_count(7) == 42);
}

TEST_CASE("disk flip graphs match the polygon oracle") {
    for (int m = 4; m <= 7; ++m) {
        FlipGraph fg = build(disk(m), GraphMode::undecorated);
        CHECK(fg.complete);
        CHECK(fg.vertex_count() == oracle::polygon_triangulation_count(m));
        check_regular(fg, rank_open_arcs(disk(m)));
        for (int v = 0; v < fg.vertex_count(); ++v) CHECK(fg.loop_count(v) == 0);
    }
}

TEST_CASE("punctured surfaces match the gluing oracle") {
    SUBCASE("monogon: one vertex, one loop") {
        auto all = oracle::all_triangulations(punctured_disk(1, 1));
        CHECK(all.size() == 1);
        FlipGraph fg = build(punctured_disk(1, 1), GraphMode::undecorated);
        CHECK(fg.vertex_count() == 1);
        CHECK(fg.edges.size() == 1);
        CHECK(fg.edges[0].kind == EdgeKind::lflip);
        CHECK(key_set(fg) == oracle::canonical_keys(all));
        check_regular(fg, 1);
    }
    SUBCASE("digon: T_L, T_M, T_R") {
        auto all = oracle::all_triangulations(punctured_disk(2, 1));
        CHECK(all.size() == 3);
        FlipGraph fg = build(punctured_disk(2, 1), GraphMode::undecorated);
        CHECK(fg.vertex_count() == 3);
        CHECK(key_set(fg) == oracle::canonical_keys(all));
        check_regular(fg, 2);
        for (int v = 0; v < fg.vertex_count(); ++v)
            CHECK(fg.loop_count(v) ==
                  static_cast<int>(fg.rep(v).isolated_punctures().size()));
    }
    SUBCASE("once-punctured triangle") {
        auto all = oracle::all_triangulations(punctured_disk(3, 1));
        FlipGraph fg = build(punctured_disk(3, 1), GraphMode::undecorated);
        CHECK(fg.complete);
        CHECK(fg.vertex_count() == static_cast<int>(all.size()));
        CHECK(key_set(fg) == oracle::canonical_keys(all));
        check_regular(fg, 3);
        for (int v = 0; v < fg.vertex_count(); ++v)
            CHECK(fg.loop_count(v) ==
                  static_cast<int>(fg.rep(v).isolated_punctures().size()));
    }
    SUBCASE("annulus 1+1") {
        auto all = oracle::all_triangulations(annulus(1, 1));
        FlipGraph fg = build(annulus(1, 1), GraphMode::undecorated);
        CHECK(fg.complete);
        CHECK(key_set(fg) == oracle::canonical_keys(all));
        check_regular(fg, 2);
    }
}

TEST_CASE("unoriented reduction agrees with direct unoriented BFS") {
    for (SurfaceSpec s : {disk(5), disk(6), punctured_disk(2, 1), punctured_disk(3, 1),
                          annulus(1, 1)}) {
        FlipGraph fg = build(s, GraphMode::undecorated);
        UnorientedGraph u1 = to_unoriented(fg);
        UnorientedGraph u2 = build_unoriented(s, GraphMode::undecorated);
        CHECK(std::set<std::string>(u1.keys.begin(), u1.keys.end()) ==
              std::set<std::string>(u2.keys.begin(), u2.keys.end()));
        auto edge_keys = [](const UnorientedGraph& g) {
            std::set<std::pair<std::string, std::string>> out;
            for (auto [a, b] : g.edges) {
                std::string ka = g.keys[static_cast<size_t>(a)];
                std::string kb = g.keys[static_cast<size_t>(b)];
                out.insert({std::min(ka, kb), std::max(ka, kb)});
            }
            return out;
        };
        CHECK(edge_keys(u1) == edge_keys(u2));
    }
    SUBCASE("disk m=4 reduces to a single unoriented edge") {
        UnorientedGraph u = to_unoriented(build(disk(4), GraphMode::undecorated));
        CHECK(u.keys.size() == 2);
        CHECK(u.edges.size() == 1);
    }
}

TEST_CASE("determinism across runs and thread counts") {
    for (int threads : {1, 2, 4}) {
        FlipGraph a = build(punctured_disk(3, 1), GraphMode::undecorated, 1000000, threads);
        FlipGraph b = build(punctured_disk(3, 1), GraphMode::undecorated, 1000000, 1);
        CHECK(a.keys == b.keys);
        CHECK(a.edges == b.edges);
    }
}

TEST_CASE("truncation flag") {
    FlipGraph fg = build(punctured_disk(2, 1), GraphMode::undecorated, 1);
    CHECK(fg.truncated);
    CHECK(!fg.complete);
    CHECK_THROWS_AS(verify_relations(fg), Error);
    CHECK_THROWS_AS(to_unoriented(fg), Error);
}

TEST_CASE("signed graphs") {
    SUBCASE("digon with vortex: the vortex square") {
        SurfaceSpec s = punctured_disk(2, 0, 1);
        FlipGraph fg = build(s, GraphMode::signed_mode);
        CHECK(fg.complete);
        CHECK(fg.vertex_count() == 4);
        check_regular(fg, 2);
        for (const auto& e : fg.edges) CHECK(e.kind == EdgeKind::flip);
        UnorientedGraph u = to_unoriented(fg);
        CHECK(u.keys.size() == 4);
        CHECK(u.edges.size() == 4); // the square involving the vortex
        std::map<int, int> deg;
        for (auto [a, b] : u.edges) {
            deg[a]++;
            deg[b]++;
        }
        for (auto [v, d] : deg) CHECK(d == 2);
    }
    SUBCASE("punctured triangle with vortex: the 14-vertex associahedron") {
        SurfaceSpec s = punctured_disk(3, 0, 1);
        FlipGraph fg = build(s, GraphMode::signed_mode);
        CHECK(fg.complete);
        CHECK(fg.vertex_count() == 14);
        check_regular(fg, 3);
        UnorientedGraph u = to_unoriented(fg);
        CHECK(u.keys.size() == 14);
        CHECK(u.edges.size() == 21);
    }
    SUBCASE("fiber collapse counts are 2^(enclosed vortices)") {
        SurfaceSpec s = punctured_disk(3, 0, 1);
        FlipGraph fg = build(s, GraphMode::signed_mode);
        for (int v = 0; v < fg.vertex_count(); ++v) {
            const SignedTriangulation& st = fg.reps[static_cast<size_t>(v)];
            int enclosed = 0;
            for (const auto& p : st.base().isolated_punctures())
                if (s.is_vortex(p)) enclosed++;
            int hits = 0;
            for (int sign : {+1, -1}) {
                SignedTriangulation raw(st.base(), {{"V1", sign}});
                if (raw.canonical_form() == fg.keys[static_cast<size_t>(v)]) hits++;
            }
            CHECK(hits == (enclosed ? 2 : 1));
        }
    }
    SUBCASE("plain punctures keep loops in signed mode") {
        FlipGraph fg = build(punctured_disk(2, 1), GraphMode::signed_mode);
        CHECK(fg.vertex_count() == 3);
        int loops = 0;
        for (const auto& e : fg.edges)
            if (e.kind == EdgeKind::lflip) loops++;
        CHECK(loops == 2);
    }
}

TEST_CASE("relation closure") {
    SUBCASE("digon: thin dumbbells, symmetric hexagons and the Br4 assembly") {
        FlipGraph fg = build(punctured_disk(2, 1), GraphMode::undecorated);
        RelationReport r = verify_relations(fg);
        CHECK(r.all_verified());
        CHECK(r.by_kind["thin-db"].found == 4);
        CHECK(r.by_kind["sym-hex"].found == 2);
        CHECK(r.by_kind["square"].found == 0);
        RelationReport b = verify_br4_assembly(fg);
        CHECK(b.all_verified());
        CHECK(b.by_kind["br4"].found == 2);
    }
    SUBCASE("disk m=6: squares and pentagons close, hexagons vacuous") {
        FlipGraph fg = build(disk(6), GraphMode::undecorated);
        RelationReport r = verify_relations(fg);
        CHECK(r.all_verified());
        CHECK(r.by_kind["square"].found > 0);
        CHECK(r.by_kind["pentagon"].found > 0);
        CHECK(r.by_kind["thin-db"].found == 0);
        CHECK(r.by_kind["sym-hex"].found == 0);
        RelationReport b = verify_br4_assembly(fg);
        CHECK(b.by_kind["br4"].found == 0);
        CHECK(b.all_verified());
    }
    SUBCASE("disk m=5: the single pentagon closes") {
        FlipGraph fg = build(disk(5), GraphMode::undecorated);
        RelationReport r = verify_relations(fg);
        CHECK(r.all_verified());
        CHECK(r.by_kind["pentagon"].found > 0);
    }
    SUBCASE("once-punctured triangle: everything closes") {
        FlipGraph fg = build(punctured_disk(3, 1), GraphMode::undecorated);
        CHECK(verify_relations(fg).all_verified());
        CHECK(verify_br4_assembly(fg).all_verified());
    }
    SUBCASE("signed graphs verify squares and pentagons too") {
        FlipGraph fg = build(punctured_disk(3, 0, 1), GraphMode::signed_mode);
        RelationReport r = verify_relations(fg);
        CHECK(r.all_verified());
    }
}

TEST_CASE("exports") {
    SUBCASE("dot on the square") {
        FlipGraph fg = build(disk(4), GraphMode::undecorated);
        std::string dot = export_dot(fg);
        CHECK(dot.find("digraph") != std::string::npos);
        CHECK(dot.find("v0 -> v1") != std::string::npos);
        CHECK(dot.find("v1 -> v0") != std::string::npos);
    }
    SUBCASE("monogon: one node with a loop") {
        FlipGraph fg = build(punctured_disk(1, 1), GraphMode::undecorated);
        std::string dot = export_dot(fg);
        CHECK(dot.find("v0 -> v0") != std::string::npos);
        CHECK(dot.find("1:lflip") != std::string::npos);
    }
    SUBCASE("json round trip is the identity") {
        for (SurfaceSpec s : {disk(5), punctured_disk(2, 1)}) {
            FlipGraph fg = build(s, GraphMode::undecorated);
            std::string js = export_json(fg);
            FlipGraph back = import_json(js, s);
            CHECK(export_json(back) == js);
        }
    }
}
