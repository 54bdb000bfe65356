#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>

#include "sfl/triangulation.hpp"

using namespace sfl;

namespace {

// Relabels internal arcs, permutes triangle order, rotates triples and swaps
// side indices; all of that must be invisible to canonical_form.
Triangulation scramble(const Triangulation& t, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<ArcInfo> arcs = t.arcs();
    std::vector<int> internal;
    for (size_t i = 0; i < arcs.size(); ++i)
        if (!arcs[i].boundary) internal.push_back(static_cast<int>(i));
    std::vector<std::string> labels;
    for (int i : internal) labels.push_back(arcs[static_cast<size_t>(i)].label);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (size_t k = 0; k < internal.size(); ++k)
        arcs[static_cast<size_t>(internal[k])].label = labels[k];

    std::vector<Triangle> tris = t.triangles();
    std::vector<int> side_swap(arcs.size(), 0);
    for (int i : internal) side_swap[static_cast<size_t>(i)] = rng() % 2;
    for (auto& tri : tris)
        for (auto& d : tri.side)
            if (!arcs[static_cast<size_t>(d.arc)].boundary && side_swap[static_cast<size_t>(d.arc)])
                d.side = 1 - d.side;
    for (auto& tri : tris) {
        int r = static_cast<int>(rng() % 3);
        Triangle rot;
        for (int k = 0; k < 3; ++k) {
            rot.side[k] = tri.side[(r + k) % 3];
            rot.corner[k] = tri.corner[(r + k) % 3];
        }
        tri = rot;
    }
    std::shuffle(tris.begin(), tris.end(), rng);
    return Triangulation(t.spec(), arcs, tris, t.vertex_names());
}

} // namespace

TEST_CASE("initial triangulation shapes") {
    SUBCASE("disk m=4: two triangles sharing a diagonal") {
        Triangulation t = initial_triangulation(disk(4));
        CHECK(t.triangles().size() == 2);
        CHECK(t.internal_arc_labels().size() == 1);
        CHECK(t.validate().ok());
    }
    SUBCASE("once-punctured monogon: single self-folded triangle") {
        Triangulation t = initial_triangulation(punctured_disk(1, 1));
        CHECK(t.triangles().size() == 1);
        CHECK(t.internal_arc_labels() == std::vector<std::string>{"1"});
        CHECK(t.self_folded_triangles().size() == 1);
        CHECK(t.is_admissible());
    }
    SUBCASE("once-punctured triangle: self-folded plus two plain triangles") {
        Triangulation t = initial_triangulation(punctured_disk(3, 1));
        CHECK(t.triangles().size() == 3);
        CHECK(t.internal_arc_labels().size() == 3);
        CHECK(t.self_folded_triangles().size() == 1);
        CHECK(t.is_admissible());
    }
    SUBCASE("annulus, torus and genus-2 initial triangulations validate") {
        CHECK(initial_triangulation(annulus(1, 1)).validate().ok());
        SurfaceSpec torus;
        torus.genus = 1;
        torus.boundaries = {1};
        CHECK(initial_triangulation(torus).validate().ok());
        SurfaceSpec g2;
        g2.genus = 2;
        g2.boundaries = {2, 1};
        g2.plain_punctures = {"P1"};
        CHECK(initial_triangulation(g2).validate().ok());
    }
    SUBCASE("sweep: every valid spec in range yields a valid admissible triangulation") {
        for (int g = 0; g <= 2; ++g)
            for (int b = 1; b <= 2; ++b)
                for (int m = b; m <= 4; ++m)
                    for (int p = 0; p <= 2; ++p) {
                        SurfaceSpec s;
                        s.genus = g;
                        s.boundaries.assign(static_cast<size_t>(b), 1);
                        s.boundaries[0] = m - (b - 1);
                        for (int i = 1; i <= p; ++i)
                            s.plain_punctures.push_back("P" + std::to_string(i));
                        if (!validate(s).ok()) continue;
                        Triangulation t = initial_triangulation(s);
                        CHECK(t.validate().ok());
                        CHECK(t.is_admissible());
                        CHECK(static_cast<int>(t.internal_arc_labels().size()) ==
                              rank_open_arcs(s));
                        CHECK(static_cast<int>(t.triangles().size()) == triangle_count(s));
                    }
    }
}

TEST_CASE("flip mechanics") {
    SUBCASE("disk m=4: flip is an involution through the replaced arc") {
        Triangulation t = initial_triangulation(disk(4));
        std::string d = t.internal_arc_labels()[0];
        Triangulation f = t.flip(d);
        CHECK(f.validate().ok());
        CHECK(f.canonical_form() != t.canonical_form());
        CHECK(f.flip(d).canonical_form() == t.canonical_form());
    }
    SUBCASE("digon: flipping the enclosing edge reaches T_M") {
        Triangulation tl = initial_triangulation(punctured_disk(2, 1));
        CHECK(tl.isolated_punctures() == std::set<std::string>{"P1"});
        Triangulation tm = tl.flip("1");
        CHECK(tm.validate().ok());
        CHECK(tm.isolated_punctures().empty());
        CHECK(tm.flip("1").canonical_form() == tl.canonical_form());
        Triangulation tr = tm.flip("2");
        CHECK(tr.isolated_punctures() == std::set<std::string>{"P1"});
        CHECK(tr.canonical_form() != tl.canonical_form());
        // at T_R the folded slot is 1 and the enclosing slot is 2
        CHECK(tr.is_self_folded_edge("1"));
        CHECK(!tr.is_self_folded_edge("2"));
    }
    SUBCASE("self-folded edges cannot be flipped, boundary neither") {
        Triangulation t = initial_triangulation(punctured_disk(2, 1));
        CHECK_THROWS_AS(t.flip("2"), Error);
        CHECK_THROWS_AS(t.flip("b1.1"), Error);
    }
    SUBCASE("lflip is the identity at self-folded edges and rejects others") {
        Triangulation t = initial_triangulation(punctured_disk(2, 1));
        CHECK(t.lflip("2").canonical_form() == t.canonical_form());
        CHECK_THROWS_AS(t.lflip("1"), Error);
        Triangulation mono = initial_triangulation(punctured_disk(1, 1));
        CHECK(mono.lflip("1").canonical_form() == mono.canonical_form());
    }
    SUBCASE("all flips of every small surface stay valid") {
        for (SurfaceSpec s : {disk(5), disk(6), punctured_disk(2, 1), punctured_disk(3, 1),
                              annulus(1, 1), annulus(2, 1)}) {
            Triangulation t = initial_triangulation(s);
            for (const auto& a : t.internal_arc_labels()) {
                if (t.is_self_folded_edge(a)) continue;
                Triangulation f = t.flip(a);
                CHECK(f.validate().ok());
                CHECK(f.flip(a).canonical_form() == t.canonical_form());
            }
        }
    }
}

TEST_CASE("canonical form") {
    SUBCASE("invariant under relabeling, idempotent") {
        for (SurfaceSpec s :
             {disk(5), punctured_disk(2, 1), punctured_disk(3, 1), annulus(2, 1)}) {
            Triangulation t = initial_triangulation(s);
            std::string flippable;
            for (const auto& a : t.internal_arc_labels())
                if (!t.is_self_folded_edge(a)) flippable = a;
            Triangulation f = t.flip(flippable);
            for (unsigned seed = 1; seed <= 8; ++seed) {
                Triangulation st = scramble(t, seed);
                CHECK(st.validate().ok());
                CHECK(st.canonical_form() == t.canonical_form());
                CHECK(scramble(f, seed).canonical_form() == f.canonical_form());
            }
        }
    }
    SUBCASE("square: the two diagonals give distinct encodings") {
        Triangulation t = initial_triangulation(disk(4));
        CHECK(t.flip("1").canonical_form() != t.canonical_form());
    }
    SUBCASE("punctures are pinned") {
        // two plain punctures in a digon: swapping them is visible
        SurfaceSpec s = punctured_disk(2, 2);
        Triangulation t = initial_triangulation(s);
        std::vector<std::string> names = t.vertex_names();
        for (auto& nm : names) {
            if (nm == "P1") nm = "P2";
            else if (nm == "P2") nm = "P1";
        }
        Triangulation swapped(t.spec(), t.arcs(), t.triangles(), names);
        CHECK(swapped.validate().ok());
        CHECK(swapped.canonical_form() != t.canonical_form());
    }
}

TEST_CASE("interchange json") {
    Triangulation t = initial_triangulation(punctured_disk(3, 1));
    Triangulation back = Triangulation::from_json_text(t.to_json_text(), t.spec());
    CHECK(back.canonical_form() == t.canonical_form());
}

TEST_CASE("signed triangulations") {
    SUBCASE("signs normalize at enclosed vortices") {
        SurfaceSpec s = punctured_disk(2, 0, 1); // digon around a vortex
        Triangulation tl = initial_triangulation(s);
        SignedTriangulation st(tl, {{"V1", -1}});
        CHECK(st.sign_of("V1") == +1);
    }
    SUBCASE("vortex L-flips refuse") {
        SurfaceSpec s = punctured_disk(2, 0, 1);
        SignedTriangulation st = initial_signed_triangulation(s);
        CHECK_THROWS_AS(st.flip("2"), Error);
    }
    SUBCASE("plain L-flips are loops") {
        SignedTriangulation st = initial_signed_triangulation(punctured_disk(2, 1));
        CHECK(st.flip("2").canonical_form() == st.canonical_form());
    }
    SUBCASE("releasing a vortex branches into both signs") {
        SurfaceSpec s = punctured_disk(2, 0, 1);
        SignedTriangulation st = initial_signed_triangulation(s);
        auto targets = st.flip_targets("1");
        CHECK(targets.size() == 2);
        CHECK(targets[0].base().canonical_form() == targets[1].base().canonical_form());
        CHECK(targets[0].canonical_form() != targets[1].canonical_form());
        // flipping back re-normalizes both branches to the same vertex
        CHECK(targets[0].flip("1").canonical_form() == targets[1].flip("1").canonical_form());
    }
    SUBCASE("diamond flip on the digon: T_L -> T_R -> T_L") {
        for (SurfaceSpec s : {punctured_disk(2, 1), punctured_disk(2, 0, 1)}) {
            SignedTriangulation tl = initial_signed_triangulation(s);
            SignedTriangulation tr = tl.diamond_flip("1");
            CHECK(tr.base().isolated_punctures().size() == 1);
            CHECK(tr.canonical_form() != tl.canonical_form());
            // the enclosing slot at T_R is 2
            SignedTriangulation back = tr.diamond_flip("2");
            CHECK(back.canonical_form() == tl.canonical_form());
        }
    }
    SUBCASE("monogon has no diamond flip: the enclosing side is boundary") {
        SignedTriangulation st = initial_signed_triangulation(punctured_disk(1, 1));
        CHECK_THROWS_AS(st.diamond_flip("1"), Error);
        CHECK_THROWS_AS(st.diamond_flip("b1.1"), Error);
    }
    SUBCASE("diamond flips pair up across every enclosing edge of the punctured triangle") {
        SignedTriangulation t0 = initial_signed_triangulation(punctured_disk(3, 1));
        for (const auto& sf : t0.base().self_folded_triangles()) {
            if (t0.base().arcs()[sf.enclosing.arc].boundary) continue;
            std::string enc = t0.base().arc_label(sf.enclosing.arc);
            SignedTriangulation d1 = t0.diamond_flip(enc);
            // the new enclosing slot is the old folded slot
            std::string enc2 = t0.base().arc_label(sf.folded_arc);
            CHECK(d1.diamond_flip(enc2).canonical_form() == t0.canonical_form());
        }
    }
}
