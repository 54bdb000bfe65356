#include "doctest.h"

#include "sfl/surface.hpp"

using namespace sfl;

TEST_CASE("rank formula") {
    CHECK(rank_open_arcs(punctured_disk(3, 1)) == 3);
    CHECK(rank_open_arcs(disk(4)) == 1);
    SurfaceSpec torus;
    torus.genus = 1;
    torus.boundaries = {1};
    CHECK(rank_open_arcs(torus) == 4);
}

TEST_CASE("triangle count") {
    CHECK(triangle_count(punctured_disk(3, 1)) == 3);
    CHECK(triangle_count(disk(4)) == 2);
    CHECK(triangle_count(punctured_disk(1, 1)) == 1);
}

TEST_CASE("decoration count") {
    CHECK(decoration_count(punctured_disk(3, 1)) == 3);
    CHECK(decoration_count(disk(4)) == 2);
    CHECK(decoration_count(annulus(1, 1)) == 2);
}

TEST_CASE("sbr rank") {
    CHECK(sbr_rank(punctured_disk(3, 1)) == 1);
    CHECK(sbr_rank(disk(3)) == 0);
    SurfaceSpec s;
    s.genus = 1;
    s.boundaries = {1, 1};
    s.plain_punctures = {"P1", "P2"};
    CHECK(sbr_rank(s) == 5);
}

TEST_CASE("validate") {
    CHECK(validate(punctured_disk(3, 1)).ok());

    SurfaceSpec no_boundary;
    no_boundary.genus = 0;
    auto d1 = validate(no_boundary);
    CHECK(!d1.ok());
    CHECK(d1.to_string().find("boundary nonempty") != std::string::npos);

    auto d2 = validate(punctured_disk(1, 0, 1)); // vortex monogon: n = 1
    CHECK(!d2.ok());
    CHECK(d2.to_string().find("n >= 2") != std::string::npos);

    SurfaceSpec overlap = punctured_disk(3, 1);
    overlap.vortex_punctures = {"P1"};
    CHECK(!validate(overlap).ok());

    CHECK(!validate(disk(2)).ok()); // aleph = 0
}

TEST_CASE("identity aleph = (2n+m)/3 across the sweep") {
    for (int g = 0; g <= 3; ++g)
        for (int b = 1; b <= 3; ++b)
            for (int m = b; m <= 6; ++m)
                for (int p = 0; p <= 3; ++p) {
                    SurfaceSpec s;
                    s.genus = g;
                    s.boundaries.assign(static_cast<size_t>(b), 1);
                    s.boundaries[0] = m - (b - 1);
                    if (s.boundaries[0] < 1) continue;
                    for (int i = 1; i <= p; ++i)
                        s.plain_punctures.push_back("P" + std::to_string(i));
                    if (!validate(s).ok()) continue;
                    const int n = rank_open_arcs(s);
                    const int aleph = decoration_count(s);
                    CHECK(aleph == (2 * n + m) / 3);
                    CHECK((2 * n + m) % 3 == 0);
                    CHECK(aleph >= 2 * p - 1);
                }
}

TEST_CASE("json round trip and strictness") {
    SurfaceSpec s = punctured_disk(3, 1, 1);
    SurfaceSpec back = spec_from_json_text(spec_to_json_text(s));
    CHECK(back == s);

    CHECK_THROWS_AS(spec_from_json_text("{\"genus\": 0, \"bogus\": 1, \"boundaries\": [3]}"),
                    Error);
    CHECK_THROWS_AS(spec_from_json_text("{\"boundaries\": \"x\"}"), Error);
    CHECK_THROWS_AS(spec_from_json_text("not json"), Error);
}
