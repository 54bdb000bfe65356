#include "sfl/surface.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sfl {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::NegativeRank: return "NegativeRank";
    case Errc::NotFlippable: return "NotFlippable";
    case Errc::NotSelfFolded: return "NotSelfFolded";
    case Errc::VortexLFlip: return "VortexLFlip";
    case Errc::NotEnclosing: return "NotEnclosing";
    case Errc::ParseError: return "ParseError";
    case Errc::TooFewDecorations: return "TooFewDecorations";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::DoubleArrow: return "DoubleArrow";
    case Errc::UndefinedMutation: return "UndefinedMutation";
    case Errc::NonUnitQuadraticTerm: return "NonUnitQuadraticTerm";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::UnsupportedEdgeCase: return "UnsupportedEdgeCase";
    case Errc::UnassignedGenerator: return "UnassignedGenerator";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::IncompleteGraph: return "IncompleteGraph";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

int SurfaceSpec::marked_points() const {
    return std::accumulate(boundaries.begin(), boundaries.end(), 0);
}

bool SurfaceSpec::is_plain(const std::string& p) const {
    return std::find(plain_punctures.begin(), plain_punctures.end(), p) != plain_punctures.end();
}

bool SurfaceSpec::is_vortex(const std::string& p) const {
    return std::find(vortex_punctures.begin(), vortex_punctures.end(), p) != vortex_punctures.end();
}

std::vector<std::string> SurfaceSpec::all_punctures() const {
    std::vector<std::string> out = plain_punctures;
    out.insert(out.end(), vortex_punctures.begin(), vortex_punctures.end());
    return out;
}

std::string Diagnostics::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

static bool sorted_unique(const std::vector<std::string>& v) {
    return std::is_sorted(v.begin(), v.end()) &&
           std::adjacent_find(v.begin(), v.end()) == v.end();
}

Diagnostics validate(const SurfaceSpec& spec) {
    Diagnostics d;
    if (spec.genus < 0) d.violations.push_back("genus must be non-negative");
    if (spec.boundaries.empty()) {
        d.violations.push_back("boundary nonempty: at least one boundary component with a marked point");
    }
    for (int mj : spec.boundaries) {
        if (mj < 1) {
            d.violations.push_back("each boundary component has >= 1 marked point");
            break;
        }
    }
    if (!sorted_unique(spec.plain_punctures))
        d.violations.push_back("plain puncture labels must be sorted and unique");
    if (!sorted_unique(spec.vortex_punctures))
        d.violations.push_back("vortex puncture labels must be sorted and unique");
    {
        std::set<std::string> plain(spec.plain_punctures.begin(), spec.plain_punctures.end());
        for (const auto& v : spec.vortex_punctures) {
            if (plain.count(v)) {
                d.violations.push_back("plain and vortex puncture sets must be disjoint");
                break;
            }
        }
    }
    if (!d.ok()) return d;

    const int g = spec.genus, b = spec.boundary_count();
    const int m = spec.marked_points(), p = spec.puncture_count();
    const int aleph = 4 * g + 2 * p + 2 * b + m - 4;
    if (aleph < 1) d.violations.push_back("decoration count aleph = 4g+2p+2b+m-4 must be >= 1");
    const int n = 6 * g + 3 * p + 3 * b + m - 6;
    if (n < 0) d.violations.push_back("rank n = 6g+3p+3b+m-6 must be >= 0");
    if (spec.has_vortices()) {
        if (n < 2) d.violations.push_back("n >= 2 in MSx mode");
        if (b < 1) d.violations.push_back("boundary nonempty in MSx mode");
    }
    return d;
}

void require_valid(const SurfaceSpec& spec) {
    Diagnostics d = validate(spec);
    if (!d.ok()) fail(Errc::InvalidSpec, d.to_string());
}

int rank_open_arcs(const SurfaceSpec& spec) {
    require_valid(spec);
    const int n = 6 * spec.genus + 3 * spec.puncture_count() + 3 * spec.boundary_count() +
                  spec.marked_points() - 6;
    if (n < 0) fail(Errc::NegativeRank, "6g+3p+3b+m-6 < 0, no triangulation in scope");
    return n;
}

int triangle_count(const SurfaceSpec& spec) {
    const int n = rank_open_arcs(spec);
    const int m = spec.marked_points();
    if ((2 * n + m) % 3 != 0) fail(Errc::Internal, "2n+m not divisible by 3");
    return (2 * n + m) / 3;
}

int decoration_count(const SurfaceSpec& spec) {
    require_valid(spec);
    const int aleph = 4 * spec.genus + 2 * spec.puncture_count() + 2 * spec.boundary_count() +
                      spec.marked_points() - 4;
    if (aleph < 1) fail(Errc::InvalidSpec, "aleph < 1");
    if (aleph != triangle_count(spec)) fail(Errc::Internal, "aleph != (2n+m)/3");
    return aleph;
}

int sbr_rank(const SurfaceSpec& spec) {
    require_valid(spec);
    return 2 * spec.genus + spec.boundary_count() + spec.puncture_count() - 1;
}

SurfaceSpec spec_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ParseError, e.what());
    }
    if (!j.is_object()) fail(Errc::ParseError, "spec file must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "genus" && k != "boundaries" && k != "punctures")
            fail(Errc::ParseError, "unknown key \"" + k + "\"");
    }
    SurfaceSpec spec;
    if (j.contains("genus")) {
        if (!j["genus"].is_number_integer()) fail(Errc::ParseError, "\"genus\" must be an integer");
        spec.genus = j["genus"].get<int>();
    }
    if (!j.contains("boundaries") || !j["boundaries"].is_array())
        fail(Errc::ParseError, "\"boundaries\" must be an array of integers");
    for (const auto& e : j["boundaries"]) {
        if (!e.is_number_integer()) fail(Errc::ParseError, "\"boundaries\" entries must be integers");
        spec.boundaries.push_back(e.get<int>());
    }
    if (j.contains("punctures")) {
        const auto& pj = j["punctures"];
        if (!pj.is_object()) fail(Errc::ParseError, "\"punctures\" must be an object");
        for (auto it = pj.begin(); it != pj.end(); ++it) {
            if (it.key() != "plain" && it.key() != "vortex")
                fail(Errc::ParseError, "unknown key \"punctures." + it.key() + "\"");
        }
        auto read_list = [&](const char* key, std::vector<std::string>& out) {
            if (!pj.contains(key)) return;
            if (!pj[key].is_array()) fail(Errc::ParseError, std::string("\"punctures.") + key + "\" must be an array");
            for (const auto& e : pj[key]) {
                if (!e.is_string()) fail(Errc::ParseError, "puncture labels must be strings");
                out.push_back(e.get<std::string>());
            }
            std::sort(out.begin(), out.end());
        };
        read_list("plain", spec.plain_punctures);
        read_list("vortex", spec.vortex_punctures);
    }
    return spec;
}

std::string spec_to_json_text(const SurfaceSpec& spec) {
    nlohmann::json j;
    j["genus"] = spec.genus;
    j["boundaries"] = spec.boundaries;
    j["punctures"] = {{"plain", spec.plain_punctures}, {"vortex", spec.vortex_punctures}};
    return j.dump(2);
}

SurfaceSpec disk(int m) {
    SurfaceSpec s;
    s.boundaries = {m};
    return s;
}

SurfaceSpec punctured_disk(int m, int plain, int vortex) {
    SurfaceSpec s;
    s.boundaries = {m};
    for (int i = 1; i <= plain; ++i) s.plain_punctures.push_back("P" + std::to_string(i));
    for (int i = 1; i <= vortex; ++i) s.vortex_punctures.push_back("V" + std::to_string(i));
    return s;
}

SurfaceSpec annulus(int m1, int m2, int plain, int vortex) {
    SurfaceSpec s;
    s.boundaries = {m1, m2};
    for (int i = 1; i <= plain; ++i) s.plain_punctures.push_back("P" + std::to_string(i));
    for (int i = 1; i <= vortex; ++i) s.vortex_punctures.push_back("V" + std::to_string(i));
    return s;
}

} // namespace sfl
