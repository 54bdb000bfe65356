#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sfl/braid.hpp"
#include "sfl/flipgraph.hpp"
#include "sfl/quiver.hpp"
#include "sfl/surface.hpp"

namespace {

// exit codes: 0 pass, 1 verification failure, 2 input error, 3 truncation
constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kInputError = 2;
constexpr int kTruncated = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) sfl::fail(sfl::Errc::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& data) {
    if (out_path.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) sfl::fail(sfl::Errc::ParseError, "cannot open " + out_path + " for writing");
    out << data;
}

sfl::SurfaceSpec load_spec(const std::string& path) {
    return sfl::spec_from_json_text(read_file(path));
}

int cmd_info(const std::string& spec_file) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::Diagnostics d = sfl::validate(spec);
    if (!d.ok()) {
        std::cerr << "invalid spec: " << d.to_string() << "\n";
        return kInputError;
    }
    std::cout << "n=" << sfl::rank_open_arcs(spec) << " aleph=" << sfl::decoration_count(spec)
              << " triangles=" << sfl::triangle_count(spec) << " rk=" << sfl::sbr_rank(spec)
              << "\n";
    std::cout << "validation: ok\n";
    return kOk;
}

int cmd_enumerate(const std::string& spec_file, bool signed_mode, std::size_t max_vertices) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::FlipGraph fg = sfl::build(
        spec, signed_mode ? sfl::GraphMode::signed_mode : sfl::GraphMode::undecorated,
        max_vertices);
    std::cout << "vertices=" << fg.vertex_count() << " edges=" << fg.edges.size()
              << (fg.truncated ? " (truncated)" : "") << "\n";
    return fg.truncated ? kTruncated : kOk;
}

int cmd_verify(const std::string& spec_file, bool signed_mode, std::size_t max_vertices) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::GraphMode mode =
        signed_mode ? sfl::GraphMode::signed_mode : sfl::GraphMode::undecorated;
    sfl::FlipGraph fg = sfl::build(spec, mode, max_vertices);
    if (fg.truncated) {
        std::cout << "enumeration truncated at " << fg.vertex_count() << " vertices\n";
        return kTruncated;
    }
    bool ok = true;

    const int n = sfl::rank_open_arcs(spec);
    auto indeg = fg.in_degree_table();
    for (int v = 0; v < fg.vertex_count(); ++v) {
        int out = static_cast<int>(fg.out_edges(v).size());
        if (out != n || indeg[static_cast<size_t>(v)] != n) {
            std::cout << "regularity FAIL at vertex " << v << " (out=" << out
                      << " in=" << indeg[static_cast<size_t>(v)] << " n=" << n << ")\n";
            ok = false;
        }
    }
    std::cout << "regularity: " << (ok ? "pass" : "FAIL") << "\n";

    sfl::RelationReport rels = sfl::verify_relations(fg);
    std::cout << rels.summary();
    ok = ok && rels.all_verified();

    if (mode == sfl::GraphMode::undecorated) {
        sfl::RelationReport br4 = sfl::verify_br4_assembly(fg);
        std::cout << br4.summary();
        ok = ok && br4.all_verified();
    }

    // flip <-> mutation sweep over all non-loop edges where mutation is defined
    long long mut_checked = 0, mut_failed = 0;
    for (const auto& e : fg.edges) {
        if (e.kind != sfl::EdgeKind::flip) continue;
        const auto& src_rep = fg.reps[static_cast<size_t>(e.src)];
        sfl::QuiverWithPotential q = mode == sfl::GraphMode::signed_mode
                                         ? sfl::qp_from_signed(src_rep)
                                         : sfl::qp_from_triangulation(src_rep.base());
        int k = q.vertex_index(e.arc);
        if (k < 0) continue;
        if (q.loops_at(k) > 0 || q.has_two_cycle_through(k)) continue;
        sfl::QuiverWithPotential mutated = sfl::mutate(q, e.arc);
        sfl::QuiverWithPotential flipped;
        if (mode == sfl::GraphMode::signed_mode) {
            bool matched = false;
            for (const auto& tgt : src_rep.flip_targets(e.arc)) {
                if ((tgt.canonical_form() == fg.keys[static_cast<size_t>(e.dst)])) {
                    flipped = sfl::qp_from_signed(tgt);
                    matched = true;
                }
            }
            if (!matched) continue;
        } else {
            flipped = sfl::qp_from_triangulation(src_rep.base().flip(e.arc));
        }
        mut_checked++;
        if (!sfl::quiver_iso(flipped, mutated)) mut_failed++;
    }
    std::cout << "flip-mutation: " << (mut_checked - mut_failed) << "/" << mut_checked << "\n";
    ok = ok && mut_failed == 0;

    // presentation homomorphism checks
    if (sfl::decoration_count(spec) >= 2) {
        auto sbr = sfl::sbr_presentation(spec);
        auto r1 = sfl::verify_presentation(sbr);
        std::cout << "sbr-presentation: " << (r1.ok() ? "pass" : "FAIL") << " (" << r1.checked
                  << " checks)\n";
        ok = ok && r1.ok();
    }
    sfl::Triangulation t0 = sfl::initial_triangulation(spec);
    if (t0.is_admissible()) {
        auto mt = sfl::mt_presentation(t0);
        auto r2 = sfl::verify_presentation(mt);
        std::cout << "mt-presentation: " << (r2.ok() ? "pass" : "FAIL") << " (" << r2.checked
                  << " checks)\n";
        ok = ok && r2.ok();
    }
    std::cout << (ok ? "ALL CHECKS PASSED" : "VERIFICATION FAILED") << "\n";
    return ok ? kOk : kVerifyFail;
}

int cmd_export(const std::string& spec_file, bool signed_mode, std::size_t max_vertices,
               const std::string& format, const std::string& out_path) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::FlipGraph fg = sfl::build(
        spec, signed_mode ? sfl::GraphMode::signed_mode : sfl::GraphMode::undecorated,
        max_vertices);
    if (format == "dot") write_output(out_path, sfl::export_dot(fg));
    else if (format == "json") write_output(out_path, sfl::export_json(fg));
    else {
        std::cerr << "unknown format " << format << "\n";
        return kInputError;
    }
    return fg.truncated ? kTruncated : kOk;
}

int cmd_qp(const std::string& spec_file, bool signed_mode, const std::string& out_path) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::QuiverWithPotential qp =
        signed_mode ? sfl::qp_from_signed(sfl::initial_signed_triangulation(spec))
                    : sfl::qp_from_triangulation(sfl::initial_triangulation(spec));
    write_output(out_path, sfl::qp_to_json_text(qp) + "\n");
    return kOk;
}

int cmd_mutate(const std::string& spec_file, bool signed_mode, const std::string& vertex,
               const std::string& out_path) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::QuiverWithPotential qp =
        signed_mode ? sfl::qp_from_signed(sfl::initial_signed_triangulation(spec))
                    : sfl::qp_from_triangulation(sfl::initial_triangulation(spec));
    write_output(out_path, sfl::qp_to_json_text(sfl::mutate(qp, vertex)) + "\n");
    return kOk;
}

int cmd_presentation(const std::string& spec_file, const std::string& which,
                     const std::string& format, const std::string& out_path) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    sfl::PresentationWithAssignment pa;
    if (which == "sbr") {
        pa = sfl::sbr_presentation(spec);
    } else if (which == "mt") {
        pa = sfl::mt_presentation(sfl::initial_triangulation(spec));
    } else {
        std::cerr << "presentation kind must be sbr or mt\n";
        return kInputError;
    }
    if (format == "json") write_output(out_path, pa.pres.to_json_text() + "\n");
    else write_output(out_path, pa.pres.to_text() + "\n");
    auto rep = sfl::verify_presentation(pa);
    if (!rep.ok()) {
        for (const auto& f : rep.failures) std::cerr << f << "\n";
        return kVerifyFail;
    }
    return kOk;
}

int cmd_aj(const std::string& spec_file, const std::string& word_text,
           const std::string& relative_csv) {
    sfl::SurfaceSpec spec = load_spec(spec_file);
    auto pa = sfl::sbr_presentation(spec);
    sfl::Word w = sfl::word_from_string(word_text);
    std::set<std::string> rel;
    if (!relative_csv.empty()) {
        std::istringstream is(relative_csv);
        std::string item;
        while (std::getline(is, item, ',')) rel.insert(item);
    }
    sfl::HomologyVector v = sfl::aj(w, pa.assign, rel);
    std::cout << sfl::homology_to_string(v, pa.assign) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface flip graphs, quivers with potential and twist presentations"};
    app.require_subcommand(1);

    std::string spec_file, out_path, format = "dot", word_text, vertex, which = "sbr",
                relative_csv;
    bool signed_mode = false;
    std::size_t max_vertices = 1000000;

    auto add_common = [&](CLI::App* sub, bool with_graph_flags) {
        sub->add_option("spec", spec_file, "surface spec JSON file")->required();
        if (with_graph_flags) {
            sub->add_flag("--signed", signed_mode, "signed (vortex) mode");
            sub->add_option("--max-vertices", max_vertices, "BFS vertex cap")->check(CLI::PositiveNumber);
        }
    };

    auto* info = app.add_subcommand("info", "print the numerical invariants");
    add_common(info, false);
    auto* enumerate = app.add_subcommand("enumerate", "enumerate the flip graph");
    add_common(enumerate, true);
    auto* verify = app.add_subcommand("verify", "enumerate and run every verification pass");
    add_common(verify, true);
    auto* exportc = app.add_subcommand("export", "export the flip graph");
    add_common(exportc, true);
    exportc->add_option("--format", format, "dot|json");
    exportc->add_option("--out", out_path, "output path (stdout when absent)");
    auto* qp = app.add_subcommand("qp", "quiver with potential of the initial triangulation");
    add_common(qp, true);
    qp->add_option("--out", out_path, "output path");
    auto* mut = app.add_subcommand("mutate", "mutate the initial QP at a vertex");
    add_common(mut, true);
    mut->add_option("--vertex", vertex, "vertex (arc label)")->required();
    mut->add_option("--out", out_path, "output path");
    auto* pres = app.add_subcommand("presentation", "emit a presentation");
    add_common(pres, false);
    pres->add_option("--kind", which, "sbr|mt");
    pres->add_option("--format", format, "text|json");
    pres->add_option("--out", out_path, "output path");
    auto* ajc = app.add_subcommand("aj", "Abel-Jacobi image of a word");
    add_common(ajc, false);
    ajc->add_option("--word", word_text, "word, e.g. \"s1 s2^-1 d1\"")->required();
    ajc->add_option("--relative", relative_csv, "comma-separated punctures to forget");

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed()) return cmd_info(spec_file);
        if (enumerate->parsed()) return cmd_enumerate(spec_file, signed_mode, max_vertices);
        if (verify->parsed()) return cmd_verify(spec_file, signed_mode, max_vertices);
        if (exportc->parsed())
            return cmd_export(spec_file, signed_mode, max_vertices, format, out_path);
        if (qp->parsed()) return cmd_qp(spec_file, signed_mode, out_path);
        if (mut->parsed()) return cmd_mutate(spec_file, signed_mode, vertex, out_path);
        if (pres->parsed()) return cmd_presentation(spec_file, which, format, out_path);
        if (ajc->parsed()) return cmd_aj(spec_file, word_text, relative_csv);
    } catch (const sfl::Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
        case sfl::Errc::ParseError:
        case sfl::Errc::InvalidSpec:
        case sfl::Errc::NegativeRank:
        case sfl::Errc::IndexOutOfRange: return kInputError;
        default: return kVerifyFail;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFail;
    }
    return kInputError;
}
