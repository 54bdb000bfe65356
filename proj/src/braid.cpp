#include "sfl/braid.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "sfl/quiver.hpp"

namespace sfl {

GenSym sigma(int i, int exp) { return {GenFamily::sigma, i, "", exp}; }
GenSym delta(int r, int exp) { return {GenFamily::delta, r, "", exp}; }
GenSym zeta(int s, int exp) { return {GenFamily::zeta, s, "", exp}; }
GenSym eps(int r, int exp) { return {GenFamily::epsilon, r, "", exp}; }
GenSym tau(int r, int exp) { return {GenFamily::tau, r, "", exp}; }
GenSym dual_ca(const std::string& arc, int exp) { return {GenFamily::dual_ca, 0, arc, exp}; }
GenSym dual_la(const std::string& arc, int exp) { return {GenFamily::dual_la, 0, arc, exp}; }

Word inverse(const Word& w) {
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inv());
    return out;
}

Word free_reduce(const Word& w) {
    Word out;
    for (const auto& g : w) {
        if (!out.empty() && out.back().key() == g.key() && out.back().exp == -g.exp)
            out.pop_back();
        else
            out.push_back(g);
    }
    return out;
}

Word concat(std::initializer_list<Word> parts) {
    Word out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

static std::string sym_to_string(const GenSym& g) {
    std::string s;
    switch (g.fam) {
    case GenFamily::sigma: s = "s" + std::to_string(g.index); break;
    case GenFamily::delta: s = "d" + std::to_string(g.index); break;
    case GenFamily::zeta: s = "z" + std::to_string(g.index); break;
    case GenFamily::epsilon: s = "e" + std::to_string(g.index); break;
    case GenFamily::tau: s = "t" + std::to_string(g.index); break;
    case GenFamily::dual_ca: s = "B(" + g.arc + ")"; break;
    case GenFamily::dual_la: s = "L(" + g.arc + ")"; break;
    }
    if (g.exp < 0) s += "^-1";
    return s;
}

std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += " ";
        out += sym_to_string(w[i]);
    }
    return out;
}

Word word_from_string(const std::string& text) {
    Word out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        int exp = +1;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            exp = -1;
            tok = tok.substr(0, tok.size() - 3);
        }
        if (tok.size() < 2) fail(Errc::ParseError, "bad word token \"" + tok + "\"");
        char f = tok[0];
        std::string rest = tok.substr(1);
        for (char c : rest)
            if (!isdigit(static_cast<unsigned char>(c)))
                fail(Errc::ParseError, "bad word token \"" + tok + "\"");
        int idx = std::stoi(rest);
        switch (f) {
        case 's': out.push_back(sigma(idx, exp)); break;
        case 'd': out.push_back(delta(idx, exp)); break;
        case 'z': out.push_back(zeta(idx, exp)); break;
        default: fail(Errc::ParseError, "unknown generator family in \"" + tok + "\"");
        }
    }
    return out;
}

std::string Presentation::to_text() const {
    std::ostringstream os;
    os << "< ";
    for (size_t i = 0; i < generators.size(); ++i) {
        if (i) os << ", ";
        os << sym_to_string(generators[i]);
    }
    os << " | ";
    for (size_t i = 0; i < relations.size(); ++i) {
        if (i) os << ", ";
        os << word_to_string(relations[i].lhs) << " = " << word_to_string(relations[i].rhs);
    }
    os << " >";
    return os.str();
}

std::string Presentation::to_json_text() const {
    nlohmann::json j;
    j["generators"] = nlohmann::json::array();
    for (const auto& g : generators) j["generators"].push_back(sym_to_string(g));
    j["relations"] = nlohmann::json::array();
    for (const auto& r : relations)
        j["relations"].push_back({{"lhs", word_to_string(r.lhs)},
                                  {"rhs", word_to_string(r.rhs)},
                                  {"provenance", r.provenance}});
    j["notes"] = notes;
    return j.dump(2);
}

bool HomologyVector::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](long long c) { return c == 0; });
}

bool Perm::is_identity() const {
    for (size_t i = 0; i < img.size(); ++i)
        if (img[i] != static_cast<int>(i)) return false;
    return true;
}

Perm perm_identity(int n) {
    Perm p;
    p.img.resize(static_cast<size_t>(n));
    std::iota(p.img.begin(), p.img.end(), 0);
    return p;
}

Perm perm_transposition(int n, int a, int b) {
    Perm p = perm_identity(n);
    std::swap(p.img[static_cast<size_t>(a)], p.img[static_cast<size_t>(b)]);
    return p;
}

Perm perm_compose(const Perm& p, const Perm& q) {
    Perm out;
    out.img.resize(q.img.size());
    for (size_t x = 0; x < q.img.size(); ++x)
        out.img[x] = p.img[static_cast<size_t>(q.img[x])];
    return out;
}

Perm perm_inverse(const Perm& p) {
    Perm out;
    out.img.resize(p.img.size());
    for (size_t x = 0; x < p.img.size(); ++x) out.img[static_cast<size_t>(p.img[x])] = static_cast<int>(x);
    return out;
}

int Assignment::puncture_coord(const std::string& label) const {
    auto all = spec.all_punctures();
    for (size_t s = 0; s < all.size(); ++s)
        if (all[s] == label)
            return 2 * spec.genus + spec.boundary_count() - 1 + static_cast<int>(s);
    fail(Errc::IndexOutOfRange, "unknown puncture " + label);
}

HomologyVector aj(const Word& w, const Assignment& assign, const std::set<std::string>& relative) {
    HomologyVector acc;
    acc.coords.assign(static_cast<size_t>(assign.rk), 0);
    for (const auto& g : w) {
        auto it = assign.aj_images.find(g.key());
        if (it == assign.aj_images.end())
            fail(Errc::UnassignedGenerator, "no AJ value for " + sym_to_string(g.base()));
        for (size_t i = 0; i < acc.coords.size(); ++i)
            acc.coords[i] += g.exp * it->second.coords[i];
    }
    for (const auto& p : relative) {
        int c = assign.puncture_coord(p);
        acc.coords[static_cast<size_t>(c)] = 0;
    }
    return acc;
}

Perm decoration_permutation(const Word& w, const Assignment& assign) {
    Perm p = perm_identity(assign.aleph);
    for (const auto& g : w) {
        auto it = assign.perm_images.find(g.key());
        if (it == assign.perm_images.end())
            fail(Errc::UnassignedGenerator, "no permutation for " + sym_to_string(g.base()));
        Perm factor = g.exp > 0 ? it->second : perm_inverse(it->second);
        p = perm_compose(p, factor);
    }
    return p;
}

Relation br_relation(const GenSym& a, const GenSym& b, int m) {
    if (m < 2) fail(Errc::IndexOutOfRange, "Br^m needs m >= 2");
    Relation rel;
    for (int i = 0; i < m; ++i) {
        rel.lhs.push_back(i % 2 == 0 ? a : b);
        rel.rhs.push_back(i % 2 == 0 ? b : a);
    }
    rel.provenance = "Br^" + std::to_string(m);
    return rel;
}

static Relation co_words(const Word& a, const Word& b, const std::string& prov) {
    Relation rel;
    rel.lhs = concat({a, b});
    rel.rhs = concat({b, a});
    rel.provenance = prov;
    return rel;
}

static bool in_even_upto_2g(int x, int g) { return x >= 2 && x % 2 == 0 && x <= 2 * g; }

PresentationWithAssignment sbr_presentation(const SurfaceSpec& spec) {
    require_valid(spec);
    const int aleph = decoration_count(spec);
    if (aleph < 2) fail(Errc::TooFewDecorations, "need aleph >= 2 for sigma generators");
    const int rk = sbr_rank(spec);
    const int g = spec.genus;

    PresentationWithAssignment out;
    Presentation& P = out.pres;
    Assignment& A = out.assign;
    A.spec = spec;
    A.aleph = aleph;
    A.rk = rk;

    for (int i = 1; i <= aleph - 1; ++i) {
        P.generators.push_back(sigma(i));
        A.aj_images[sigma(i).key()] = HomologyVector{std::vector<long long>(static_cast<size_t>(rk), 0)};
        A.perm_images[sigma(i).key()] = perm_transposition(aleph, i - 1, i);
    }
    for (int r = 1; r <= rk; ++r) {
        P.generators.push_back(delta(r));
        HomologyVector v{std::vector<long long>(static_cast<size_t>(rk), 0)};
        v.coords[static_cast<size_t>(r - 1)] = 1;
        A.aj_images[delta(r).key()] = v;
        A.perm_images[delta(r).key()] = perm_identity(aleph);
    }
    // zeta_s is an alias for delta_{2g+b-1+s}
    const int base = 2 * g + spec.boundary_count() - 1;
    for (int s = 1; s <= spec.puncture_count(); ++s) {
        A.aj_images[zeta(s).key()] = A.aj_images[delta(base + s).key()];
        A.perm_images[zeta(s).key()] = perm_identity(aleph);
    }

    for (int i = 1; i <= aleph - 1; ++i)
        for (int j = i + 1; j <= aleph - 1; ++j) {
            Relation rel = br_relation(sigma(i), sigma(j), j - i == 1 ? 3 : 2);
            rel.provenance = (j - i == 1 ? "Br(s" : "Co(s") + std::to_string(i) + ",s" +
                             std::to_string(j) + ")";
            P.relations.push_back(rel);
        }
    for (int r = 1; r <= rk; ++r) {
        Word dr = {delta(r)};
        Word s1dr_s1 = {sigma(1), delta(r), sigma(1)};
        P.relations.push_back(co_words(dr, s1dr_s1, "Co(d" + std::to_string(r) + ", s1 d" +
                                                        std::to_string(r) + " s1)"));
        for (int i = 2; i <= aleph - 1; ++i)
            P.relations.push_back(co_words({sigma(i)}, dr,
                                           "Co(s" + std::to_string(i) + ", d" + std::to_string(r) + ")"));
    }
    for (int s = 1; s <= rk; ++s) {
        for (int r = s + 1; r <= rk; ++r) {
            if (r == s + 1 && in_even_upto_2g(s + 1, g)) {
                // handle pair: s1 dr s1 ds s1 = ds s1 dr
                Relation rel;
                rel.lhs = {sigma(1), delta(r), sigma(1), delta(s), sigma(1)};
                rel.rhs = {delta(s), sigma(1), delta(r)};
                rel.provenance = "handle(d" + std::to_string(s) + ",d" + std::to_string(r) + ")";
                P.relations.push_back(rel);
            } else {
                Word conj = {sigma(1, -1), delta(s), sigma(1)};
                P.relations.push_back(co_words(conj, {delta(r)},
                                               "Co(d" + std::to_string(s) + "^s1, d" +
                                                   std::to_string(r) + ")"));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mixed twist presentation from an admissible triangulation.

PresentationWithAssignment mt_presentation(const Triangulation& t) {
    t.require_valid();
    if (!t.is_admissible())
        fail(Errc::NotAdmissible, "mt_presentation needs an admissible triangulation");
    const SurfaceSpec& spec = t.spec();
    QuiverWithPotential qp = qp_from_triangulation(t);

    PresentationWithAssignment out;
    Presentation& P = out.pres;
    Assignment& A = out.assign;
    A.spec = spec;
    A.aleph = static_cast<int>(t.triangles().size());
    A.rk = sbr_rank(spec);

    // classify arcs; the folded arc of each self-folded triangle is an L-arc dual
    std::map<std::string, bool> is_la;
    std::map<std::string, std::string> la_puncture;
    for (const auto& lbl : t.internal_arc_labels()) is_la[lbl] = false;
    for (const auto& sf : t.self_folded_triangles()) {
        is_la[t.arc_label(sf.folded_arc)] = true;
        la_puncture[t.arc_label(sf.folded_arc)] = t.vertex_names()[sf.puncture_vertex];
    }

    auto gen_of = [&](const std::string& arc) {
        return is_la.at(arc) ? dual_la(arc) : dual_ca(arc);
    };

    // decoration of a triangle = its index; CA dual swaps the two flanking ones
    auto flanks = [&](const std::string& arc) {
        int a = t.arc_index(arc);
        auto [t0, k0] = t.locate({a, 0});
        auto [t1, k1] = t.locate({a, 1});
        (void)k0;
        (void)k1;
        return std::make_pair(t0, t1);
    };

    std::vector<std::string> arcs = t.internal_arc_labels();
    std::sort(arcs.begin(), arcs.end());
    for (const auto& arc : arcs) {
        GenSym g = gen_of(arc);
        P.generators.push_back(g);
        HomologyVector v{std::vector<long long>(static_cast<size_t>(A.rk), 0)};
        if (is_la.at(arc)) {
            v.coords[static_cast<size_t>(A.puncture_coord(la_puncture.at(arc)))] = 1;
            A.aj_images[g.key()] = v;
            A.perm_images[g.key()] = perm_identity(A.aleph);
        } else {
            A.aj_images[g.key()] = v;
            auto [t0, t1] = flanks(arc);
            A.perm_images[g.key()] = perm_transposition(A.aleph, t0, t1);
        }
    }

    // double-arrow check and pair classification off the quiver
    for (size_t v = 0; v < qp.vertices.size(); ++v)
        for (size_t w = 0; w < qp.vertices.size(); ++w) {
            if (v == w) continue;
            if (qp.arrow_count(static_cast<int>(v), static_cast<int>(w)) >= 2)
                fail(Errc::DoubleArrow, "double arrow " + qp.vertices[v] + " -> " + qp.vertices[w] +
                                            "; only the no-double-arrow presentation is implemented");
        }
    for (size_t vi = 0; vi < arcs.size(); ++vi) {
        for (size_t wi = vi + 1; wi < arcs.size(); ++wi) {
            const std::string &a = arcs[vi], &b = arcs[wi];
            int av = qp.vertex_index(a), bv = qp.vertex_index(b);
            int ab = qp.arrow_count(av, bv), ba = qp.arrow_count(bv, av);
            GenSym ga = gen_of(a), gb = gen_of(b);
            std::string pair_name = sym_to_string(ga) + "," + sym_to_string(gb);
            if (ab == 0 && ba == 0) {
                Relation rel = br_relation(ga, gb, 2);
                rel.provenance = "Co(" + pair_name + ")";
                P.relations.push_back(rel);
            } else if (ab + ba == 1) {
                if (is_la.at(a) || is_la.at(b)) {
                    P.notes.push_back("single arrow between " + pair_name +
                                      " touching an L-arc; outside the classified cases");
                    continue;
                }
                Relation rel = br_relation(ga, gb, 3);
                rel.provenance = "Br(" + pair_name + ")";
                P.relations.push_back(rel);
            } else if (ab == 1 && ba == 1) {
                if (is_la.at(a) != is_la.at(b)) {
                    Relation rel = br_relation(ga, gb, 4);
                    rel.provenance = "Sb(" + pair_name + ")";
                    P.relations.push_back(rel);
                } else if (!is_la.at(a) && !is_la.at(b)) {
                    Relation rel = br_relation(ga, gb, 4);
                    rel.provenance = "Sb(" + pair_name + ") [ca-ca 2-cycle, Int=1 from quiver]";
                    P.relations.push_back(rel);
                    P.notes.push_back("ca-ca 2-cycle between " + pair_name);
                } else {
                    Relation rel = br_relation(ga, gb, 3);
                    rel.provenance = "Br(" + pair_name + ") [la-la adjacency, Int=1/2]";
                    P.relations.push_back(rel);
                    P.notes.push_back("la-la adjacency between " + pair_name + "; review manually");
                }
            }
        }
    }

    // triangle relations: all-internal triangles with three distinct
    // non-self-folded edges, duals taken in clockwise order
    for (const auto& tri : t.triangles()) {
        bool all_internal = true;
        for (const auto& s : tri.side)
            if (t.arcs()[s.arc].boundary) all_internal = false;
        if (!all_internal) continue;
        std::set<int> distinct = {tri.side[0].arc, tri.side[1].arc, tri.side[2].arc};
        if (distinct.size() != 3) continue;
        bool folded = false;
        for (const auto& s : tri.side)
            if (is_la.at(t.arc_label(s.arc))) folded = true;
        if (folded) continue;
        GenSym a = gen_of(t.arc_label(tri.side[0].arc));
        GenSym b = gen_of(t.arc_label(tri.side[2].arc));
        GenSym c = gen_of(t.arc_label(tri.side[1].arc));
        Word abca = {a, b, c, a}, bcab = {b, c, a, b}, cabc = {c, a, b, c};
        P.relations.push_back({abca, bcab, "triangle(" + sym_to_string(a) + sym_to_string(b) +
                                               sym_to_string(c) + ") abca=bcab"});
        P.relations.push_back({bcab, cabc, "triangle(" + sym_to_string(a) + sym_to_string(b) +
                                               sym_to_string(c) + ") bcab=cabc"});
    }
    return out;
}

VerifyReport verify_presentation(const PresentationWithAssignment& pa) {
    VerifyReport rep;
    auto all = pa.assign.spec.all_punctures();
    std::vector<std::set<std::string>> modes;
    for (size_t mask = 0; mask < (1u << all.size()); ++mask) {
        std::set<std::string> s;
        for (size_t i = 0; i < all.size(); ++i)
            if (mask & (1u << i)) s.insert(all[i]);
        modes.push_back(std::move(s));
    }
    for (const auto& rel : pa.pres.relations) {
        for (const auto& mode : modes) {
            rep.checked++;
            if (!(aj(rel.lhs, pa.assign, mode) == aj(rel.rhs, pa.assign, mode)))
                rep.failures.push_back("AJ mismatch for " + rel.provenance + " (relative mode with " +
                                       std::to_string(mode.size()) + " punctures)");
        }
        rep.checked++;
        if (!(decoration_permutation(rel.lhs, pa.assign) ==
              decoration_permutation(rel.rhs, pa.assign)))
            rep.failures.push_back("permutation mismatch for " + rel.provenance);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Generator rewriting.

static Word expand_eps(int r, const SurfaceSpec& spec) {
    const int g = spec.genus;
    if (r == 0) return {};
    Word out = {delta(r)};
    Word rest = expand_eps(in_even_upto_2g(r, g) ? r - 2 : r - 1, spec);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

Word epsilon_tau_rewrite(const Word& w, RewriteDirection dir, const SurfaceSpec& spec) {
    require_valid(spec);
    const int rk = sbr_rank(spec);
    const int g = spec.genus;
    const int base = 2 * g + spec.boundary_count() - 1;
    auto check_index = [&](int r, int lo) {
        if (r < lo || r > rk) fail(Errc::IndexOutOfRange, "generator index out of range");
    };
    Word out;
    for (const auto& gsym : w) {
        Word image;
        int idx = gsym.index;
        switch (gsym.fam) {
        case GenFamily::sigma:
            image = {gsym.base()};
            break;
        case GenFamily::zeta:
            check_index(base + idx, 1);
            idx = base + idx;
            [[fallthrough]];
        case GenFamily::delta:
            check_index(idx, 1);
            if (dir == RewriteDirection::to_epsilon_tau) {
                const int prev = in_even_upto_2g(idx, g) ? idx - 2 : idx - 1;
                image = {eps(idx)};
                if (prev > 0) image.push_back(eps(prev, -1));
            } else {
                image = {delta(idx)};
            }
            break;
        case GenFamily::epsilon:
            check_index(idx, 0);
            if (dir == RewriteDirection::to_delta) image = expand_eps(idx, spec);
            else fail(Errc::UnassignedGenerator, "epsilon in a word to rewrite to epsilon/tau");
            break;
        case GenFamily::tau:
            check_index(idx, 1);
            if (dir == RewriteDirection::to_delta) {
                Word e = expand_eps(idx, spec);
                image = concat({e, {sigma(1)}, inverse(e)});
            } else {
                fail(Errc::UnassignedGenerator, "tau in a word to rewrite to epsilon/tau");
            }
            break;
        default:
            fail(Errc::UnassignedGenerator, "dual-arc generator outside this rewriting");
        }
        if (gsym.exp < 0) image = inverse(image);
        out.insert(out.end(), image.begin(), image.end());
    }
    return free_reduce(out);
}

std::pair<Word, Word> commutator_word(int s, int r, const SurfaceSpec& spec) {
    require_valid(spec);
    const int rk = sbr_rank(spec);
    if (!(1 <= s && s < r && r <= rk)) fail(Errc::IndexOutOfRange, "need 1 <= s < r <= rk");
    if (decoration_count(spec) < 3)
        fail(Errc::TooFewDecorations, "the closed-form word needs a third decoration");
    const int g = spec.genus;

    Word es = expand_eps(s, spec), er = expand_eps(r, spec);
    Word lhs = free_reduce(concat({inverse(es), inverse(er), es, er}));

    // a = s2 s1 s2^-1, b = s2, tau_i = eps_i s1 eps_i^-1
    Word A = {sigma(2), sigma(1), sigma(2, -1)};
    Word B = {sigma(2)};
    Word Ts = concat({es, {sigma(1)}, inverse(es)});
    Word Tr = concat({er, {sigma(1)}, inverse(er)});
    Word rhs;
    if (!in_even_upto_2g(s + 1, g)) {
        rhs = concat({inverse(Ts), inverse(B), A, inverse(Tr), inverse(A), inverse(Ts), A, B, Tr, B});
    } else {
        rhs = concat({inverse(B), inverse(B), inverse(Ts), inverse(B), A, Tr, inverse(A), Ts, A, B,
                      Tr, B});
    }
    return {lhs, free_reduce(rhs)};
}

Word flip_twist_image(const Triangulation& t, const std::string& arc, TwistKind kind) {
    int a = t.arc_index(arc);
    if (a < 0) fail(Errc::IndexOutOfRange, "unknown arc " + arc);
    if (!t.is_internal(a)) fail(Errc::KindMismatch, arc + " is a boundary segment");
    const bool folded = t.is_self_folded_edge(a);
    if (kind == TwistKind::two_cycle) {
        if (folded) fail(Errc::KindMismatch, "2-cycle twist requested at self-folded edge " + arc);
        return {dual_ca(arc)};
    }
    if (!folded) fail(Errc::KindMismatch, "loop twist requested at non-self-folded arc " + arc);
    return {dual_la(arc)};
}

// ---------------------------------------------------------------------------
// Conjugation along flip edges.

namespace {

struct ArrowCounts {
    std::map<std::pair<std::string, std::string>, int> c;
    int operator()(const std::string& a, const std::string& b) const {
        auto it = c.find({a, b});
        return it == c.end() ? 0 : it->second;
    }
};

ArrowCounts counts_of(const Triangulation& t) {
    QuiverWithPotential qp = qp_from_triangulation(t);
    ArrowCounts out;
    for (const auto& ar : qp.arrows)
        out.c[{qp.vertices[static_cast<size_t>(ar.src)],
               qp.vertices[static_cast<size_t>(ar.dst)]}]++;
    return out;
}

Word apply_table(const Word& w, const std::map<std::tuple<GenFamily, int, std::string>, Word>& table) {
    Word out;
    for (const auto& g : w) {
        auto it = table.find(g.key());
        if (it == table.end())
            fail(Errc::UnsupportedEdgeCase,
                 "generator " + word_to_string({g.base()}) + " is not in the source alphabet");
        Word image = g.exp > 0 ? it->second : inverse(it->second);
        out.insert(out.end(), image.begin(), image.end());
    }
    return free_reduce(out);
}

} // namespace

Word conj_flip(const Word& w, const FlipEdgeRef& edge) {
    const Triangulation& src = edge.source;
    src.require_valid();
    int arc = src.arc_index(edge.arc);
    if (arc < 0 || !src.is_internal(arc))
        fail(Errc::UnsupportedEdgeCase, "edge arc must be an internal arc");

    std::map<std::string, bool> la;
    for (const auto& lbl : src.internal_arc_labels()) la[lbl] = src.is_self_folded_edge(lbl);
    auto gen_src = [&](const std::string& a) { return la.at(a) ? dual_la(a) : dual_ca(a); };

    std::map<std::tuple<GenFamily, int, std::string>, Word> table;

    if (edge.kind == FlipEdgeRef::Kind::loop) {
        if (!la.at(edge.arc))
            fail(Errc::UnsupportedEdgeCase, "loop edge requires a self-folded arc");
        GenSym s = dual_la(edge.arc);
        for (const auto& [a, isla] : la) {
            GenSym g = gen_src(a);
            table[g.key()] = {s.inv(), g, s};
        }
        return apply_table(w, table);
    }

    if (edge.kind == FlipEdgeRef::Kind::flip) {
        if (la.at(edge.arc))
            fail(Errc::UnsupportedEdgeCase, "flip edge at a self-folded arc is a loop");
        Triangulation tgt = src.flip(edge.arc);
        auto before = src.isolated_punctures();
        auto after = tgt.isolated_punctures();
        ArrowCounts counts = counts_of(src);
        if (after == before) {
            for (const auto& [a, isla] : la) {
                GenSym g = gen_src(a);
                if (isla || a == edge.arc) {
                    table[g.key()] = {g};
                } else if (counts(a, edge.arc) > 0) {
                    GenSym ti = dual_ca(edge.arc);
                    table[g.key()] = {ti.inv(), g, ti};
                } else {
                    table[g.key()] = {g};
                }
            }
            return apply_table(w, table);
        }
        // isolating flip: exactly one puncture becomes enclosed at the target
        std::vector<std::string> gained;
        for (const auto& p : after)
            if (!before.count(p)) gained.push_back(p);
        if (gained.size() != 1 || !std::includes(after.begin(), after.end(), before.begin(),
                                                 before.end()))
            fail(Errc::UnsupportedEdgeCase, "flip does not match any conjugation case table");
        std::string folded_slot;
        for (const auto& sf : tgt.self_folded_triangles())
            if (tgt.vertex_names()[sf.puncture_vertex] == gained[0])
                folded_slot = tgt.arc_label(sf.folded_arc);
        if (folded_slot.empty()) fail(Errc::Internal, "missing new self-folded slot");
        for (const auto& [a, isla] : la) {
            GenSym g = gen_src(a);
            if (isla) {
                table[g.key()] = {g};
            } else if (a == edge.arc) {
                table[g.key()] = {g};
            } else if (a == folded_slot) {
                GenSym lj = dual_la(folded_slot);
                GenSym ti = dual_ca(edge.arc);
                table[g.key()] = {lj, ti, lj.inv()};
            } else if (counts(a, edge.arc) > 0) {
                GenSym ti = dual_ca(edge.arc);
                table[g.key()] = {ti.inv(), g, ti};
            } else {
                table[g.key()] = {g};
            }
        }
        return apply_table(w, table);
    }

    // diamond flip at the enclosing edge
    auto sf = src.self_folded_with_enclosing(arc);
    if (!sf) fail(Errc::UnsupportedEdgeCase, "diamond edge requires an enclosing edge");
    const std::string slot_j = edge.arc;                       // enclosing at source
    const std::string slot_i = src.arc_label(sf->folded_arc);  // self-folded at source
    Triangulation mid = src.flip(slot_j);
    ArrowCounts cm = counts_of(mid);
    GenSym lj = dual_la(slot_j);  // loop at the target
    GenSym ti = dual_ca(slot_i);  // 2-cycle at the target's enclosing slot
    for (const auto& [a, isla] : la) {
        GenSym g = gen_src(a);
        if (a == slot_j) {
            table[g.key()] = {lj, ti, lj.inv()};
        } else if (a == slot_i) {
            table[g.key()] = {lj};
        } else if (cm(a, slot_j) > 0) {
            fail(Errc::UnsupportedEdgeCase,
                 "slot " + a + " interacts with the enclosing slot; outside the case table");
        } else if (cm(a, slot_i) > 0) {
            Word cw = {ti, lj, ti, lj.inv()};
            table[g.key()] = free_reduce(concat({inverse(cw), {g}, cw}));
        } else {
            table[g.key()] = {g};
        }
    }
    return apply_table(w, table);
}

// ---------------------------------------------------------------------------
// Word equality modulo relations (bounded).

namespace {

std::string word_key(const Word& w) { return word_to_string(w); }

std::vector<Word> rotations_and_inverses(const Word& w) {
    std::vector<Word> out;
    Word cur = w;
    for (size_t r = 0; r < w.size(); ++r) {
        out.push_back(cur);
        out.push_back(inverse(cur));
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    }
    return out;
}

} // namespace

bool words_equal_mod(const Word& a, const Word& b, const std::vector<Relation>& relations,
                     int depth) {
    Word diff = free_reduce(concat({inverse(a), b}));
    if (diff.empty()) return true;

    // conjugation stripping + single-relator orbit test
    {
        Word core = diff;
        while (core.size() >= 2 && core.front().key() == core.back().key() &&
               core.front().exp == -core.back().exp) {
            core.erase(core.begin());
            core.pop_back();
            core = free_reduce(core);
        }
        for (const auto& rel : relations) {
            Word relator = free_reduce(concat({rel.lhs, inverse(rel.rhs)}));
            if (relator.empty()) continue;
            for (const auto& v : rotations_and_inverses(relator))
                if (core == v) return true;
        }
    }

    // bounded BFS with relation replacements in both directions
    std::set<std::string> visited;
    std::queue<std::pair<Word, int>> q;
    Word start = free_reduce(a);
    Word goal = free_reduce(b);
    q.push({start, 0});
    visited.insert(word_key(start));
    const size_t max_len = std::max(start.size(), goal.size()) + 8;
    while (!q.empty()) {
        auto [w, d] = q.front();
        q.pop();
        if (w == goal) return true;
        if (d >= depth) continue;
        for (const auto& rel : relations) {
            for (int dir = 0; dir < 2; ++dir) {
                const Word& from = dir == 0 ? rel.lhs : rel.rhs;
                const Word& to = dir == 0 ? rel.rhs : rel.lhs;
                if (from.empty() || w.size() < from.size()) continue;
                for (size_t pos = 0; pos + from.size() <= w.size(); ++pos) {
                    bool match = true;
                    for (size_t k = 0; k < from.size() && match; ++k)
                        if (!(w[pos + k] == from[k])) match = false;
                    if (!match) continue;
                    Word nw(w.begin(), w.begin() + static_cast<long>(pos));
                    nw.insert(nw.end(), to.begin(), to.end());
                    nw.insert(nw.end(), w.begin() + static_cast<long>(pos + from.size()), w.end());
                    nw = free_reduce(nw);
                    if (nw.size() > max_len) continue;
                    auto key = word_key(nw);
                    if (visited.insert(key).second) q.push({nw, d + 1});
                }
            }
        }
    }
    return false;
}

std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> m) {
    const size_t rows = m.size();
    const size_t cols = rows ? m[0].size() : 0;
    std::vector<long long> diag;
    size_t r = 0, c = 0;
    while (r < rows && c < cols) {
        // find a nonzero pivot in the submatrix
        size_t pr = rows, pc = cols;
        for (size_t i = r; i < rows && pr == rows; ++i)
            for (size_t j = c; j < cols; ++j)
                if (m[i][j] != 0) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr == rows) break;
        std::swap(m[r], m[pr]);
        for (auto& row : m) std::swap(row[c], row[pc]);
        bool again = true;
        while (again) {
            again = false;
            for (size_t i = r + 1; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                long long qt = m[i][c] / m[r][c];
                for (size_t j = c; j < cols; ++j) m[i][j] -= qt * m[r][j];
                if (m[i][c] != 0) {
                    std::swap(m[r], m[i]);
                    again = true;
                }
            }
            for (size_t j = c + 1; j < cols; ++j) {
                if (m[r][j] == 0) continue;
                long long qt = m[r][j] / m[r][c];
                for (size_t i = r; i < rows; ++i) m[i][j] -= qt * m[i][c];
                if (m[r][j] != 0) {
                    for (size_t i = 0; i < rows; ++i) std::swap(m[i][c], m[i][j]);
                    again = true;
                }
            }
        }
        diag.push_back(std::abs(m[r][c]));
        ++r;
        ++c;
    }
    return diag;
}

std::string homology_to_string(const HomologyVector& v, const Assignment& assign) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.coords.size(); ++i) {
        if (i) os << ",";
        os << v.coords[i];
    }
    os << ")";
    const int g = assign.spec.genus, b = assign.spec.boundary_count();
    auto punct = assign.spec.all_punctures();
    std::string sum;
    for (size_t i = 0; i < v.coords.size(); ++i) {
        if (v.coords[i] == 0) continue;
        std::string name;
        if (static_cast<int>(i) < 2 * g + b - 1) name = "e" + std::to_string(i + 1);
        else name = "[" + punct[i - static_cast<size_t>(2 * g + b - 1)] + "]";
        if (!sum.empty()) sum += v.coords[i] > 0 ? "+" : "";
        else if (v.coords[i] > 0) sum += "";
        if (v.coords[i] == 1) sum += name;
        else if (v.coords[i] == -1) sum += "-" + name;
        else sum += std::to_string(v.coords[i]) + "*" + name;
    }
    if (sum.empty()) sum = "0";
    os << " = " << sum;
    return os.str();
}

} // namespace sfl
