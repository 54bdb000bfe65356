#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sfl/triangulation.hpp"

namespace sfl {

enum class GenFamily { sigma, delta, zeta, epsilon, tau, dual_ca, dual_la };

struct GenSym {
    GenFamily fam = GenFamily::sigma;
    int index = 0;       // sigma/delta/zeta/epsilon/tau
    std::string arc;     // dual_ca / dual_la
    int exp = +1;

    GenSym base() const {
        GenSym g = *this;
        g.exp = +1;
        return g;
    }
    GenSym inv() const {
        GenSym g = *this;
        g.exp = -g.exp;
        return g;
    }
    auto key() const { return std::make_tuple(fam, index, arc); }
    bool operator==(const GenSym&) const = default;
};

GenSym sigma(int i, int exp = +1);
GenSym delta(int r, int exp = +1);
GenSym zeta(int s, int exp = +1);
GenSym eps(int r, int exp = +1);
GenSym tau(int r, int exp = +1);
GenSym dual_ca(const std::string& arc, int exp = +1);
GenSym dual_la(const std::string& arc, int exp = +1);

using Word = std::vector<GenSym>;

Word inverse(const Word& w);              // reversed, exponents flipped
Word free_reduce(const Word& w);          // removes adjacent inverse pairs
Word concat(std::initializer_list<Word> parts);
std::string word_to_string(const Word& w);
Word word_from_string(const std::string& text); // "s1 d2^-1 z1" tokens

struct Relation {
    Word lhs, rhs;
    std::string provenance;
};

struct Presentation {
    std::vector<GenSym> generators;        // positive representatives
    std::vector<Relation> relations;
    std::vector<std::string> notes;        // review flags
    std::string to_text() const;           // <gens | rels> listing
    std::string to_json_text() const;
};

// Integer homology coordinates: e_1..e_{2g} handle classes, then
// e_{2g+1}..e_{2g+b-1} boundary classes, then one class per puncture in
// all_punctures() order.
struct HomologyVector {
    std::vector<long long> coords;
    bool is_zero() const;
    bool operator==(const HomologyVector&) const = default;
};

struct Perm {
    std::vector<int> img;  // images of 0..aleph-1
    bool is_identity() const;
    bool operator==(const Perm&) const = default;
};
Perm perm_identity(int n);
Perm perm_transposition(int n, int a, int b);
// Applies rightmost factor first: (p.q)(x) = p(q(x)).
Perm perm_compose(const Perm& p, const Perm& q);
Perm perm_inverse(const Perm& p);

// Homomorphism data for a generator alphabet.
struct Assignment {
    SurfaceSpec spec;
    int aleph = 0;
    int rk = 0;
    std::map<std::tuple<GenFamily, int, std::string>, HomologyVector> aj_images;
    std::map<std::tuple<GenFamily, int, std::string>, Perm> perm_images;

    int puncture_coord(const std::string& label) const; // index into coords
};

// Relative Abel-Jacobi image of a word: sum of signed generator images with
// the coordinates of forget punctures zeroed.
HomologyVector aj(const Word& w, const Assignment& assign,
                  const std::set<std::string>& relative = {});

// Composite decoration permutation, rightmost factor applied first.
Perm decoration_permutation(const Word& w, const Assignment& assign);

// Higher braid relation Br^m(a,b): alternating words of length m.
Relation br_relation(const GenSym& a, const GenSym& b, int m);

struct PresentationWithAssignment {
    Presentation pres;
    Assignment assign;
};

// Finite presentation of the surface braid group on sigma/delta generators.
PresentationWithAssignment sbr_presentation(const SurfaceSpec& spec);

// Presentation of the mixed twist group from an admissible triangulation
// whose quiver has no double arrows: dual-arc generators, quiver-classified
// braid relations, and clockwise triangle relations.
PresentationWithAssignment mt_presentation(const Triangulation& t);

struct VerifyReport {
    long long checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Necessary-condition check: both homomorphisms agree on every relation, in
// the full and every relative AJ mode.
VerifyReport verify_presentation(const PresentationWithAssignment& pa);

enum class RewriteDirection { to_epsilon_tau, to_delta };

// Change of generators: delta words to epsilon/tau words and back.
Word epsilon_tau_rewrite(const Word& w, RewriteDirection dir, const SurfaceSpec& spec);

// The commutator [eps_s, eps_r] and the closed-form word it equals, both
// expanded over the sigma/delta alphabet.
std::pair<Word, Word> commutator_word(int s, int r, const SurfaceSpec& spec);

enum class TwistKind { two_cycle, loop };

// Dual-arc generator for a flip twist at the arc.
Word flip_twist_image(const Triangulation& t, const std::string& arc, TwistKind kind);

struct FlipEdgeRef {
    enum class Kind { loop, flip, diamond } kind = Kind::flip;
    Triangulation source;
    std::string arc;  // loop: self-folded edge; flip: flipped slot; diamond: enclosing edge
};

// Generator-wise substitution along a flip-graph edge, extended
// multiplicatively and freely reduced.
Word conj_flip(const Word& w, const FlipEdgeRef& edge);

// Bounded search for equality of two words modulo free reduction and the
// given relations (each usable in both directions).
bool words_equal_mod(const Word& a, const Word& b, const std::vector<Relation>& relations,
                     int depth = 4);

// Smith normal form diagonal of an integer matrix (rows of generators).
std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> mat);

std::string homology_to_string(const HomologyVector& v, const Assignment& assign);

} // namespace sfl
