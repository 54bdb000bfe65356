#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace sfl::oracle {

namespace {

using DiagSet = std::vector<std::pair<int, int>>;

// All triangulations of the polygon on vertices lo..hi as explicit diagonal
// sets, by choosing the apex of the triangle resting on the edge lo-hi.
std::set<DiagSet> polygon_sets(int lo, int hi) {
    std::set<DiagSet> out;
    if (hi - lo <= 2) {
        out.insert({});
        return out;
    }
    for (int apex = lo + 1; apex < hi; ++apex) {
        DiagSet base;
        if (apex - lo > 1) base.push_back({lo, apex});
        if (hi - apex > 1) base.push_back({apex, hi});
        for (const auto& L : polygon_sets(lo, apex))
            for (const auto& R : polygon_sets(apex, hi)) {
                DiagSet full = base;
                full.insert(full.end(), L.begin(), L.end());
                full.insert(full.end(), R.begin(), R.end());
                std::sort(full.begin(), full.end());
                out.insert(full);
            }
    }
    return out;
}

} // namespace

long long polygon_triangulation_count(int m) {
    if (m < 3) return m == 2 ? 1 : 0;
    return static_cast<long long>(polygon_sets(0, m - 1).size());
}

namespace {

struct Slot {
    int tri;
    int pos;
};

} // namespace

std::vector<Triangulation> all_triangulations(const SurfaceSpec& spec) {
    require_valid(spec);
    if (spec.puncture_count() > 1)
        fail(Errc::Internal, "gluing oracle supports at most one puncture");
    const int n = rank_open_arcs(spec);
    const int aleph = triangle_count(spec);
    const int m = spec.marked_points();
    const int total_slots = 3 * aleph;

    // item ids: 0..m-1 boundary segments (single dart), then for arc a
    // (0..n-1) the darts m+2a (side 0) and m+2a+1 (side 1)
    std::vector<ArcInfo> arcs;
    for (int a = 0; a < n; ++a) arcs.push_back({std::to_string(a + 1), false});
    {
        int j = 1;
        for (int mj : spec.boundaries) {
            for (int k = 1; k <= mj; ++k)
                arcs.push_back({"b" + std::to_string(j) + "." + std::to_string(k), true});
            ++j;
        }
    }
    auto dart_of_item = [&](int item) -> Dart {
        if (item < m) return {n + item, 0};
        int a = (item - m) / 2;
        return {a, (item - m) % 2};
    };

    std::vector<int> assign(static_cast<size_t>(total_slots), -1);
    std::vector<bool> used(static_cast<size_t>(m + 2 * n), false);
    std::vector<Triangulation> found;
    std::set<std::string> seen;

    std::function<void(int)> rec = [&](int slot) {
        if (slot == total_slots) {
            // build triangles, then derive corner classes from the gluing
            std::vector<Triangle> tris(static_cast<size_t>(aleph));
            for (int s = 0; s < total_slots; ++s)
                tris[static_cast<size_t>(s / 3)].side[s % 3] = dart_of_item(assign[static_cast<size_t>(s)]);

            const int corners = total_slots;
            std::vector<int> uf(static_cast<size_t>(corners));
            std::iota(uf.begin(), uf.end(), 0);
            std::function<int(int)> find = [&](int x) {
                return uf[static_cast<size_t>(x)] == x ? x
                                                       : uf[static_cast<size_t>(x)] = find(uf[static_cast<size_t>(x)]);
            };
            auto unite = [&](int a, int b) { uf[static_cast<size_t>(find(a))] = find(b); };
            auto corner_id = [&](int tri, int pos) { return 3 * tri + pos; };

            std::map<std::pair<int, int>, std::pair<int, int>> where; // dart -> (tri,pos)
            for (int s = 0; s < total_slots; ++s) {
                Dart d = dart_of_item(assign[static_cast<size_t>(s)]);
                where[{d.arc, d.side}] = {s / 3, s % 3};
            }
            for (int a = 0; a < n; ++a) {
                auto [t0, k0] = where.at({a, 0});
                auto [t1, k1] = where.at({a, 1});
                unite(corner_id(t0, k0), corner_id(t1, (k1 + 1) % 3));
                unite(corner_id(t0, (k0 + 1) % 3), corner_id(t1, k1));
            }
            // name boundary corners; reject on conflict
            std::map<int, std::string> name;
            bool ok = true;
            int j = 1;
            int arc_idx = n;
            for (int mj : spec.boundaries) {
                for (int k = 1; k <= mj && ok; ++k) {
                    auto [t, pos] = where.at({arc_idx, 0});
                    int a_cls = find(corner_id(t, pos));
                    int b_cls = find(corner_id(t, (pos + 1) % 3));
                    std::string a_nm = "M" + std::to_string(j) + "." + std::to_string(k);
                    std::string b_nm =
                        "M" + std::to_string(j) + "." + std::to_string(k == mj ? 1 : k + 1);
                    if (name.count(a_cls) && name[a_cls] != a_nm) ok = false;
                    if (name.count(b_cls) && name[b_cls] != b_nm) ok = false;
                    name[a_cls] = a_nm;
                    name[b_cls] = b_nm;
                    ++arc_idx;
                }
                ++j;
            }
            if (!ok) return;
            // interior classes get the puncture label
            auto punct = spec.all_punctures();
            std::vector<std::string> names;
            std::map<int, int> vid;
            int interior = 0;
            for (int c = 0; c < corners && ok; ++c) {
                int cls = find(c);
                if (vid.count(cls)) continue;
                std::string nm;
                if (name.count(cls)) {
                    nm = name[cls];
                } else {
                    if (interior >= static_cast<int>(punct.size())) {
                        ok = false;
                        break;
                    }
                    nm = punct[static_cast<size_t>(interior++)];
                }
                vid[cls] = static_cast<int>(names.size());
                names.push_back(nm);
            }
            if (!ok || interior != spec.puncture_count()) return;
            for (int s = 0; s < total_slots; ++s)
                tris[static_cast<size_t>(s / 3)].corner[s % 3] = vid.at(find(s));

            Triangulation cand(spec, arcs, tris, names);
            if (!cand.validate().ok()) return;
            std::string key = cand.canonical_form();
            if (seen.insert(key).second) found.push_back(cand);
            return;
        }
        // pin b1.1 into slot 0 to kill most of the symmetry
        if (slot == 0) {
            assign[0] = 0;
            used[static_cast<size_t>(0)] = true;
            rec(1);
            used[static_cast<size_t>(0)] = false;
            assign[0] = -1;
            return;
        }
        for (int item = 0; item < m + 2 * n; ++item) {
            if (used[static_cast<size_t>(item)]) continue;
            // arc side 1 only after side 0 (sides are interchangeable)
            if (item >= m && (item - m) % 2 == 1 && !used[static_cast<size_t>(item - 1)]) continue;
            assign[static_cast<size_t>(slot)] = item;
            used[static_cast<size_t>(item)] = true;
            rec(slot + 1);
            used[static_cast<size_t>(item)] = false;
            assign[static_cast<size_t>(slot)] = -1;
        }
    };
    rec(0);
    return found;
}

std::set<std::string> canonical_keys(const std::vector<Triangulation>& ts) {
    std::set<std::string> out;
    for (const auto& t : ts) out.insert(t.canonical_form());
    return out;
}

} // namespace sfl::oracle
