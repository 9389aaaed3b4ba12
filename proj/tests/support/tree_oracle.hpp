#pragma once

// Brute-force references for tree automorphism counting: subtree enumeration
// and orbit counting by distance-preserving placements.

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "tdlc/tree_aut.hpp"

namespace oracle {

using tdlc::Vertex;

inline bool connected(unsigned d, const std::set<Vertex>& s) {
    if (s.empty()) return false;
    std::set<Vertex> seen{*s.begin()};
    std::vector<Vertex> stack{*s.begin()};
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (const Vertex& n : tdlc::neighbours(d, v))
            if (s.count(n) && seen.insert(n).second) stack.push_back(n);
    }
    return seen.size() == s.size();
}

// Every nonempty connected subset of `verts` (at most ~20 vertices).
inline std::vector<std::vector<Vertex>> subtrees_of(unsigned d, const std::vector<Vertex>& verts) {
    std::vector<std::vector<Vertex>> out;
    for (std::uint32_t mask = 1; mask < (1u << verts.size()); ++mask) {
        std::set<Vertex> s;
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (mask >> i & 1) s.insert(verts[i]);
        if (connected(d, s)) out.emplace_back(s.begin(), s.end());
    }
    return out;
}

// Orbit size of B under the stabilizer of B', counted as distance-preserving
// placements of B that fix B'; partial isometries of the tree extend.
inline std::uint64_t placements(unsigned d, const std::vector<Vertex>& bp, const std::vector<Vertex>& b) {
    std::set<Vertex> fixed(bp.begin(), bp.end());
    std::vector<Vertex> todo;
    for (const Vertex& v : b)
        if (!fixed.count(v)) todo.push_back(v);
    const Vertex& anchor = bp.front();
    std::vector<std::pair<Vertex, Vertex>> placed;
    for (const Vertex& v : bp) placed.push_back({v, v});
    std::uint64_t count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == todo.size()) {
            ++count;
            return;
        }
        unsigned r = static_cast<unsigned>(tdlc::tree_distance(anchor, todo[i]));
        for (const Vertex& y : tdlc::ball(d, anchor, r)) {
            if (tdlc::tree_distance(anchor, y) != r) continue;
            placed.push_back({todo[i], y});
            if (tdlc::injection_extends(placed)) rec(i + 1);
            placed.pop_back();
        }
    };
    rec(0);
    return count;
}

}  // namespace oracle
