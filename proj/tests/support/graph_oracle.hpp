#pragma once

// Rooted-tree canonical forms and random labelled graphs for exporter checks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tdlc/graph_export.hpp"

namespace oracle {

// AHU canonical form of the tree hanging from `root`.
inline std::string canon(const std::vector<std::vector<std::size_t>>& adj, std::size_t root, std::size_t parent = SIZE_MAX) {
    std::vector<std::string> kids;
    for (std::size_t c : adj[root])
        if (c != parent) kids.push_back(canon(adj, c, root));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (const auto& k : kids) out += k;
    return out + ")";
}

// Ball of the (p+1)-regular tree built by hand: the root has p+1 children,
// every other inner vertex has p.
inline std::string regular_ball_canon(unsigned p, unsigned radius) {
    std::function<std::string(unsigned, unsigned)> sub = [&](unsigned depth, unsigned kids) -> std::string {
        if (depth == radius) return "()";
        std::vector<std::string> parts(kids, sub(depth + 1, p));
        std::string out = "(";
        for (const auto& x : parts) out += x;
        return out + ")";
    };
    return sub(0, p + 1);
}

// Small graph with awkward labels, optional colours and some arcs.
inline tdlc::LabeledGraph random_graph(std::mt19937_64& rng, int trial) {
    tdlc::LabeledGraph g;
    g.name = "g" + std::to_string(trial);
    g.partial = rng() % 2;
    std::size_t n = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::string, std::string> attrs;
        if (rng() % 2) attrs["label"] = "v \"" + std::to_string(i) + "\"\n";
        if (rng() % 2) attrs["dist"] = std::to_string(rng() % 5);
        g.add_vertex("id" + std::to_string(i), attrs);
    }
    for (std::size_t k = 0; k < 2 * n; ++k) {
        tdlc::GraphEdge e{rng() % n, rng() % n, std::to_string(rng() % 3), std::nullopt, rng() % 3 == 0};
        if (rng() % 2) e.colour = static_cast<unsigned>(rng() % 4);
        g.add_edge(e);
    }
    return g;
}

}  // namespace oracle
