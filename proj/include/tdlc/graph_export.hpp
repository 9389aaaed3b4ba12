#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdlc/bigint.hpp"
#include "tdlc/meet_groupoid.hpp"
#include "tdlc/tree_aut.hpp"

namespace tdlc {

struct GraphVertex {
    std::string id;
    std::map<std::string, std::string> attrs;

    bool operator==(const GraphVertex&) const = default;
};

// Undirected edge, or a directed arc when `directed` is set (action overlays).
struct GraphEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::string label;
    std::optional<unsigned> colour;
    bool directed = false;

    auto operator<=>(const GraphEdge&) const = default;
};

struct LabeledGraph {
    std::string name = "G";
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;
    bool partial = false;  // construction stopped at the window boundary somewhere

    std::optional<std::size_t> find(const std::string& id) const;
    std::size_t add_vertex(std::string id, std::map<std::string, std::string> attrs = {});
    // Throws InvalidArgument on a missing endpoint; ignores an exact duplicate.
    void add_edge(GraphEdge e);
    std::vector<std::vector<std::size_t>> adjacency(bool include_arcs = false) const;

    // Equality up to edge order.
    bool operator==(const LabeledGraph& other) const;
};

struct CayleyAbels {
    LabeledGraph graph;
    std::vector<Handle> vertex_handle;  // graph vertex -> coset
    Handle fine_subgroup = kEmpty;      // U ∩ ⋂ C_i·C_i^{-1}
    std::uint64_t degree_bound = 0;     // Σ |U : U ∩ C_i·C_i^{-1}|
};

// Breadth-first search from u to `radius`; A ~ B when some left coset P of the
// fine subgroup inside A lies in a left coset Q of C_i·C_i^{-1} with B = Q·C_i.
CayleyAbels cayley_abels(const MeetGroupoidOracle& o, Handle u, const std::vector<Handle>& gens, unsigned radius);

// ψ(A) = least-handle left coset of v inside A, for every left coset A of u.
// WindowOverflow when some A has no such coset in the window.
std::map<Handle, Handle> refinement_map(const MeetGroupoidOracle& o, Handle u, Handle v);
// Same rule restricted to the given left cosets of u.
std::map<Handle, Handle> refinement_map(const MeetGroupoidOracle& o, Handle u, Handle v, const std::vector<Handle>& domain);

struct DistortionReport {
    std::uint64_t pairs = 0;
    std::uint64_t disconnected = 0;   // sampled pairs without a path on one side; excluded
    Rational multiplicative = 1;      // max over pairs of dB/dA and dA/dB, both nonzero
    std::uint64_t additive = 0;       // max |dB - dA|
    std::string summary() const;
};

// `map[i]` is the vertex of b hit by vertex i of a, or nullopt when it falls outside.
DistortionReport distortion_report(const LabeledGraph& a, const LabeledGraph& b, const std::vector<std::optional<std::size_t>>& map,
                                   std::uint64_t samples, std::uint64_t seed);

LabeledGraph ball_graph(unsigned d, unsigned radius);
// Adds arcs X -> a(X) inside a ball graph; fixed points add nothing.
LabeledGraph action_overlay(const LabeledGraph& ball, const TreeAut& a, const std::string& label = "a");

struct DotStyle {
    bool colour_edges = true;
};

std::string to_dot(const LabeledGraph& g, const DotStyle& style = {});
std::string to_structured(const LabeledGraph& g);
LabeledGraph load_structured(const std::string& text);

}  // namespace tdlc
