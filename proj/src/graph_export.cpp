#include "tdlc/graph_export.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

// ---- graph container ----

std::optional<std::size_t> LabeledGraph::find(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id == id) return i;
    return std::nullopt;
}

std::size_t LabeledGraph::add_vertex(std::string id, std::map<std::string, std::string> attrs) {
    if (find(id)) throw Error(ErrorKind::InvalidArgument, "vertex '" + id + "' already present");
    vertices.push_back({std::move(id), std::move(attrs)});
    return vertices.size() - 1;
}

void LabeledGraph::add_edge(GraphEdge e) {
    if (e.u >= vertices.size() || e.v >= vertices.size()) throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    if (!e.directed && e.u > e.v) std::swap(e.u, e.v);
    if (std::find(edges.begin(), edges.end(), e) != edges.end()) return;
    edges.push_back(std::move(e));
}

std::vector<std::vector<std::size_t>> LabeledGraph::adjacency(bool include_arcs) const {
    std::vector<std::set<std::size_t>> sets(vertices.size());
    for (const auto& e : edges) {
        if (e.directed && !include_arcs) continue;
        if (e.u == e.v) continue;
        sets[e.u].insert(e.v);
        sets[e.v].insert(e.u);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& s : sets) out.emplace_back(s.begin(), s.end());
    return out;
}

bool LabeledGraph::operator==(const LabeledGraph& other) const {
    if (name != other.name || partial != other.partial || vertices != other.vertices) return false;
    auto a = edges, b = other.edges;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// ---- Cayley-Abels ----

CayleyAbels cayley_abels(const MeetGroupoidOracle& o, Handle u, const std::vector<Handle>& gens, unsigned radius) {
    if (u == kEmpty || !is_idempotent(o, u)) throw Error(ErrorKind::InvalidArgument, "base " + o.describe(u) + " is not a subgroup");
    CayleyAbels out;
    std::vector<Handle> right_of;  // C_i·C_i^{-1}
    Handle fine = u;
    for (Handle c : gens) {
        if (target(o, c) != u) throw Error(ErrorKind::InvalidArgument, "generator " + o.describe(c) + " is not a left coset of " + o.describe(u));
        Handle v = source(o, c);
        right_of.push_back(v);
        fine = o.meet(fine, v);
        out.degree_bound += o.index(u, v);
    }
    if (fine == kEmpty) throw Error(ErrorKind::InvalidArgument, "generators share no subgroup with the base");
    out.fine_subgroup = fine;

    auto fine_cosets = left_cosets(o, fine);
    std::vector<std::vector<Handle>> coarse_cosets;
    for (Handle v : right_of) coarse_cosets.push_back(left_cosets(o, v));
    std::uint64_t pieces = o.index(u, fine);

    LabeledGraph& g = out.graph;
    std::map<Handle, std::size_t> id_of;
    auto add = [&](Handle h, unsigned dist) {
        std::size_t i = g.add_vertex("n" + std::to_string(g.vertices.size()), {{"label", o.describe(h)}, {"dist", std::to_string(dist)}});
        id_of[h] = i;
        out.vertex_handle.push_back(h);
        return i;
    };
    add(u, 0);
    std::deque<std::pair<Handle, unsigned>> queue{{u, 0}};
    while (!queue.empty()) {
        auto [a, dist] = queue.front();
        queue.pop_front();
        std::vector<Handle> inside;
        for (Handle p : fine_cosets)
            if (is_subset(o, p, a)) inside.push_back(p);
        if (inside.size() < pieces) g.partial = true;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            std::set<Handle> reached;
            for (Handle p : inside) {
                auto q = std::find_if(coarse_cosets[i].begin(), coarse_cosets[i].end(), [&](Handle c) { return is_subset(o, p, c); });
                if (q == coarse_cosets[i].end()) {
                    g.partial = true;
                    continue;
                }
                ProdResult r = o.prod(*q, gens[i]);
                if (r.defined())
                    reached.insert(r.value);
                else
                    g.partial = true;
            }
            for (Handle b : reached) {
                if (b == a) continue;
                auto it = id_of.find(b);
                if (it == id_of.end()) {
                    if (dist >= radius) continue;
                    add(b, dist + 1);
                    queue.push_back({b, dist + 1});
                    it = id_of.find(b);
                }
                std::size_t x = id_of.at(a), y = it->second;
                bool known = std::any_of(g.edges.begin(), g.edges.end(), [&](const GraphEdge& e) {
                    return (e.u == x && e.v == y) || (e.u == y && e.v == x);
                });
                if (!known) g.add_edge({x, y, std::to_string(i), static_cast<unsigned>(i), false});
            }
        }
    }
    return out;
}

std::map<Handle, Handle> refinement_map(const MeetGroupoidOracle& o, Handle u, Handle v) {
    if (!is_idempotent(o, u)) throw Error(ErrorKind::InvalidArgument, o.describe(u) + " is not a subgroup");
    return refinement_map(o, u, v, left_cosets(o, u));
}

std::map<Handle, Handle> refinement_map(const MeetGroupoidOracle& o, Handle u, Handle v, const std::vector<Handle>& domain) {
    if (!is_idempotent(o, u) || !is_idempotent(o, v) || !is_subset(o, v, u))
        throw Error(ErrorKind::InvalidArgument, o.describe(v) + " is not a subgroup of " + o.describe(u));
    auto fine = left_cosets(o, v);
    std::sort(fine.begin(), fine.end());
    std::map<Handle, Handle> out;
    for (Handle a : domain) {
        if (target(o, a) != u) throw Error(ErrorKind::InvalidArgument, o.describe(a) + " is not a left coset of " + o.describe(u));
        auto it = std::find_if(fine.begin(), fine.end(), [&](Handle p) { return is_subset(o, p, a); });
        if (it == fine.end()) throw Error(ErrorKind::WindowOverflow, "no coset of " + o.describe(v) + " inside " + o.describe(a) + " in the window");
        out[a] = *it;
    }
    return out;
}

// ---- distortion ----

namespace {

constexpr std::uint64_t kFar = UINT64_MAX;

std::vector<std::uint64_t> bfs(const std::vector<std::vector<std::size_t>>& adj, std::size_t from) {
    std::vector<std::uint64_t> d(adj.size(), kFar);
    std::deque<std::size_t> q{from};
    d[from] = 0;
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop_front();
        for (std::size_t y : adj[x])
            if (d[y] == kFar) {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
    }
    return d;
}

}  // namespace

std::string DistortionReport::summary() const {
    std::ostringstream os;
    os << "pairs=" << pairs << " disconnected=" << disconnected << " multiplicative=" << multiplicative << " additive=" << additive;
    return os.str();
}

DistortionReport distortion_report(const LabeledGraph& a, const LabeledGraph& b, const std::vector<std::optional<std::size_t>>& map,
                                   std::uint64_t samples, std::uint64_t seed) {
    if (map.size() != a.vertices.size()) throw Error(ErrorKind::InvalidArgument, "map must cover every vertex of the first graph");
    auto adj_a = a.adjacency(), adj_b = b.adjacency();
    std::size_t n = a.vertices.size();
    std::vector<std::pair<std::size_t, std::size_t>> picks;
    std::uint64_t total = n * (n - (n > 0)) / 2;
    if (samples >= total) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) picks.push_back({i, j});
    } else {
        std::mt19937_64 engine(seed);
        while (picks.size() < samples) {
            std::size_t i = engine() % n, j = engine() % n;
            if (i != j) picks.push_back({i, j});
        }
    }
    std::map<std::size_t, std::vector<std::uint64_t>> da, db;
    auto dist = [](auto& cache, const auto& adj, std::size_t x, std::size_t y) {
        auto it = cache.find(x);
        if (it == cache.end()) it = cache.emplace(x, bfs(adj, x)).first;
        return it->second[y];
    };
    DistortionReport rep;
    for (auto [i, j] : picks) {
        if (!map[i] || !map[j]) {
            ++rep.disconnected;
            continue;
        }
        std::uint64_t x = dist(da, adj_a, i, j), y = dist(db, adj_b, *map[i], *map[j]);
        if (x == kFar || y == kFar) {
            ++rep.disconnected;
            continue;
        }
        ++rep.pairs;
        rep.additive = std::max(rep.additive, x > y ? x - y : y - x);
        if (x > 0 && y > 0) rep.multiplicative = std::max({rep.multiplicative, Rational(x, y), Rational(y, x)});
    }
    return rep;
}

// ---- tree balls ----

LabeledGraph ball_graph(unsigned d, unsigned radius) {
    LabeledGraph g;
    for (const Vertex& x : ball(d, "", radius))
        g.add_vertex("x" + x, {{"word", x}, {"label", x.empty() ? "root" : x}});
    for (std::size_t i = 1; i < g.vertices.size(); ++i) {
        const Vertex& x = g.vertices[i].attrs.at("word");
        unsigned c = static_cast<unsigned>(x.back() - '0');
        g.add_edge({*g.find("x" + x.substr(0, x.size() - 1)), i, std::to_string(c), c, false});
    }
    return g;
}

LabeledGraph action_overlay(const LabeledGraph& ball_g, const TreeAut& a, const std::string& label) {
    LabeledGraph g = ball_g;
    for (std::size_t i = 0; i < ball_g.vertices.size(); ++i) {
        auto w = ball_g.vertices[i].attrs.find("word");
        if (w == ball_g.vertices[i].attrs.end()) throw Error(ErrorKind::InvalidArgument, "overlay needs a ball graph");
        Vertex y = apply_word(a, w->second);
        if (y == w->second) continue;
        auto j = g.find("x" + y);
        if (!j) {
            g.partial = true;
            continue;
        }
        g.add_edge({i, *j, label, std::nullopt, true});
    }
    return g;
}

// ---- DOT ----

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

const char* palette(unsigned c) {
    static const char* names[] = {"black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta", "gray"};
    return names[c % 10];
}

}  // namespace

std::string to_dot(const LabeledGraph& g, const DotStyle& style) {
    std::ostringstream os;
    os << "graph " << dot_quote(g.name) << " {\n";
    for (const auto& v : g.vertices) {
        os << "  " << dot_quote(v.id);
        auto l = v.attrs.find("label");
        if (l != v.attrs.end()) os << " [label=" << dot_quote(l->second) << "]";
        os << ";\n";
    }
    for (const auto& e : g.edges) {
        os << "  " << dot_quote(g.vertices[e.u].id) << " -- " << dot_quote(g.vertices[e.v].id) << " [";
        std::vector<std::string> attrs;
        if (e.directed) attrs.push_back("dir=forward");
        if (!e.label.empty()) attrs.push_back("label=" + dot_quote(e.label));
        if (e.directed) attrs.push_back("style=dashed");
        else if (style.colour_edges && e.colour) attrs.push_back(std::string("color=") + palette(*e.colour));
        for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

// ---- structured dump ----

std::string to_structured(const LabeledGraph& g) {
    using nlohmann::json;
    std::ostringstream os;
    os << "labeled-graph v1\n";
    os << "graph " << json{{"name", g.name}, {"partial", g.partial}}.dump() << "\n";
    for (const auto& v : g.vertices) os << "vertex " << json{{"id", v.id}, {"attrs", v.attrs}}.dump() << "\n";
    auto edges = g.edges;
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) {
        json j{{"u", e.u}, {"v", e.v}, {"label", e.label}, {"directed", e.directed}};
        j["colour"] = e.colour ? json(*e.colour) : json(nullptr);
        os << "edge " << j.dump() << "\n";
    }
    os << "end\n";
    return os.str();
}

LabeledGraph load_structured(const std::string& text) {
    using nlohmann::json;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) -> void {
        throw Error(ErrorKind::ParseError, "graph dump line " + std::to_string(lineno) + ": " + what);
    };
    auto next = [&]() {
        if (!std::getline(in, line)) fail("unexpected end of input");
        ++lineno;
    };
    next();
    if (line != "labeled-graph v1") fail("expected header 'labeled-graph v1'");
    LabeledGraph g;
    bool seen_graph = false, ended = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line == "end") {
            ended = true;
            break;
        }
        auto space = line.find(' ');
        std::string kind = line.substr(0, space);
        json j;
        try {
            if (space == std::string::npos) fail("missing payload");
            j = json::parse(line.substr(space + 1));
            if (kind == "graph") {
                g.name = j.at("name").get<std::string>();
                g.partial = j.at("partial").get<bool>();
                seen_graph = true;
            } else if (kind == "vertex") {
                if (g.find(j.at("id").get<std::string>())) fail("duplicate vertex id");
                g.vertices.push_back({j.at("id").get<std::string>(), j.at("attrs").get<std::map<std::string, std::string>>()});
            } else if (kind == "edge") {
                GraphEdge e;
                e.u = j.at("u").get<std::size_t>();
                e.v = j.at("v").get<std::size_t>();
                e.label = j.at("label").get<std::string>();
                e.directed = j.at("directed").get<bool>();
                if (!j.at("colour").is_null()) e.colour = j.at("colour").get<unsigned>();
                if (e.u >= g.vertices.size() || e.v >= g.vertices.size()) fail("edge endpoint out of range");
                g.edges.push_back(e);
            } else {
                fail("unknown record '" + kind + "'");
            }
        } catch (const json::exception& ex) {
            fail(std::string("malformed record: ") + ex.what());
        }
    }
    if (!seen_graph) fail("missing graph record");
    if (!ended) fail("missing 'end'");
    return g;
}

}  // namespace tdlc
