#include <doctest.h>

#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "../support/dot_checker.hpp"
#include "../support/graph_oracle.hpp"
#include "tdlc/error.hpp"
#include "tdlc/graph_export.hpp"
#include "tdlc/qp_groupoids.hpp"

using namespace tdlc;
using oracle::canon;
using oracle::regular_ball_canon;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing " << path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t edge_count(const LabeledGraph& g, bool directed) {
    return std::count_if(g.edges.begin(), g.edges.end(), [&](const GraphEdge& e) { return e.directed == directed; });
}

WindowParams window(unsigned p, std::int64_t R, unsigned M) {
    WindowParams w;
    w.p = p;
    w.R = R;
    w.M = M;
    return w;
}

}  // namespace

TEST_SUITE("graph_export") {
    TEST_CASE("Cayley-Abels graph of the affine group is a regular tree") {
        for (unsigned p : {2u, 3u}) {
            CosetWindow w = zqp_window(window(p, 3, 3));
            Handle u = w.handle(ZQpCoset{0, 0, {}});
            std::vector<Handle> gens{w.handle(ZQpCoset{1, 0, {}}), w.handle(ZQpCoset{-1, 0, {}})};
            CayleyAbels ca = cayley_abels(w, u, gens, 2);
            const LabeledGraph& g = ca.graph;
            CHECK_FALSE(g.partial);
            CHECK(g.vertices.size() == 1 + (p + 1) + (p + 1) * p);
            CHECK(g.edges.size() == g.vertices.size() - 1);
            CHECK(ca.degree_bound == p + 1);
            CHECK(w.coset(ca.fine_subgroup) == ZQpCoset{0, 1, {}});
            auto adj = g.adjacency();
            CHECK(canon(adj, 0) == regular_ball_canon(p, 2));
            for (std::size_t i = 0; i < adj.size(); ++i) {
                CHECK(adj[i].size() <= ca.degree_bound);
                if (g.vertices[i].attrs.at("dist") != "2") CHECK(adj[i].size() == p + 1);
                CHECK(target(w, ca.vertex_handle[i]) == u);
            }
            CHECK(to_dot(g).find("graph") == 0);
            CHECK(dotcheck::check(to_dot(g)).empty());

            CayleyAbels point = cayley_abels(w, u, gens, 0);
            CHECK(point.graph.vertices.size() == 1);
            CHECK(point.graph.edges.empty());
        }
    }

    TEST_CASE("small windows are flagged partial") {
        CosetWindow w = zqp_window(window(2, 2, 2));
        Handle u = w.handle(ZQpCoset{0, 0, {}});
        CayleyAbels ca = cayley_abels(w, u, {w.handle(ZQpCoset{1, 0, {}}), w.handle(ZQpCoset{-1, 0, {}})}, 3);
        CHECK(ca.graph.partial);
    }

    TEST_CASE("degenerate abelian cases") {
        CosetWindow w = qp_window(window(3, 2, 2));
        Handle u = w.handle(QpCoset{0, {}});
        CayleyAbels self = cayley_abels(w, u, {u}, 3);
        CHECK(self.graph.vertices.size() == 1);
        CHECK(self.graph.edges.empty());

        CayleyAbels tri = cayley_abels(w, u, {w.handle(QpCoset{0, prufer_make(3, 1, 1)}), w.handle(QpCoset{0, prufer_make(3, 2, 1)})}, 3);
        CHECK(tri.graph.vertices.size() == 3);
        CHECK(tri.graph.edges.size() == 3);
        for (const auto& nbrs : tri.graph.adjacency()) CHECK(nbrs.size() == 2);

        CHECK_THROWS_AS(cayley_abels(w, u, {w.handle(QpCoset{1, {}})}, 1), Error);
        CHECK_THROWS_AS(cayley_abels(w, w.handle(QpCoset{0, prufer_make(3, 1, 1)}), {u}, 1), Error);
    }

    TEST_CASE("refinement maps") {
        CosetWindow w = qp_window(window(3, 2, 2));
        Handle u0 = w.handle(QpCoset{0, {}}), u1 = w.handle(QpCoset{1, {}});
        auto same = refinement_map(w, u0, u0);
        CHECK(same.size() == 9);
        for (auto [a, b] : same) CHECK(a == b);
        // cosets with an order-9 coordinate have no pieces one level down inside the window
        try {
            refinement_map(w, u0, u1);
            FAIL("expected an overflow");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::WindowOverflow);
        }
        std::vector<Handle> inner;
        for (Handle a : left_cosets(w, u0))
            if (prufer_order(3, w.coset(a).a) <= 3) inner.push_back(a);
        auto psi = refinement_map(w, u0, u1, inner);
        CHECK(psi.size() == 3);
        ZQpCoset img = w.coset(psi.at(u0));
        CHECK(img.r == 1);
        CHECK(prufer_mul_p_power(3, img.a, 1).is_zero());
        for (auto [a, b] : psi) {
            CHECK(is_subset(w, b, a));
            CHECK(target(w, b) == u1);
        }
        CHECK(refinement_map(w, u0, u1, inner) == psi);
        CHECK_THROWS_AS(refinement_map(w, u1, u0), Error);
        CHECK_THROWS_AS(refinement_map(w, u0, u1, {u1}), Error);
    }

    TEST_CASE("distortion") {
        LabeledGraph b = ball_graph(3, 3);
        std::vector<std::optional<std::size_t>> id(b.vertices.size());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        DistortionReport r = distortion_report(b, b, id, 1000000, 1);
        CHECK(r.multiplicative == 1);
        CHECK(r.additive == 0);
        CHECK(r.pairs == 22 * 21 / 2);

        // refinement between the U_0 and U_1 graphs of the affine group, p = 2
        CosetWindow w = zqp_window(window(2, 4, 4));
        Handle u0 = w.handle(ZQpCoset{0, 0, {}}), u1 = w.handle(ZQpCoset{0, 1, {}});
        CayleyAbels ga = cayley_abels(w, u0, {w.handle(ZQpCoset{1, 0, {}}), w.handle(ZQpCoset{-1, 0, {}})}, 3);
        CayleyAbels gb = cayley_abels(w, u1, {w.handle(ZQpCoset{1, 1, {}}), w.handle(ZQpCoset{-1, 1, {}})}, 3);
        CHECK_FALSE(ga.graph.partial);
        auto psi = refinement_map(w, u0, u1, ga.vertex_handle);
        std::vector<std::optional<std::size_t>> map;
        for (Handle h : ga.vertex_handle) {
            auto it = std::find(gb.vertex_handle.begin(), gb.vertex_handle.end(), psi.at(h));
            map.push_back(it == gb.vertex_handle.end() ? std::nullopt : std::optional<std::size_t>(it - gb.vertex_handle.begin()));
        }
        DistortionReport rr = distortion_report(ga.graph, gb.graph, map, 1000000, 1);
        CHECK(rr.pairs > 0);
        CHECK(rr.multiplicative >= 1);
        CHECK(rr.multiplicative <= 4);
        MESSAGE("refinement distortion: " << rr.summary());

        LabeledGraph split;
        split.add_vertex("a");
        split.add_vertex("b");
        DistortionReport apart = distortion_report(split, split, {0, 1}, 10, 1);
        CHECK(apart.pairs == 0);
        CHECK(apart.disconnected == 1);
    }

    TEST_CASE("tree balls and overlays") {
        LabeledGraph b1 = ball_graph(3, 1);
        CHECK(b1.vertices.size() == 4);
        CHECK(b1.edges.size() == 3);
        std::set<unsigned> colours;
        for (const auto& e : b1.edges) colours.insert(*e.colour);
        CHECK(colours == std::set<unsigned>{1, 2, 3});
        CHECK(ball_graph(3, 2).vertices.size() == 10);

        LabeledGraph same = action_overlay(ball_graph(3, 2), TreeAut(3));
        CHECK(edge_count(same, true) == 0);

        auto g = std::make_shared<GeneratorAut>(GeneratorAut{3, "g", "", {{"", LocalPerm::from_images({2, 3, 1})}}});
        LabeledGraph rot = action_overlay(ball_graph(3, 2), TreeAut::of(g), "g");
        CHECK(edge_count(rot, true) == 9);
        CHECK_FALSE(rot.partial);
        CHECK(dotcheck::check(to_dot(rot)).empty());
        CHECK(to_dot(rot).find("dir=forward") != std::string::npos);

        auto inv = std::make_shared<GeneratorAut>(GeneratorAut{3, "h", "1", {}});
        LabeledGraph moved = action_overlay(ball_graph(3, 1), TreeAut::of(inv), "h");
        CHECK(moved.partial);  // images of "2" and "3" leave the ball
    }

    TEST_CASE("DOT output") {
        LabeledGraph empty;
        std::string e = to_dot(empty);
        std::string squeezed;
        for (char c : e)
            if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
        CHECK(squeezed == "graph\"G\"{}");
        CHECK(dotcheck::check(e).empty());

        std::string dot = to_dot(ball_graph(3, 1));
        CHECK(dot == read_file(std::string(TDLC_GOLDEN_DIR) + "/ball_3_1.dot"));
        CHECK(to_dot(ball_graph(3, 2)) == read_file(std::string(TDLC_GOLDEN_DIR) + "/ball_3_2.dot"));
        {
            CosetWindow w = zqp_window(window(2, 3, 3));
            Handle u = w.handle(ZQpCoset{0, 0, {}});
            CayleyAbels ca = cayley_abels(w, u, {w.handle(ZQpCoset{1, 0, {}}), w.handle(ZQpCoset{-1, 0, {}})}, 2);
            CHECK(to_dot(ca.graph) == read_file(std::string(TDLC_GOLDEN_DIR) + "/ca_2.dot"));
        }

        LabeledGraph tricky;
        tricky.name = "a \"quoted\" name";
        tricky.add_vertex("x\\y", {{"label", "say \"hi\""}});
        CHECK(dotcheck::check(to_dot(tricky)).empty());

        CHECK_FALSE(dotcheck::check("graph G { a -- }").empty());
        CHECK_FALSE(dotcheck::check("graph G { a -- b [label] }").empty());
        CHECK_FALSE(dotcheck::check("graph G { \"a }").empty());
    }

    TEST_CASE("structured dump round trip") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            LabeledGraph g = oracle::random_graph(rng, trial);
            std::string dump = to_structured(g);
            LabeledGraph back = load_structured(dump);
            CHECK(back == g);
            CHECK(to_structured(back) == dump);
        }
        LabeledGraph ball = ball_graph(3, 2);
        CHECK(load_structured(to_structured(ball)) == ball);

        CHECK_THROWS_AS(load_structured(""), Error);
        CHECK_THROWS_AS(load_structured("labeled-graph v2\nend\n"), Error);
        CHECK_THROWS_AS(load_structured("labeled-graph v1\ngraph {\"name\":\"G\",\"partial\":false}\n"), Error);
        CHECK_THROWS_AS(load_structured("labeled-graph v1\ngraph {\"name\":\"G\",\"partial\":false}\nedge {\"u\":0,\"v\":1,\"label\":\"\",\"directed\":false,\"colour\":null}\nend\n"), Error);
        CHECK_THROWS_AS(load_structured("labeled-graph v1\ngraph {\"name\":\"G\"\nend\n"), Error);
        try {
            load_structured("labeled-graph v1\nnode {}\nend\n");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ParseError);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
}
