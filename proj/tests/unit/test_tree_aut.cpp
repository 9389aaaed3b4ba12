#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "../support/tree_oracle.hpp"
#include "tdlc/error.hpp"
#include "tdlc/tree_aut.hpp"

using namespace tdlc;
using oracle::placements;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

std::shared_ptr<const GeneratorAut> gen(const std::string& name, const Vertex& w, std::map<Vertex, LocalPerm> sigma = {}) {
    return std::make_shared<GeneratorAut>(GeneratorAut{3, name, w, std::move(sigma)});
}

LocalPerm perm(std::vector<unsigned> img) { return LocalPerm::from_images(std::move(img)); }

// ℓ = 1 translation along ..., "2", "", "1", "12", ...
TreeAut translation() { return TreeAut::of(gen("t", "1", {{"", perm({2, 1, 3})}})); }

std::shared_ptr<const GeneratorAut> random_generator(std::mt19937_64& rng, unsigned depth) {
    auto verts = ball(3, "", depth);
    std::vector<unsigned> img{1, 2, 3};
    std::map<Vertex, LocalPerm> sigma;
    for (const Vertex& v : verts) {
        if (rng() % 2) continue;
        std::shuffle(img.begin(), img.end(), rng);
        sigma[v] = perm(img);
    }
    return gen("r" + std::to_string(rng() % 1000), verts[rng() % verts.size()], sigma);
}

TreeAut random_word(std::mt19937_64& rng, std::size_t len) {
    TreeAut a(3);
    for (std::size_t i = 0; i < len; ++i) {
        TreeAut g = TreeAut::of(random_generator(rng, 2));
        a = a * (rng() % 2 ? g : g.inverse());
    }
    return a;
}

}  // namespace

TEST_SUITE("tree_aut") {
    TEST_CASE("tree geometry") {
        CHECK(move("", 1) == "1");
        CHECK(move("1", 1) == "");
        CHECK(move("12", 3) == "123");
        CHECK(tree_distance("12", "13") == 2);
        CHECK(tree_distance("", "121") == 3);
        CHECK(ball(3, "", 0).size() == 1);
        CHECK(ball(3, "", 1).size() == 4);
        CHECK(ball(3, "", 2).size() == 10);
        CHECK(ball(3, "", 3).size() == 22);
        CHECK(ball(4, "12", 1).size() == 5);
        CHECK(geodesic("12", "13") == std::vector<Vertex>{"12", "1", "13"});
        CHECK(is_vertex(3, "121"));
        CHECK_FALSE(is_vertex(3, "11"));
        CHECK_FALSE(is_vertex(3, "4"));
        for (const Vertex& x : ball(3, "", 3))
            for (unsigned c = 1; c <= 3; ++c) CHECK(tree_distance(x, move(x, c)) == 1);
    }

    TEST_CASE("edge inversion generator") {
        TreeAut g = TreeAut::of(gen("g", "1"));
        CHECK(apply_word(g, "") == "1");
        CHECK(apply_word(g, "1") == "");
        CHECK(apply_word(g, "2") == "12");
        CHECK(apply_word(TreeAut(3), "123") == "123");
        CHECK(portrait(g, "") == LocalPerm::identity(3));
        for (const Vertex& x : ball(3, "", 3)) CHECK(portrait(TreeAut(3), x).is_identity());
    }

    TEST_CASE("correction keeps edge colours consistent") {
        // sigma at "1" disagrees with the root on colour 1 and gets corrected
        auto g = gen("g", "", {{"", perm({2, 1, 3})}, {"1", perm({1, 2, 3})}});
        LocalPerm t = effective_perm(*g, "1");
        CHECK(t(1) == 2);
        TreeAut a = TreeAut::of(g);
        CHECK(apply_word(a, "1") == "2");
        CHECK(apply_word(a, "11") == "");
    }

    TEST_CASE("root-fixing generators restrict to the truncated table") {
        TruncatedAuts table = brute_force_aut(3, 3);
        CHECK(table.maps.size() == 3072);
        std::set<std::vector<Vertex>> expected;
        for (const auto& m : table.maps) {
            std::vector<Vertex> row;
            for (auto i : m) row.push_back(table.vertices[i]);
            expected.insert(row);
        }
        std::set<std::vector<Vertex>> realized;
        for (const GeneratorAut& g : enumerate_generators(3, 3, 100000)) {
            if (!g.w.empty()) continue;
            std::vector<Vertex> row;
            for (const Vertex& x : table.vertices) row.push_back(apply_generator(g, x));
            realized.insert(row);
        }
        CHECK(realized == expected);
    }

    TEST_CASE("brute force counts") {
        CHECK(brute_force_aut(3, 1).maps.size() == 6);
        CHECK(brute_force_aut(3, 2).maps.size() == 48);
        auto t = brute_force_aut(3, 2);
        std::vector<std::uint32_t> id(t.vertices.size());
        for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
        CHECK(std::count(t.maps.begin(), t.maps.end(), id) == 1);
        CHECK(kind_of([] { brute_force_aut(4, 4); }) == ErrorKind::BudgetExceeded);
    }

    TEST_CASE("generators are graph automorphisms") {
        auto verts = ball(3, "", 4);
        std::mt19937_64 rng(11);
        std::vector<GeneratorAut> gens;
        for (unsigned k = 0; k <= 2; ++k)
            for (auto& g : enumerate_generators(3, k, 100000)) gens.push_back(g);
        for (int i = 0; i < 200; ++i) gens.push_back(*random_generator(rng, 2));
        for (const GeneratorAut& g : gens) {
            std::vector<Vertex> img;
            for (const Vertex& x : verts) img.push_back(apply_generator(g, x));
            bool ok = true;
            for (std::size_t i = 0; i < verts.size() && ok; ++i) {
                for (unsigned c = 1; c <= 3; ++c)
                    ok = ok && tree_distance(img[i], apply_generator(g, move(verts[i], c))) == 1;
                ok = ok && apply_generator_inverse(g, img[i]) == verts[i];
            }
            for (std::size_t i = 0; i < verts.size() && ok; i += 7)
                for (std::size_t j = 0; j < verts.size() && ok; j += 5)
                    ok = tree_distance(img[i], img[j]) == tree_distance(verts[i], verts[j]);
            CHECK_MESSAGE(ok, format_generator(g));
        }
    }

    TEST_CASE("words: inverses and portraits") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            TreeAut a = random_word(rng, 1 + rng() % 4);
            TreeAut b = random_word(rng, 1 + rng() % 4);
            auto verts = ball(3, "", 4);
            Vertex x = verts[rng() % verts.size()];
            CHECK(apply_word(a.inverse(), apply_word(a, x)) == x);
            CHECK(apply_word(a, apply_word(a.inverse(), x)) == x);
            CHECK((a * a.inverse()).is_identity_word());
            CHECK(apply_word(a * b, x) == apply_word(b, apply_word(a, x)));
            CHECK(portrait(a * b, x) == portrait(a, x).then(portrait(b, apply_word(a, x))));
        }
    }

    TEST_CASE("classification") {
        TreeAut id(3);
        Classification c = classify(id, 3);
        CHECK(c.type == AutType::Elliptic);
        CHECK(c.fixed.size() == ball(3, "", 3).size());

        TreeAut g1 = TreeAut::of(gen("g1", "1"));
        TreeAut g2 = TreeAut::of(gen("g2", "2"));
        c = classify(g1, 3);
        CHECK(c.type == AutType::Inversion);
        CHECK(c.edge.first == "");
        CHECK(c.edge.second == "1");

        c = classify(g1 * g2, 6);
        CHECK(c.type == AutType::Hyperbolic);
        CHECK(c.length == 2);
        for (const Vertex& v : {"2", "", "1"}) CHECK(std::count(c.axis.begin(), c.axis.end(), v) == 1);
        // brute-force displacement scan
        std::uint64_t best = 99;
        for (const Vertex& x : ball(3, "", 6)) best = std::min(best, tree_distance(x, apply_word(g1 * g2, x)));
        CHECK(best == 2);

        CHECK(scale_treeaut(id, 3) == 1u);
        CHECK(scale_treeaut(g1, 3) == 1u);
        CHECK(scale_treeaut(g1 * g2, 6) == 4u);
        CHECK(classify(translation(), 4).length == 1);
        CHECK(kind_of([&] { classify(id, 1); }) == ErrorKind::InvalidArgument);

        // a rotation about a vertex five steps away is not visible from a small ball
        TreeAut rot = TreeAut::of(gen("e", "", {{"", perm({2, 3, 1})}}));
        TreeAut far = translation().pow(-5) * rot * translation().pow(5);
        CHECK(classify(far, 3).type == AutType::Inconclusive);
        CHECK_FALSE(scale_treeaut(far, 3).has_value());
        Classification wide = classify(far, 8);
        CHECK(wide.type == AutType::Elliptic);
        CHECK(wide.fixed == std::vector<Vertex>{apply_word(translation().pow(5), "")});
    }

    TEST_CASE("translation length is a conjugacy invariant") {
        std::mt19937_64 rng(17);
        TreeAut g1 = TreeAut::of(gen("g1", "1")), g2 = TreeAut::of(gen("g2", "2"));
        std::vector<TreeAut> hyperbolic{g1 * g2, translation(), translation().pow(3), g1 * g2 * translation()};
        for (const TreeAut& h : hyperbolic) {
            Classification base = classify(h, 9);
            REQUIRE(base.type == AutType::Hyperbolic);
            CHECK(scale_treeaut(h, 9) == scale_treeaut(h.inverse(), 9));
            for (int i = 0; i < 10; ++i) {
                TreeAut x = TreeAut::of(random_generator(rng, 2));
                Classification conj = classify(x.inverse() * h * x, 9);
                CHECK(conj.type == AutType::Hyperbolic);
                CHECK(conj.length == base.length);
            }
        }
    }

    TEST_CASE("agreement and conjugacy search") {
        TreeAut g1 = TreeAut::of(gen("g1", "1"));
        CHECK(agree_set(g1, g1, 3).size() == 22);
        CHECK(agree_set(g1, TreeAut(3), 3).empty());

        TreeAut x = TreeAut::of(gen("x", "2", {{"", perm({1, 3, 2})}}));
        TreeAut other = x.inverse() * g1 * x;
        CHECK(classify(other, 4).edge != classify(g1, 4).edge);
        ConjugacyResult r = conjugate_search(g1, other, 4, 2);
        REQUIRE(r.witness.has_value());
        TreeAut w = TreeAut::of(std::make_shared<GeneratorAut>(*r.witness));
        for (const Vertex& v : ball(3, "", 5)) CHECK(apply_word(w.inverse() * g1 * w, v) == apply_word(other, v));

        TreeAut g2 = TreeAut::of(gen("g2", "2"));
        ConjugacyResult no = conjugate_search(translation(), g1 * g2, 6, 3);
        CHECK_FALSE(no.witness.has_value());
        CHECK(no.certificate.find("translation lengths differ") != std::string::npos);
        CHECK(no.candidates == 0);
    }

    TEST_CASE("ball stabilizer index") {
        CHECK(ball_stab_index(3, {"", "1"}, {""}) == 1);
        CHECK(ball_stab_index(3, {"", "1"}, {"", "2"}) == 2);
        CHECK(ball_stab_index(3, {"", "1"}, {"2", "23"}) == 4);
        CHECK(ball_stab_index(3, {""}, {"1"}) == 3);
        CHECK(ball_stab_index(3, {""}, {"1", "12"}) == 6);
        CHECK(ball_stab_index(3, {""}, {"", "1", "2"}) == 6);
        CHECK(kind_of([] { ball_stab_index(3, {"1", "2"}, {""}); }) == ErrorKind::NotConvex);
        CHECK(kind_of([] { ball_stab_index(3, {""}, {"1", "23"}); }) == ErrorKind::NotConvex);
        CHECK(kind_of([] { ball_stab_index(3, {}, {""}); }) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("ball stabilizer index against the truncated table") {
        TruncatedAuts table = brute_force_aut(3, 2);
        std::map<Vertex, std::uint32_t> pos;
        for (std::uint32_t i = 0; i < table.vertices.size(); ++i) pos[table.vertices[i]] = i;
        auto all = oracle::subtrees_of(3, table.vertices);
        std::size_t pairs = 0;
        for (const auto& bp : all) {
            if (std::find(bp.begin(), bp.end(), Vertex{}) == bp.end()) continue;
            for (const auto& b : all) {
                std::set<std::vector<std::uint32_t>> images;
                for (const auto& m : table.maps) {
                    bool fixes = true;
                    for (const Vertex& v : bp) fixes = fixes && m[pos[v]] == pos[v];
                    if (!fixes) continue;
                    std::vector<std::uint32_t> img;
                    for (const Vertex& v : b) img.push_back(m[pos[v]]);
                    images.insert(img);
                }
                CHECK(ball_stab_index(3, bp, b) == images.size());
                ++pairs;
            }
        }
        CHECK(pairs > 10000);
    }

    TEST_CASE("ball stabilizer index against placements") {
        std::mt19937_64 rng(23);
        auto verts = ball(3, "", 3);
        for (int trial = 0; trial < 300; ++trial) {
            auto pick = [&](unsigned r) { return ball(3, verts[rng() % verts.size()], r); };
            std::vector<Vertex> bp = pick(rng() % 2), b = pick(rng() % 2);
            if (rng() % 2) b = geodesic(verts[rng() % verts.size()], verts[rng() % verts.size()]);
            CHECK(ball_stab_index(3, bp, b) == placements(3, bp, b));
        }
    }

    TEST_CASE("m and tidiness") {
        TreeAut id(3);
        for (unsigned n = 0; n <= 2; ++n) CHECK(m_tree(id, "", n) == 1);

        TreeAut t = translation();
        std::vector<Vertex> edge{"", "1"};
        CHECK(m_tree(t, edge) == 2);
        TidyReport good = tidy_check(t, edge, 3, 8);
        CHECK(good.m == std::vector<std::uint64_t>{2, 4, 8});
        CHECK(good.multiplicative);
        CHECK(good.equals_scale == true);
        for (unsigned k = 1; k <= 3; ++k) {
            std::vector<Vertex> moved;
            for (const Vertex& v : edge) moved.push_back(apply_word(t.pow(k).inverse(), v));
            CHECK(placements(3, moved, edge) == good.m[k - 1]);
        }

        TidyReport off = tidy_check(t, "3", 0, 3);
        CHECK(off.m.front() > 2);
        CHECK_FALSE(off.multiplicative);
        CHECK(off.equals_scale == false);
        for (unsigned k = 1; k <= 3; ++k)
            CHECK(placements(3, {apply_word(t.pow(k).inverse(), "3")}, {"3"}) == off.m[k - 1]);
    }

    TEST_CASE("finite injections") {
        CHECK(injection_extends({{"", "1"}}));
        CHECK_FALSE(injection_extends({{"1", "1"}, {"2", "1"}}));
        CHECK(injection_extends({{"1", "2"}, {"12", "21"}}));
        // against the truncated table with the root fixed
        TruncatedAuts table = brute_force_aut(3, 2);
        std::map<Vertex, std::uint32_t> pos;
        for (std::uint32_t i = 0; i < table.vertices.size(); ++i) pos[table.vertices[i]] = i;
        const auto& vs = table.vertices;
        for (const Vertex& x1 : vs)
            for (const Vertex& y1 : vs)
                for (const Vertex& x2 : vs)
                    for (const Vertex& y2 : vs) {
                        bool exists = false;
                        for (const auto& m : table.maps)
                            if (m[pos[x1]] == pos[y1] && m[pos[x2]] == pos[y2]) {
                                exists = true;
                                break;
                            }
                        CHECK(injection_extends({{"", ""}, {x1, y1}, {x2, y2}}) == exists);
                    }
    }

    TEST_CASE("mini-language") {
        GeneratorSet gs = parse_generators(3, "gen g1 = w:\"1\"; sigma: \"\" -> (1 2), \"1\" -> id\n\n# comment\ngen g2 = w:\"2\"\n");
        REQUIRE(gs.size() == 2);
        CHECK(gs.at("g1")->w == "1");
        CHECK(gs.at("g1")->sigma.at("") == perm({2, 1, 3}));
        CHECK(gs.at("g1")->sigma.at("1").is_identity());
        CHECK(format_generator(*gs.at("g1")) == "gen g1 = w:\"1\"; sigma: \"\" -> (1 2), \"1\" -> id");
        GeneratorSet again = parse_generators(3, format_generator(*gs.at("g1")));
        CHECK(again.at("g1")->sigma == gs.at("g1")->sigma);

        TreeAut w = parse_word(3, gs, "g1*g2^-1");
        CHECK(w.to_string() == "g1*g2^-1");
        CHECK(parse_word(3, gs, "g1 * g1^-1").is_identity_word());
        CHECK(parse_word(3, gs, "id").is_identity_word());
        CHECK(parse_word(3, gs, "g2^3").letters().size() == 3);
        CHECK(apply_word(parse_word(3, gs, "g1*g2"), "") == apply_word(gs.at("g2") ? TreeAut::of(gs.at("g2")) : TreeAut(3), "1"));

        auto error_text = [](const std::function<void()>& f) {
            try {
                f();
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::ParseError);
                return std::string(e.what());
            }
            FAIL("no error");
            return std::string();
        };
        CHECK(error_text([] { parse_generators(3, "gen g = w:\"11\""); }).find("position 10") != std::string::npos);
        CHECK(error_text([] { parse_generators(3, "gen g = w:\"1\"; sigma: \"\" -> (1 4)"); }).find("position 31") != std::string::npos);
        CHECK(error_text([&] { parse_word(3, gs, "g1*g9"); }).find("position 3") != std::string::npos);
        CHECK(error_text([&] { parse_word(3, gs, "g1 g2"); }).find("trailing") != std::string::npos);
        error_text([] { parse_generators(3, "gen g = w:\"1\"\ngen g = w:\"2\""); });
        error_text([] { parse_generators(3, "gen g = v:\"1\""); });
        error_text([] { parse_generators(3, "gen g = w:\"1\"; sigma: \"\" -> (1 2), \"\" -> id"); });
    }
}
