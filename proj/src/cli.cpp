#include "tdlc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tdlc/clc_tree.hpp"
#include "tdlc/error.hpp"
#include "tdlc/graph_export.hpp"
#include "tdlc/iso_builder.hpp"
#include "tdlc/meet_groupoid.hpp"
#include "tdlc/padic.hpp"
#include "tdlc/qp_groupoids.hpp"
#include "tdlc/tree_aut.hpp"

namespace tdlc {
namespace {

struct Options {
    std::string op;
    std::vector<std::string> operands;

    unsigned p = 3;
    std::int64_t window_r = 2;
    unsigned prufer_m = 2;
    std::int64_t window_z = 0;
    std::string group = "qp";

    std::string lhs, rhs;
    std::size_t digits = 8;
    std::string tree;

    std::uint64_t seed = 0;
    std::int64_t twist_shift = 0;
    std::int64_t twist_unit = 1;

    unsigned degree = 3;
    unsigned radius = 2;
    std::vector<std::string> gens;
    std::string gens_file;
    std::string word = "id";
    std::string word2 = "id";
    std::string vertex;
    unsigned ball = 1;
    unsigned kmax = 3;
    unsigned depth = 1;

    std::string emit;
    std::string format = "text";

    bool window_given = false;  // --window-r or --prufer-m seen
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << text;
    if (!out) fail(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

void need_operands(const Options& o, std::size_t n) {
    if (o.operands.size() != n)
        fail(ErrorKind::ParseError, o.op + " expects " + std::to_string(n) + " operand(s), got " + std::to_string(o.operands.size()));
}

std::string quoted(const Vertex& v) { return "\"" + v + "\""; }

// ---- padic ----

int cmd_padic(const Options& o, std::ostream& out) {
    if (o.lhs.empty()) fail(ErrorKind::ParseError, "--lhs is required");
    PadicStream x = parse_stream_literal(o.lhs, o.p);
    NString r;
    if (o.op == "neg") {
        r = padic_neg(x, o.digits);
    } else {
        if (o.rhs.empty()) fail(ErrorKind::ParseError, "--rhs is required for " + o.op);
        PadicStream y = parse_stream_literal(o.rhs, o.p);
        if (o.op == "add") r = padic_add(x, y, o.digits);
        else if (o.op == "mul") r = padic_mul(x, y, o.digits);
        else r = PadicStream::sub(x, y).prefix(o.digits);
    }
    out << format_stream_prefix(r) << "\n";
    return 0;
}

// ---- codeset ----

int cmd_codeset(const Options& o, std::ostream& out) {
    TreePtr tree = make_tree(o.tree.empty() ? "qp:" + std::to_string(o.p) : o.tree);
    bool binary = o.op == "union" || o.op == "intersect" || o.op == "subset";
    need_operands(o, binary ? 2 : 1);
    CodeSet a = parse_codeset(tree, o.operands[0]);
    if (o.op == "minimal") {
        out << format_codeset(minimal_code(a)) << "\n";
    } else if (o.op == "index") {
        out << strong_index(minimal_code(a).strings()) << "\n";
    } else {
        CodeSet b = parse_codeset(tree, o.operands[1]);
        if (o.op == "union") out << format_codeset(cone_union(a, b)) << "\n";
        else if (o.op == "intersect") out << format_codeset(cone_intersect(a, b)) << "\n";
        else out << (cone_subset(a, b) ? "yes" : "no") << "\n";
    }
    return 0;
}

// ---- groupoid ----

WindowParams window_params(const Options& o) {
    WindowParams w{o.p, o.window_r, o.prufer_m, o.window_z};
    w.validate();
    return w;
}

CosetWindow make_window(const Options& o, const WindowParams& w) {
    if (o.group == "qp") return qp_window(w);
    return zqp_window(w);
}

Handle literal(const Options& o, const CosetWindow& w, const std::string& text) {
    if (o.group == "qp") return w.handle(parse_qp_coset(o.p, text));
    return w.handle(parse_zqp_coset(o.p, text));
}

std::string show(const CosetWindow& w, Handle h) { return h == kEmpty ? "empty" : w.describe(h); }

Handle subgroup_operand(const CosetWindow& w, Handle h) {
    if (!is_idempotent(w, h)) fail(ErrorKind::InvalidArgument, w.describe(h) + " is not a subgroup");
    return h;
}

int cmd_groupoid(const Options& o, std::ostream& out) {
    WindowParams wp = window_params(o);
    CosetWindow w = make_window(o, wp);
    auto arg = [&](std::size_t i) { return literal(o, w, o.operands.at(i)); };
    const std::string& op = o.op;

    if (op == "list") {
        need_operands(o, 0);
        for (Handle h : w.elements()) out << w.describe(h) << (w.boundary_flag(h) ? " boundary" : "") << "\n";
    } else if (op == "axioms") {
        need_operands(o, 0);
        AxiomReport r = axiom_check(w);
        out << r.summary() << "\n";
        return r.passed ? 0 : 1;
    } else if (op == "dump") {
        need_operands(o, 0);
        std::string text = dump_groupoid(w);
        if (!o.emit.empty()) {
            write_file(o.emit, text);
            out << "wrote " << o.emit << " elements=" << w.size() << "\n";
        } else {
            out << text;
        }
    } else if (op == "prod") {
        need_operands(o, 2);
        Handle a = arg(0), b = arg(1);
        ProdResult r = w.prod(a, b);
        if (r.status == ProdStatus::Undefined)
            fail(ErrorKind::Undefined, w.describe(a) + " · " + w.describe(b) + ": target of the left factor differs from source of the right");
        if (r.status == ProdStatus::Overflow) fail(ErrorKind::WindowOverflow, w.describe(a) + " · " + w.describe(b) + " leaves the window");
        out << w.describe(r.value) << "\n";
    } else if (op == "inv" || op == "source" || op == "target" || op == "measure" || op == "modular" || op == "scale") {
        need_operands(o, 1);
        Handle a = arg(0);
        if (op == "inv") out << w.describe(w.inv(a)) << "\n";
        else if (op == "source") out << w.describe(source(w, a)) << "\n";
        else if (op == "target") out << w.describe(target(w, a)) << "\n";
        else if (op == "measure") out << measure(o.p, w.coset(a)) << "\n";
        else if (op == "modular") out << modular(o.p, w.coset(a)) << "\n";
        else out << scale(wp, w.coset(a)) << "\n";
    } else if (op == "meet" || op == "subset" || op == "index") {
        need_operands(o, 2);
        Handle a = arg(0), b = arg(1);
        if (op == "meet") out << show(w, w.meet(a, b)) << "\n";
        else if (op == "subset") out << (is_subset(w, a, b) ? "yes" : "no") << "\n";
        else out << w.index(subgroup_operand(w, a), subgroup_operand(w, b)) << "\n";
    } else if (op == "suborbit") {
        need_operands(o, 3);
        Handle u = subgroup_operand(w, arg(0));
        for (Handle h : suborbit(w, u, arg(1), arg(2))) out << w.describe(h) << "\n";
    } else if (op == "extend") {
        if (o.operands.empty() || o.operands.size() % 2 != 0) fail(ErrorKind::ParseError, "extend expects pairs A1 B1 A2 B2 ...");
        std::vector<std::pair<Handle, Handle>> pairs;
        for (std::size_t i = 0; i < o.operands.size(); i += 2) pairs.emplace_back(arg(i), arg(i + 1));
        ExtensionResult r = extendable_injection(w, pairs);
        if (r.witness) out << "extends via " << w.describe(*r.witness) << "\n";
        else out << "does not extend: " << r.reason << "\n";
    }
    return 0;
}

// ---- iso ----

int cmd_iso(const Options& o, std::ostream& out) {
    need_operands(o, 0);
    WindowParams wp = window_params(o);
    CosetWindow w = make_window(o, wp);
    Scramble s = scramble(w, o.seed, Twist{o.twist_shift, o.twist_unit});
    IsoTable table = o.group == "qp" ? build_iso_qp(s.oracle, o.p) : build_iso_zqp(s.oracle, o.p);
    IsoReport report = verify_iso(table, w, s.oracle);
    out << report.summary() << "\n";
    if (!o.emit.empty()) {
        std::ostringstream t;
        t << "iso-table v1 p=" << table.p << " group=" << o.group << " seed=" << o.seed << "\n";
        for (const auto& [c, h] : table.map) t << format_coset(o.p, c) << " -> " << h << "\n";
        write_file(o.emit, t.str());
        out << "wrote " << o.emit << " entries=" << table.map.size() << "\n";
    }
    return report.passed ? 0 : 1;
}

// ---- tree ----

GeneratorSet load_generators(const Options& o) {
    std::string text;
    if (!o.gens_file.empty()) text = read_file(o.gens_file);
    for (const auto& g : o.gens) text += (text.empty() || text.back() == '\n' ? "" : "\n") + g + "\n";
    return parse_generators(o.degree, text);
}

void print_vertices(std::ostream& out, const std::vector<Vertex>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i) out << (i ? " " : "") << quoted(vs[i]);
}

int cmd_tree(const Options& o, std::ostream& out) {
    need_operands(o, 0);
    GeneratorSet gens = load_generators(o);
    const std::string& op = o.op;
    if (op == "gens") {
        for (const auto& [name, g] : gens) out << format_generator(*g) << "\n";
        return 0;
    }
    TreeAut a = parse_word(o.degree, gens, o.word);
    if (!o.vertex.empty() && !is_vertex(o.degree, o.vertex))
        fail(ErrorKind::InvalidArgument, "'" + o.vertex + "' is not a vertex of the " + std::to_string(o.degree) + "-regular tree");

    if (op == "apply") {
        out << quoted(apply_word(a, o.vertex)) << "\n";
    } else if (op == "portrait") {
        out << portrait(a, o.vertex).cycles() << "\n";
    } else if (op == "classify") {
        Classification c = classify(a, o.radius);
        out << aut_type_name(c.type);
        if (c.type == AutType::Elliptic) out << " fixed=" << c.fixed.size();
        if (c.type == AutType::Inversion) out << " edge=" << quoted(c.edge.first) << "-" << quoted(c.edge.second);
        if (c.type == AutType::Hyperbolic) {
            out << " length=" << c.length << " axis=";
            print_vertices(out, c.axis);
        }
        out << "\n";
    } else if (op == "scale") {
        auto s = scale_treeaut(a, o.radius);
        if (s) out << *s << "\n";
        else out << "inconclusive at radius " << o.radius << "\n";
    } else if (op == "m") {
        out << m_tree(a, o.vertex, o.ball) << "\n";
    } else if (op == "tidy") {
        TidyReport r = tidy_check(a, o.vertex, o.ball, o.kmax);
        out << "m=";
        for (std::size_t k = 0; k < r.m.size(); ++k) out << (k ? "," : "") << r.m[k];
        out << " multiplicative=" << (r.multiplicative ? "yes" : "no") << " equals_scale="
            << (r.equals_scale ? (*r.equals_scale ? "yes" : "no") : "inconclusive") << "\n";
    } else if (op == "agree") {
        TreeAut b = parse_word(o.degree, gens, o.word2);
        print_vertices(out, agree_set(a, b, o.radius));
        out << "\n";
    } else if (op == "conjugate") {
        TreeAut b = parse_word(o.degree, gens, o.word2);
        ConjugacyResult r = conjugate_search(a, b, o.radius, o.depth);
        if (r.witness) out << "conjugate via " << format_generator(*r.witness) << "\n";
        else if (!r.certificate.empty()) out << "not conjugate: " << r.certificate << "\n";
        else out << "no conjugator found among " << r.candidates << " candidates\n";
    }
    return 0;
}

// ---- graph / render ----

int emit_or_print(const Options& o, const LabeledGraph& g, std::ostream& out) {
    if (!o.emit.empty()) {
        write_file(o.emit, to_structured(g));
        out << "wrote " << o.emit << " vertices=" << g.vertices.size() << " edges=" << g.edges.size()
            << " partial=" << (g.partial ? "yes" : "no") << "\n";
    } else {
        out << (o.format == "dot" ? to_dot(g) : to_structured(g));
    }
    return 0;
}

int cmd_graph(Options o, std::ostream& out) {
    if (o.op == "ball") {
        need_operands(o, 0);
        LabeledGraph g = ball_graph(o.degree, o.radius);
        if (o.word != "id" || !o.gens.empty() || !o.gens_file.empty()) {
            GeneratorSet gens = load_generators(o);
            g = action_overlay(g, parse_word(o.degree, gens, o.word), o.word);
        }
        return emit_or_print(o, g, out);
    }
    // Cayley-Abels: operands are U followed by the generating cosets; the
    // default is U_0 with {g, g^-1} in the affine group.
    if (!o.window_given) {
        o.window_r = static_cast<std::int64_t>(o.radius) + 1;
        o.prufer_m = o.radius + 1;
    }
    WindowParams wp = window_params(o);
    CosetWindow w = make_window(o, wp);
    Handle u;
    std::vector<Handle> gens;
    if (o.operands.empty()) {
        if (o.group != "zqp") fail(ErrorKind::InvalidArgument, "default generators need --group zqp; pass U and generators explicitly");
        u = w.handle(ZQpCoset{0, 0, {}});
        gens = {w.handle(ZQpCoset{1, 0, {}}), w.handle(ZQpCoset{-1, 0, {}})};
    } else {
        if (o.operands.size() < 2) fail(ErrorKind::ParseError, "ca expects a subgroup followed by at least one generator");
        u = subgroup_operand(w, literal(o, w, o.operands[0]));
        for (std::size_t i = 1; i < o.operands.size(); ++i) gens.push_back(literal(o, w, o.operands[i]));
    }
    CayleyAbels ca = cayley_abels(w, u, gens, o.radius);
    return emit_or_print(o, ca.graph, out);
}

int cmd_render(const Options& o, std::ostream& out) {
    need_operands(o, 1);
    LabeledGraph g = load_structured(read_file(o.operands[0]));
    out << (o.format == "dot" ? to_dot(g) : to_structured(g));
    return 0;
}

// ---- flag wiring ----

void add_window_flags(CLI::App* sub, Options& o) {
    sub->add_option("--group", o.group, "qp or zqp")->check(CLI::IsMember({"qp", "zqp"}));
    sub->add_option("--p", o.p, "prime")->check(CLI::Range(2u, 97u));
    sub->add_option_function<std::int64_t>("--window-r", [&o](const std::int64_t& v) { o.window_r = v, o.window_given = true; },
                                           "subgroup levels -R..R");
    sub->add_option_function<unsigned>("--prufer-m", [&o](const unsigned& v) { o.prufer_m = v, o.window_given = true; },
                                       "Prüfer coordinates of order up to p^M");
    sub->add_option("--window-z", o.window_z, "bound on |z|; 0 selects 2R");
}

void add_tree_flags(CLI::App* sub, Options& o) {
    sub->add_option("--degree", o.degree, "tree degree")->check(CLI::Range(3u, 9u));
    sub->add_option("--gen", o.gens, "generator definition, repeatable");
    sub->add_option("--gens-file", o.gens_file, "file of generator definitions");
    sub->add_option("--word", o.word, "element as a word in the generators");
}

void add_output_flags(CLI::App* sub, Options& o) {
    sub->add_option("--emit", o.emit, "write structured output to a file");
    sub->add_option("--format", o.format, "dot or text")->check(CLI::IsMember({"dot", "text"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Computable t.d.l.c. groups: p-adic streams, meet groupoids, tree automorphisms", "tdlc_cli"};
    app.require_subcommand(1, 1);

    auto* padic = app.add_subcommand("padic", "prefix arithmetic on p-adic stream literals");
    padic->add_option("op", o.op)->required()->check(CLI::IsMember({"add", "sub", "mul", "neg"}));
    padic->add_option("--p", o.p, "prime")->check(CLI::Range(2u, 97u));
    padic->add_option("--lhs", o.lhs, "stream literal head:digits or p:head:digits");
    padic->add_option("--rhs", o.rhs, "second stream literal");
    padic->add_option("--digits", o.digits, "prefix length");

    auto* codeset = app.add_subcommand("codeset", "cone sets on a tree");
    codeset->add_option("op", o.op)->required()->check(CLI::IsMember({"union", "intersect", "subset", "minimal", "index"}));
    codeset->add_option("operands", o.operands, "code sets such as {[0,1];[2]}");
    codeset->add_option("--tree", o.tree, "tree spec such as qp:3, td:3, sinf:4");
    codeset->add_option("--p", o.p, "prime for the default qp tree")->check(CLI::Range(2u, 97u));

    auto* groupoid = app.add_subcommand("groupoid", "coset windows of Q_p and Z⋉Q_p");
    groupoid->add_option("op", o.op)->required()->check(CLI::IsMember(
        {"list", "axioms", "dump", "prod", "inv", "source", "target", "meet", "subset", "index", "measure", "modular", "scale",
         "suborbit", "extend"}));
    groupoid->add_option("operands", o.operands, "coset literals such as D[r=0,a=1/3] or E[z=1,r=0,a=0]");
    add_window_flags(groupoid, o);
    groupoid->add_option("--emit", o.emit, "write the dump to a file");

    auto* iso = app.add_subcommand("iso", "rebuild an isomorphism from a scrambled window");
    iso->add_option("op", o.op)->required()->check(CLI::IsMember({"rebuild"}));
    iso->add_option("operands", o.operands);
    add_window_flags(iso, o);
    iso->add_option("--seed", o.seed, "scramble seed");
    iso->add_option("--twist-shift", o.twist_shift, "level shift applied by the scramble");
    iso->add_option("--twist-unit", o.twist_unit, "unit multiplier applied by the scramble");
    iso->add_option("--emit", o.emit, "write the rebuilt table to a file");

    auto* tree = app.add_subcommand("tree", "automorphisms of the d-regular tree");
    tree->add_option("op", o.op)->required()->check(
        CLI::IsMember({"gens", "apply", "portrait", "classify", "scale", "m", "tidy", "agree", "conjugate"}));
    tree->add_option("operands", o.operands);
    add_tree_flags(tree, o);
    tree->add_option("--word2", o.word2, "second element for agree and conjugate");
    tree->add_option("--vertex", o.vertex, "vertex as a colour word; empty for the root");
    tree->add_option("--radius", o.radius, "search radius");
    tree->add_option("--ball", o.ball, "radius of the ball around --vertex for m and tidy");
    tree->add_option("--kmax", o.kmax, "largest power for tidy");
    tree->add_option("--depth", o.depth, "conjugator support depth");

    auto* graph = app.add_subcommand("graph", "Cayley-Abels graphs and tree balls");
    graph->add_option("op", o.op)->required()->check(CLI::IsMember({"ca", "ball"}));
    graph->add_option("operands", o.operands, "for ca: subgroup then generating cosets");
    add_window_flags(graph, o);
    add_tree_flags(graph, o);
    graph->add_option("--radius", o.radius, "graph radius");
    add_output_flags(graph, o);

    auto* render = app.add_subcommand("render", "render a structured graph dump");
    render->add_option("operands", o.operands, "dump file")->required();
    render->add_option("--format", o.format, "dot or text")->check(CLI::IsMember({"dot", "text"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: ParseError: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*padic) return cmd_padic(o, out);
        if (*codeset) return cmd_codeset(o, out);
        if (*groupoid) return cmd_groupoid(o, out);
        if (*iso) return cmd_iso(o, out);
        if (*tree) return cmd_tree(o, out);
        if (*graph) return cmd_graph(o, out);
        return cmd_render(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::ParseError ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace tdlc
