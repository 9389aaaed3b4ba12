#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tdlc/cli.hpp"
#include "tdlc/error.hpp"
#include "tdlc/graph_export.hpp"
#include "tdlc/iso_builder.hpp"
#include "tdlc/meet_groupoid.hpp"
#include "tdlc/padic.hpp"
#include "tdlc/qp_groupoids.hpp"
#include "tdlc/tree_aut.hpp"

namespace py = pybind11;
using namespace tdlc;

namespace {

py::object to_int(const BigInt& n) {
    std::string s = n.str();
    return py::reinterpret_steal<py::object>(PyLong_FromString(s.c_str(), nullptr, 10));
}

py::object to_fraction(const Rational& q) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_int(boost::multiprecision::numerator(q)), to_int(boost::multiprecision::denominator(q)));
}

struct Window {
    WindowParams params;
    bool abelian;
    CosetWindow w;

    Window(bool abelian_, unsigned p, std::int64_t R, unsigned M, std::int64_t Z)
        : params{p, R, M, Z}, abelian(abelian_), w((params.validate(), abelian_ ? qp_window(params) : zqp_window(params))) {}

    Handle handle(const std::string& literal) const {
        return abelian ? w.handle(parse_qp_coset(params.p, literal)) : w.handle(parse_zqp_coset(params.p, literal));
    }
    Handle prod(Handle a, Handle b) const {
        ProdResult r = w.prod(a, b);
        if (r.status == ProdStatus::Undefined) throw Error(ErrorKind::Undefined, w.describe(a) + " · " + w.describe(b));
        if (r.status == ProdStatus::Overflow) throw Error(ErrorKind::WindowOverflow, w.describe(a) + " · " + w.describe(b));
        return r.value;
    }
};

struct TreeGroup {
    unsigned d;
    GeneratorSet gens;
};

py::dict classification(const Classification& c) {
    py::dict out;
    out["type"] = aut_type_name(c.type);
    out["fixed"] = c.fixed;
    out["edge"] = c.type == AutType::Inversion ? py::cast(c.edge) : py::none();
    out["length"] = c.length;
    out["axis"] = c.axis;
    return out;
}

}  // namespace

PYBIND11_MODULE(tdlc, m) {
    m.doc() = "Exact computations with p-adic streams, coset meet groupoids of Q_p and Z⋉Q_p, and tree automorphisms";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    // ---- p-adic streams ----
    m.def(
        "padic_add", [](unsigned p, const std::string& lhs, const std::string& rhs, std::size_t digits) {
            return format_stream_prefix(padic_add(parse_stream_literal(lhs, p), parse_stream_literal(rhs, p), digits));
        },
        py::arg("p"), py::arg("lhs"), py::arg("rhs"), py::arg("digits"));
    m.def(
        "padic_mul", [](unsigned p, const std::string& lhs, const std::string& rhs, std::size_t digits) {
            return format_stream_prefix(padic_mul(parse_stream_literal(lhs, p), parse_stream_literal(rhs, p), digits));
        },
        py::arg("p"), py::arg("lhs"), py::arg("rhs"), py::arg("digits"));
    m.def(
        "padic_neg", [](unsigned p, const std::string& x, std::size_t digits) {
            return format_stream_prefix(padic_neg(parse_stream_literal(x, p), digits));
        },
        py::arg("p"), py::arg("x"), py::arg("digits"));

    // ---- coset windows ----
    py::class_<Window>(m, "Window")
        .def_static(
            "qp", [](unsigned p, std::int64_t R, unsigned M) { return Window(true, p, R, M, 0); }, py::arg("p"), py::arg("R") = 2,
            py::arg("M") = 2)
        .def_static(
            "zqp", [](unsigned p, std::int64_t R, unsigned M, std::int64_t Z) { return Window(false, p, R, M, Z); }, py::arg("p"),
            py::arg("R") = 2, py::arg("M") = 2, py::arg("Z") = 0)
        .def_property_readonly("p", [](const Window& w) { return w.params.p; })
        .def_property_readonly("abelian", [](const Window& w) { return w.abelian; })
        .def("__len__", [](const Window& w) { return w.w.size(); })
        .def("elements", [](const Window& w) { return w.w.elements(); })
        .def("handle", &Window::handle, py::arg("literal"))
        .def("describe", [](const Window& w, Handle a) { return w.w.describe(a); })
        .def("prod", &Window::prod)
        .def("inv", [](const Window& w, Handle a) { return w.w.inv(a); })
        .def("meet", [](const Window& w, Handle a, Handle b) { return w.w.meet(a, b); }, "0 is the empty set")
        .def("index", [](const Window& w, Handle u, Handle v) { return w.w.index(u, v); })
        .def("is_subset", [](const Window& w, Handle a, Handle b) { return is_subset(w.w, a, b); })
        .def("is_subgroup", [](const Window& w, Handle a) { return is_idempotent(w.w, a); })
        .def("source", [](const Window& w, Handle a) { return source(w.w, a); })
        .def("target", [](const Window& w, Handle a) { return target(w.w, a); })
        .def("measure", [](const Window& w, Handle a) { return to_fraction(measure(w.params.p, w.w.coset(a))); })
        .def("modular", [](const Window& w, Handle a) { return to_fraction(modular(w.params.p, w.w.coset(a))); })
        .def("scale", [](const Window& w, Handle a) { return scale(w.params, w.w.coset(a)); })
        .def("suborbit", [](const Window& w, Handle u, Handle l, Handle f) { return suborbit(w.w, u, l, f); })
        .def("extend",
             [](const Window& w, const std::vector<std::pair<Handle, Handle>>& pairs) -> std::optional<Handle> {
                 return extendable_injection(w.w, pairs).witness;
             })
        .def("axiom_check",
             [](const Window& w) {
                 AxiomReport r = axiom_check(w.w);
                 return py::make_tuple(r.passed, r.summary());
             })
        .def("dump", [](const Window& w) { return dump_groupoid(w.w); });

    m.def(
        "iso_rebuild",
        [](const std::string& group, unsigned p, std::uint64_t seed, std::int64_t shift, std::int64_t unit, std::int64_t R, unsigned M) {
            if (group != "qp" && group != "zqp") throw Error(ErrorKind::InvalidArgument, "group must be qp or zqp");
            Window w(group == "qp", p, R, M, 0);
            Scramble s = scramble(w.w, seed, Twist{shift, unit});
            IsoTable table = w.abelian ? build_iso_qp(s.oracle, p) : build_iso_zqp(s.oracle, p);
            IsoReport r = verify_iso(table, w.w, s.oracle);
            py::dict out;
            out["passed"] = r.passed;
            out["entries"] = r.entries;
            out["checks"] = r.checks;
            out["summary"] = r.summary();
            return out;
        },
        py::arg("group"), py::arg("p"), py::arg("seed"), py::arg("twist_shift") = 0, py::arg("twist_unit") = 1, py::arg("R") = 2,
        py::arg("M") = 2);

    // ---- tree automorphisms ----
    py::class_<TreeAut>(m, "TreeAut")
        .def("__mul__", [](const TreeAut& a, const TreeAut& b) { return a * b; })
        .def("inverse", &TreeAut::inverse)
        .def("pow", &TreeAut::pow)
        .def("__str__", &TreeAut::to_string)
        .def("apply", [](const TreeAut& a, const Vertex& x) { return apply_word(a, x); })
        .def("portrait", [](const TreeAut& a, const Vertex& x) { return portrait(a, x).cycles(); })
        .def("classify", [](const TreeAut& a, unsigned radius) { return classification(classify(a, radius)); })
        .def("scale", [](const TreeAut& a, unsigned radius) { return scale_treeaut(a, radius); })
        .def("m", [](const TreeAut& a, const Vertex& base, unsigned n) { return m_tree(a, base, n); })
        .def("tidy", [](const TreeAut& a, const Vertex& base, unsigned n, unsigned kmax) {
            TidyReport r = tidy_check(a, base, n, kmax);
            py::dict out;
            out["m"] = r.m;
            out["multiplicative"] = r.multiplicative;
            out["equals_scale"] = r.equals_scale;
            return out;
        });

    py::class_<TreeGroup>(m, "TreeGroup")
        .def(py::init([](unsigned d, const std::string& text) { return TreeGroup{d, parse_generators(d, text)}; }), py::arg("degree"),
             py::arg("generators"))
        .def("word", [](const TreeGroup& g, const std::string& text) { return parse_word(g.d, g.gens, text); })
        .def("generators", [](const TreeGroup& g) {
            std::vector<std::string> out;
            for (const auto& [name, gen] : g.gens) out.push_back(format_generator(*gen));
            return out;
        });

    m.def("ball_stab_index", &ball_stab_index, py::arg("d"), py::arg("fixed"), py::arg("moved"));

    // ---- graphs ----
    py::class_<LabeledGraph>(m, "Graph")
        .def_static("load", &load_structured)
        .def_property_readonly("partial", [](const LabeledGraph& g) { return g.partial; })
        .def_property_readonly("vertex_count", [](const LabeledGraph& g) { return g.vertices.size(); })
        .def_property_readonly("edge_count", [](const LabeledGraph& g) { return g.edges.size(); })
        .def("to_dot", [](const LabeledGraph& g) { return to_dot(g); })
        .def("to_structured", &to_structured)
        .def("__eq__", [](const LabeledGraph& a, const LabeledGraph& b) { return a == b; });

    m.def("ball_graph", &ball_graph, py::arg("d"), py::arg("radius"));
    m.def("action_overlay", &action_overlay, py::arg("ball"), py::arg("a"), py::arg("label") = "a");
    m.def(
        "cayley_abels",
        [](const Window& w, Handle u, const std::vector<Handle>& gens, unsigned radius) { return cayley_abels(w.w, u, gens, radius).graph; },
        py::arg("window"), py::arg("subgroup"), py::arg("generators"), py::arg("radius"));

    // ---- command line ----
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
