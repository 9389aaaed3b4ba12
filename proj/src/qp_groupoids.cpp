#include "tdlc/qp_groupoids.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

namespace {

std::uint64_t ipow(unsigned p, unsigned m) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (out > (std::uint64_t{1} << 62) / p) throw Error(ErrorKind::InvalidArgument, "Prüfer denominator exceeds 64 bits");
        out *= p;
    }
    return out;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

}  // namespace

// ---- Prüfer group ----

PruferElement prufer_make(unsigned p, std::uint64_t k, unsigned m) {
    std::uint64_t n = ipow(p, m);
    k %= n;
    if (k == 0) return {};
    while (m > 0 && k % p == 0) {
        k /= p;
        --m;
    }
    return {k, m};
}

std::uint64_t prufer_order(unsigned p, const PruferElement& a) { return ipow(p, a.m); }

PruferElement prufer_add(unsigned p, const PruferElement& a, const PruferElement& b) {
    unsigned m = std::max(a.m, b.m);
    std::uint64_t n = ipow(p, m);
    std::uint64_t ka = a.k * ipow(p, m - a.m) % n;
    std::uint64_t kb = b.k * ipow(p, m - b.m) % n;
    return prufer_make(p, (ka + kb) % n, m);
}

PruferElement prufer_neg(unsigned p, const PruferElement& a) {
    if (a.is_zero()) return a;
    return {ipow(p, a.m) - a.k, a.m};
}

PruferElement prufer_mul_p_power(unsigned p, const PruferElement& a, unsigned j) {
    if (j >= a.m) return {};
    return prufer_make(p, a.k, a.m - j);
}

PruferElement prufer_mul(unsigned p, const PruferElement& a, std::int64_t u) {
    if (a.is_zero()) return a;
    auto n = static_cast<std::int64_t>(ipow(p, a.m));
    auto k = static_cast<unsigned __int128>(a.k) * static_cast<unsigned __int128>(floor_mod(u, n));
    return prufer_make(p, static_cast<std::uint64_t>(k % static_cast<unsigned __int128>(n)), a.m);
}

Rational prufer_value(unsigned p, const PruferElement& a) { return Rational(BigInt(a.k), BigInt(ipow(p, a.m))); }

PruferElement prufer_from_rational(unsigned p, const Rational& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    unsigned m = 0;
    BigInt d = den;
    while (d % p == 0) {
        d /= p;
        ++m;
    }
    if (d != 1) throw Error(ErrorKind::InvalidArgument, "denominator is not a power of " + std::to_string(p));
    BigInt n = BigInt(ipow(p, m));
    BigInt k = num % n;
    if (k < 0) k += n;
    return prufer_make(p, static_cast<std::uint64_t>(k), m);
}

std::string format_prufer(unsigned p, const PruferElement& a) {
    if (a.is_zero()) return "0";
    return std::to_string(a.k) + "/" + std::to_string(ipow(p, a.m));
}

PruferElement prufer_project(std::int64_t r, const PadicExact& x) {
    unsigned p = x.prime();
    std::int64_t t = x.shift() + r;
    if (x.is_zero() || t <= 0) return {};
    BigInt n = BigInt(ipow(p, static_cast<unsigned>(t)));
    BigInt k = x.numerator() % n;
    if (k < 0) k += n;
    return prufer_make(p, static_cast<std::uint64_t>(k), static_cast<unsigned>(t));
}

// ---- coordinate rules ----

QpCoset d_prod(unsigned p, const QpCoset& a, const QpCoset& b) {
    if (a.r != b.r) throw Error(ErrorKind::Undefined, format_coset(p, a) + "·" + format_coset(p, b));
    return {a.r, prufer_add(p, a.a, b.a)};
}

QpCoset d_inv(unsigned p, const QpCoset& a) { return {a.r, prufer_neg(p, a.a)}; }

bool d_subset(unsigned p, const QpCoset& a, const QpCoset& b) {
    return a.r >= b.r && prufer_mul_p_power(p, a.a, static_cast<unsigned>(a.r - b.r)) == b.a;
}

std::optional<QpCoset> d_meet(unsigned p, const QpCoset& a, const QpCoset& b) {
    if (d_subset(p, a, b)) return a;
    if (d_subset(p, b, a)) return b;
    return std::nullopt;
}

ZQpCoset e_prod(unsigned p, const ZQpCoset& a, const ZQpCoset& b) {
    if (a.r != b.r - b.z) throw Error(ErrorKind::Undefined, format_coset(p, a) + "·" + format_coset(p, b));
    return {a.z + b.z, b.r, prufer_add(p, a.a, b.a)};
}

ZQpCoset e_inv(unsigned p, const ZQpCoset& a) { return {-a.z, a.r - a.z, prufer_neg(p, a.a)}; }

bool e_subset(unsigned p, const ZQpCoset& a, const ZQpCoset& b) {
    return a.z == b.z && d_subset(p, {a.r, a.a}, {b.r, b.a});
}

std::optional<ZQpCoset> e_meet(unsigned p, const ZQpCoset& a, const ZQpCoset& b) {
    if (e_subset(p, a, b)) return a;
    if (e_subset(p, b, a)) return b;
    return std::nullopt;
}

std::uint64_t subgroup_index(unsigned p, std::int64_t r, std::int64_t s) {
    return s > r ? ipow(p, static_cast<unsigned>(s - r)) : 1;
}

namespace {

Rational p_power(unsigned p, std::int64_t e) {
    BigInt n = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e < 0 ? -e : e));
    return e >= 0 ? Rational(n) : Rational(BigInt(1), n);
}

}  // namespace

Rational measure(unsigned p, const ZQpCoset& a) { return p_power(p, -a.r); }

Rational modular(unsigned p, const ZQpCoset& a) { return p_power(p, -a.z); }

void WindowParams::validate() const {
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "p must be at least 2");
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
    if (R < 1 || M < 1) throw Error(ErrorKind::InvalidArgument, "window radius and Prüfer depth must be at least 1");
    if (Z < 0) throw Error(ErrorKind::InvalidArgument, "negative z bound");
    ipow(p, M);
}

bool in_window(const WindowParams& w, const QpCoset& a) { return std::abs(a.r) <= w.R && a.a.m <= w.M; }

bool in_window(const WindowParams& w, const ZQpCoset& a) {
    return std::abs(a.z) <= w.z_bound() && std::abs(a.r) <= w.R && std::abs(a.r - a.z) <= w.R && a.a.m <= w.M;
}

namespace {

template <class C>
const C& window_checked(const WindowParams& w, const C& c, unsigned p) {
    if (!in_window(w, c)) throw Error(ErrorKind::WindowOverflow, format_coset(p, c) + " lies outside the window");
    return c;
}

}  // namespace

QpCoset shift(const WindowParams& w, const QpCoset& a) {
    QpCoset out{a.r + 1, a.a};
    return window_checked(w, out, w.p);
}

// ---- exact elements and actions ----

namespace {

PadicExact times_p_power(const PadicExact& q, std::int64_t e) { return PadicExact(q.prime(), q.numerator(), q.shift() - e); }

ZQpCoset act_left_raw(unsigned p, const ZQpElement& g, const ZQpCoset& a) {
    return {g.z + a.z, a.r, prufer_add(p, a.a, prufer_project(a.r, times_p_power(g.q, a.z)))};
}

}  // namespace

ZQpElement element_mul(const ZQpElement& x, const ZQpElement& y) {
    return {x.z + y.z, times_p_power(x.q, y.z) + y.q};
}

ZQpElement element_inv(const ZQpElement& x) { return {-x.z, -times_p_power(x.q, -x.z)}; }

QpCoset act_left(const WindowParams& w, const PadicExact& g, const QpCoset& a) {
    QpCoset out{a.r, prufer_add(w.p, a.a, prufer_project(a.r, g))};
    return window_checked(w, out, w.p);
}

ZQpCoset act_left(const WindowParams& w, const ZQpElement& g, const ZQpCoset& a) {
    return window_checked(w, act_left_raw(w.p, g, a), w.p);
}

ZQpCoset act_right(const WindowParams& w, const ZQpElement& g, const ZQpCoset& a) {
    ZQpCoset out = e_inv(w.p, act_left_raw(w.p, element_inv(g), e_inv(w.p, a)));
    return window_checked(w, out, w.p);
}

// ---- scale ----

// <−z,0><0,x><z,0> = <0, p^z x>, so conjugating by g^z moves U_s to U_{s+z}.
std::int64_t conj_subgroup(const WindowParams& w, const ZQpCoset& a, std::int64_t s) {
    std::int64_t t = s + a.z;
    if (std::abs(s) > w.R || std::abs(t) > w.R)
        throw Error(ErrorKind::WindowOverflow, "conjugate of U_" + std::to_string(s) + " leaves the window");
    return t;
}

std::uint64_t m_value(const WindowParams& w, const ZQpCoset& a, std::int64_t s) {
    return subgroup_index(w.p, conj_subgroup(w, a, s), s);
}

std::uint64_t scale_upper_approx(const WindowParams& w, const ZQpCoset& a, std::size_t t) {
    std::optional<std::uint64_t> best;
    std::size_t seen = 0;
    for (std::int64_t s = -w.R; s <= w.R && seen < t; ++s) {
        if (std::abs(s + a.z) > w.R) continue;
        ++seen;
        std::uint64_t m = m_value(w, a, s);
        best = best ? std::min(*best, m) : m;
    }
    if (!best) throw Error(ErrorKind::WindowOverflow, "no window subgroup has its conjugate in the window");
    return *best;
}

// Every compact open subgroup of Z⋉Q_p is some U_s, so the window minimum is the scale
// once it contains one U_s with U_{s+z} also inside.
std::uint64_t scale(const WindowParams& w, const ZQpCoset& a) {
    return scale_upper_approx(w, a, static_cast<std::size_t>(2 * w.R + 1));
}

// ---- literals ----

std::string format_coset(unsigned p, const QpCoset& a) {
    return "D[r=" + std::to_string(a.r) + ",a=" + format_prufer(p, a.a) + "]";
}

std::string format_coset(unsigned p, const ZQpCoset& a) {
    return "E[z=" + std::to_string(a.z) + ",r=" + std::to_string(a.r) + ",a=" + format_prufer(p, a.a) + "]";
}

namespace {

struct Literal {
    char kind;
    std::map<std::string, std::string> fields;
};

Literal parse_literal(const std::string& text) {
    auto fail = [&](std::size_t pos, const std::string& what) -> Literal {
        throw Error(ErrorKind::ParseError, "coset literal '" + text + "' at offset " + std::to_string(pos) + ": " + what);
    };
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (i >= text.size() || (text[i] != 'D' && text[i] != 'E')) return fail(i, "expected D or E");
    Literal lit{text[i++], {}};
    skip();
    if (i >= text.size() || text[i] != '[') return fail(i, "expected '['");
    ++i;
    while (true) {
        skip();
        std::size_t start = i;
        while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
        std::string key = text.substr(start, i - start);
        if (key.empty()) return fail(i, "expected field name");
        skip();
        if (i >= text.size() || text[i] != '=') return fail(i, "expected '='");
        ++i;
        skip();
        start = i;
        while (i < text.size() && text[i] != ',' && text[i] != ']' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string value = text.substr(start, i - start);
        if (value.empty()) return fail(i, "empty value for " + key);
        if (!lit.fields.emplace(key, value).second) return fail(start, "duplicate field " + key);
        skip();
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < text.size() && text[i] == ']') {
            ++i;
            break;
        }
        return fail(i, "expected ',' or ']'");
    }
    skip();
    if (i != text.size()) return fail(i, "trailing characters");
    return lit;
}

std::int64_t parse_int(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) throw Error(ErrorKind::ParseError, "field " + field + ": bad integer '" + text + "'");
    return v;
}

PruferElement parse_fraction(unsigned p, const std::string& text) {
    auto slash = text.find('/');
    std::int64_t num = parse_int(text.substr(0, slash), "a");
    std::int64_t den = slash == std::string::npos ? 1 : parse_int(text.substr(slash + 1), "a");
    if (den <= 0) throw Error(ErrorKind::ParseError, "field a: denominator must be positive");
    try {
        return prufer_from_rational(p, Rational(BigInt(num), BigInt(den)));
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, "field a: " + e.detail());
    }
}

std::int64_t take_int(Literal& lit, const std::string& key, bool required) {
    auto it = lit.fields.find(key);
    if (it == lit.fields.end()) {
        if (required) throw Error(ErrorKind::ParseError, "missing field " + key);
        return 0;
    }
    std::int64_t v = parse_int(it->second, key);
    lit.fields.erase(it);
    return v;
}

PruferElement take_fraction(unsigned p, Literal& lit) {
    auto it = lit.fields.find("a");
    if (it == lit.fields.end()) throw Error(ErrorKind::ParseError, "missing field a");
    PruferElement a = parse_fraction(p, it->second);
    lit.fields.erase(it);
    return a;
}

void no_extra(const Literal& lit) {
    if (!lit.fields.empty()) throw Error(ErrorKind::ParseError, "unknown field " + lit.fields.begin()->first);
}

}  // namespace

QpCoset parse_qp_coset(unsigned p, const std::string& text) {
    Literal lit = parse_literal(text);
    if (lit.kind != 'D') throw Error(ErrorKind::ParseError, "expected a D[...] literal, got '" + text + "'");
    QpCoset out{take_int(lit, "r", true), take_fraction(p, lit)};
    no_extra(lit);
    return out;
}

ZQpCoset parse_zqp_coset(unsigned p, const std::string& text) {
    Literal lit = parse_literal(text);
    ZQpCoset out;
    out.z = lit.kind == 'E' ? take_int(lit, "z", true) : 0;
    out.r = take_int(lit, "r", true);
    out.a = take_fraction(p, lit);
    no_extra(lit);
    return out;
}

// ---- windows ----

CosetWindow::CosetWindow(unsigned p, std::vector<ZQpCoset> cosets, std::vector<bool> boundary, bool abelian)
    : p_(p), abelian_(abelian), cosets_(std::move(cosets)), boundary_(std::move(boundary)) {
    if (boundary_.size() != cosets_.size()) throw Error(ErrorKind::InvalidArgument, "boundary flags do not match cosets");
    for (std::size_t i = 0; i < cosets_.size(); ++i) {
        if (abelian_ && cosets_[i].z != 0) throw Error(ErrorKind::InvalidArgument, "abelian window holds a coset with z != 0");
        if (!lookup_.emplace(cosets_[i], static_cast<Handle>(i + 1)).second)
            throw Error(ErrorKind::InvalidArgument, "duplicate coset " + format_coset(p_, cosets_[i]));
    }
}

std::vector<Handle> CosetWindow::elements() const {
    std::vector<Handle> out(cosets_.size());
    std::iota(out.begin(), out.end(), Handle{1});
    return out;
}

const ZQpCoset& CosetWindow::coset(Handle a) const {
    if (a == kEmpty || a > cosets_.size()) throw Error(ErrorKind::InvalidArgument, "handle " + std::to_string(a) + " is not a coset");
    return cosets_[a - 1];
}

std::optional<Handle> CosetWindow::find(const ZQpCoset& c) const {
    auto it = lookup_.find(c);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

Handle CosetWindow::handle(const ZQpCoset& c) const {
    auto h = find(c);
    if (!h) throw Error(ErrorKind::WindowOverflow, format_coset(p_, c) + " lies outside the window");
    return *h;
}

ProdResult CosetWindow::prod(Handle a, Handle b) const {
    if (a == kEmpty || b == kEmpty) return {a == b ? ProdStatus::Defined : ProdStatus::Undefined, kEmpty};
    const ZQpCoset& x = coset(a);
    const ZQpCoset& y = coset(b);
    if (x.r != y.r - y.z) return {};
    auto h = find(ZQpCoset{x.z + y.z, y.r, prufer_add(p_, x.a, y.a)});
    if (!h) return {ProdStatus::Overflow, kEmpty};
    return {ProdStatus::Defined, *h};
}

Handle CosetWindow::inv(Handle a) const {
    if (a == kEmpty) return kEmpty;
    return handle(e_inv(p_, coset(a)));
}

Handle CosetWindow::meet(Handle a, Handle b) const {
    if (a == kEmpty || b == kEmpty) return kEmpty;
    auto m = e_meet(p_, coset(a), coset(b));
    return m ? handle(*m) : kEmpty;
}

std::uint64_t CosetWindow::index(Handle u, Handle v) const {
    const ZQpCoset& x = coset(u);
    const ZQpCoset& y = coset(v);
    if (x.z != 0 || !x.a.is_zero() || y.z != 0 || !y.a.is_zero())
        throw Error(ErrorKind::InvalidArgument, "index is defined on subgroups only");
    return subgroup_index(p_, x.r, y.r);
}

bool CosetWindow::boundary_flag(Handle a) const {
    coset(a);
    return boundary_[a - 1];
}

std::string CosetWindow::describe(Handle a) const {
    if (a == kEmpty) return "EMPTY";
    const ZQpCoset& c = coset(a);
    return abelian_ ? format_coset(p_, QpCoset{c.r, c.a}) : format_coset(p_, c);
}

namespace {

std::vector<PruferElement> prufer_window(unsigned p, unsigned M) {
    std::vector<PruferElement> out;
    std::uint64_t n = ipow(p, M);
    for (std::uint64_t k = 0; k < n; ++k) out.push_back(prufer_make(p, k, M));
    return out;
}

}  // namespace

CosetWindow qp_window(const WindowParams& w) {
    w.validate();
    std::vector<ZQpCoset> cosets;
    std::vector<bool> boundary;
    auto as = prufer_window(w.p, w.M);
    for (std::int64_t r = -w.R; r <= w.R; ++r)
        for (const auto& a : as) {
            cosets.push_back({0, r, a});
            boundary.push_back(std::abs(r) == w.R || a.m == w.M);
        }
    return CosetWindow(w.p, std::move(cosets), std::move(boundary), true);
}

CosetWindow zqp_window(const WindowParams& w) {
    w.validate();
    std::int64_t Z = w.z_bound();
    std::vector<ZQpCoset> cosets;
    std::vector<bool> boundary;
    auto as = prufer_window(w.p, w.M);
    for (std::int64_t z = -Z; z <= Z; ++z)
        for (std::int64_t r = -w.R; r <= w.R; ++r) {
            if (std::abs(r - z) > w.R) continue;
            for (const auto& a : as) {
                cosets.push_back({z, r, a});
                boundary.push_back(std::abs(r) == w.R || std::abs(r - z) == w.R || std::abs(z) == Z || a.m == w.M);
            }
        }
    return CosetWindow(w.p, std::move(cosets), std::move(boundary), false);
}

// ---- scramble ----

Scramble scramble(const CosetWindow& base, std::uint64_t seed, Twist twist) {
    unsigned p = base.prime();
    if (std::gcd(static_cast<std::uint64_t>(twist.unit < 0 ? -twist.unit : twist.unit), std::uint64_t{p}) != 1)
        throw Error(ErrorKind::InvalidArgument, "twist unit must be coprime to p");
    std::vector<ZQpCoset> twisted;
    std::vector<bool> boundary;
    for (Handle h : base.elements()) {
        const ZQpCoset& c = base.coset(h);
        twisted.push_back({c.z, c.r + twist.shift_power, prufer_mul(p, c.a, twist.unit)});
        boundary.push_back(base.boundary_flag(h));
    }
    CosetWindow image(p, std::move(twisted), std::move(boundary), base.abelian());
    std::size_t n = image.size();

    // perm[i] is the new handle of image handle i + 1.
    std::vector<Handle> perm(n);
    std::iota(perm.begin(), perm.end(), Handle{1});
    std::mt19937_64 engine(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(engine() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    auto to_new = [&](Handle h) { return h == kEmpty ? kEmpty : perm[h - 1]; };

    Scramble out{TableGroupoid(n), std::vector<Handle>(n + 1, kEmpty)};
    TableGroupoid& t = out.oracle;
    auto subs = subgroups(image);
    for (Handle a = 1; a <= n; ++a) {
        out.relabel[a] = to_new(a);
        t.set_inv(to_new(a), to_new(image.inv(a)));
        t.set_boundary(to_new(a), image.boundary_flag(a));
        for (Handle b = 1; b <= n; ++b) {
            ProdResult r = image.prod(a, b);
            if (r.defined()) r.value = to_new(r.value);
            t.set_prod(to_new(a), to_new(b), r);
            if (b >= a) t.set_meet(to_new(a), to_new(b), to_new(image.meet(a, b)));
        }
    }
    for (Handle u : subs)
        for (Handle v : subs) t.set_index(to_new(u), to_new(v), image.index(u, v));
    return out;
}

}  // namespace tdlc
