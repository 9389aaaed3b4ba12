#include "tdlc/padic.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

namespace {

BigInt pow_p(unsigned p, std::uint64_t k) { return boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k)); }

// Base-p digits of x as a p-adic integer; negative x yields the eventually-(p-1) expansion.
void append_digits(NString& out, BigInt x, unsigned p, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        BigInt d = x % p;
        if (d < 0) d += p;
        out.push_back(d.convert_to<std::uint64_t>());
        x = (x - d) / p;
    }
}

BigInt digits_value(const NString& s, std::size_t from, std::size_t count, unsigned p) {
    BigInt v = 0, w = 1;
    for (std::size_t i = 0; i < count; ++i) {
        v += w * s[from + i];
        w *= p;
    }
    return v;
}

// Drop vanishing low digits from the raw sum, at most `head` of them.
NString normalize_head(std::uint64_t head, const NString& raw) {
    std::size_t known = raw.size();
    std::size_t k = 0;
    while (k < head && k < known && raw[k] == 0) ++k;
    if (k < head && k == known) return {};
    NString out{head - k};
    out.insert(out.end(), raw.begin() + static_cast<long>(k), raw.end());
    return out;
}

}  // namespace

// ---- exact values ----

PadicExact::PadicExact(unsigned p, BigInt z, std::int64_t r) : p_(p), z_(std::move(z)), r_(r) {
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "p must be at least 2");
    if (z_ == 0) {
        r_ = 0;
        return;
    }
    while (z_ % p_ == 0) {
        z_ /= p_;
        --r_;
    }
}

PadicExact PadicExact::from_rational(unsigned p, const Rational& q) {
    BigInt den = boost::multiprecision::denominator(q);
    std::int64_t r = 0;
    while (den % p == 0) {
        den /= p;
        ++r;
    }
    if (den != 1) throw Error(ErrorKind::InvalidArgument, "denominator is not a power of p");
    return PadicExact(p, boost::multiprecision::numerator(q), r);
}

Rational PadicExact::value() const {
    if (r_ >= 0) return Rational(z_, pow_p(p_, static_cast<std::uint64_t>(r_)));
    return Rational(z_ * pow_p(p_, static_cast<std::uint64_t>(-r_)));
}

PadicExact PadicExact::operator+(const PadicExact& o) const {
    std::int64_t r = std::max(r_, o.r_);
    return PadicExact(p_, z_ * pow_p(p_, static_cast<std::uint64_t>(r - r_)) + o.z_ * pow_p(p_, static_cast<std::uint64_t>(r - o.r_)), r);
}

PadicExact PadicExact::operator-() const { return PadicExact(p_, -z_, r_); }

PadicExact PadicExact::operator-(const PadicExact& o) const { return *this + (-o); }

PadicExact PadicExact::operator*(const PadicExact& o) const { return PadicExact(p_, z_ * o.z_, r_ + o.r_); }

NString PadicExact::digits(std::size_t length) const {
    NString out;
    if (length == 0) return out;
    out.push_back(r_ > 0 ? static_cast<std::uint64_t>(r_) : 0);
    BigInt n = r_ >= 0 ? z_ : z_ * pow_p(p_, static_cast<std::uint64_t>(-r_));
    append_digits(out, n, p_, length - 1);
    return out;
}

std::string format_padic_exact(const PadicExact& x) {
    std::ostringstream os;
    os << x.value();
    return os.str();
}

// ---- transducers ----

NString add_prefix(unsigned p, const NString& x, const NString& y) {
    if (x.empty() || y.empty()) return {};
    std::uint64_t r = x[0], s = y[0], h = std::max(r, s);
    std::size_t ox = h - r, oy = h - s;  // aligned position of each first digit
    std::size_t known = std::min(ox + x.size() - 1, oy + y.size() - 1);
    NString raw;
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < known; ++j) {
        std::uint64_t a = j >= ox ? x[1 + j - ox] : 0;
        std::uint64_t b = j >= oy ? y[1 + j - oy] : 0;
        std::uint64_t t = a + b + carry;
        raw.push_back(t % p);
        carry = t / p;
    }
    return normalize_head(h, raw);
}

NString neg_prefix(unsigned p, const NString& x) {
    if (x.empty()) return {};
    NString out{x[0]};
    bool seen_nonzero = false;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (seen_nonzero) {
            out.push_back(p - 1 - x[i]);
        } else if (x[i] == 0) {
            out.push_back(0);
        } else {
            out.push_back(p - x[i]);
            seen_nonzero = true;
        }
    }
    return out;
}

NString mul_prefix(unsigned p, const NString& x, const NString& y) {
    if (x.empty() || y.empty()) return {};
    std::size_t known = std::min(x.size(), y.size()) - 1;
    BigInt product = digits_value(x, 1, known, p) * digits_value(y, 1, known, p);
    NString raw;
    append_digits(raw, product, p, known);
    return normalize_head(x[0] + y[0], raw);
}

std::size_t modulus(PadicOp op, std::size_t n, const std::vector<std::uint64_t>& heads) {
    if (n == 0) return 0;
    switch (op) {
        case PadicOp::Neg:
            return n;
        case PadicOp::Add:
            return static_cast<std::size_t>(std::max(heads.at(0), heads.at(1))) + n;
        case PadicOp::Mul:
            return static_cast<std::size_t>(heads.at(0) + heads.at(1)) + n;
    }
    return n;
}

// ---- streams ----

struct PadicStream::Node {
    explicit Node(unsigned p_) : p(p_) {}
    virtual ~Node() = default;

    NString available(std::size_t n) {
        if (n <= cache.size()) return NString(cache.begin(), cache.begin() + static_cast<long>(n));
        if (saturated) return cache;
        NString out = compute(n);
        if (out.size() > n) out.resize(n);
        if (out.size() < n) saturated = true;
        if (out.size() > cache.size()) cache = out;
        return out;
    }

    virtual NString compute(std::size_t n) = 0;

    unsigned p;
    NString cache;
    bool saturated = false;
};

namespace {

struct ExactNode final : PadicStream::Node {
    ExactNode(const PadicExact& x) : Node(x.prime()), value(x) {}
    NString compute(std::size_t n) override { return value.digits(n); }
    PadicExact value;
};

struct LiteralNode final : PadicStream::Node {
    LiteralNode(unsigned p_, NString known_) : Node(p_), known(std::move(known_)) {}
    NString compute(std::size_t n) override {
        return NString(known.begin(), known.begin() + static_cast<long>(std::min(n, known.size())));
    }
    NString known;
};

struct UnaryNode final : PadicStream::Node {
    UnaryNode(std::shared_ptr<PadicStream::Node> a_) : Node(a_->p), a(std::move(a_)) {}
    NString compute(std::size_t n) override { return neg_prefix(p, a->available(modulus(PadicOp::Neg, n, {}))); }
    std::shared_ptr<PadicStream::Node> a;
};

struct BinaryNode final : PadicStream::Node {
    BinaryNode(PadicOp op_, std::shared_ptr<PadicStream::Node> a_, std::shared_ptr<PadicStream::Node> b_)
        : Node(a_->p), op(op_), a(std::move(a_)), b(std::move(b_)) {
        if (a->p != b->p) throw Error(ErrorKind::InvalidArgument, "streams over different primes");
    }
    NString compute(std::size_t n) override {
        NString ha = a->available(1), hb = b->available(1);
        if (ha.empty() || hb.empty()) return {};
        std::size_t g = modulus(op, n, {ha[0], hb[0]});
        NString x = a->available(g), y = b->available(g);
        return op == PadicOp::Add ? add_prefix(p, x, y) : mul_prefix(p, x, y);
    }
    PadicOp op;
    std::shared_ptr<PadicStream::Node> a, b;
};

}  // namespace

PadicStream PadicStream::exact(const PadicExact& x) { return PadicStream(std::make_shared<ExactNode>(x)); }

PadicStream PadicStream::literal(unsigned p, NString known) {
    if (!QpTree(p).contains(known)) throw Error(ErrorKind::InvalidArgument, format_nstring(known) + " is not a Q_p string");
    return PadicStream(std::make_shared<LiteralNode>(p, std::move(known)));
}

PadicStream PadicStream::add(const PadicStream& a, const PadicStream& b) {
    return PadicStream(std::make_shared<BinaryNode>(PadicOp::Add, a.node_, b.node_));
}

PadicStream PadicStream::mul(const PadicStream& a, const PadicStream& b) {
    return PadicStream(std::make_shared<BinaryNode>(PadicOp::Mul, a.node_, b.node_));
}

PadicStream PadicStream::neg(const PadicStream& a) { return PadicStream(std::make_shared<UnaryNode>(a.node_)); }

PadicStream PadicStream::sub(const PadicStream& a, const PadicStream& b) { return add(a, neg(b)); }

unsigned PadicStream::prime() const { return node_->p; }

NString PadicStream::available(std::size_t n) const { return node_->available(n); }

NString PadicStream::prefix(std::size_t n) const {
    NString out = available(n);
    if (out.size() < n)
        throw Error(ErrorKind::PrecisionExhausted,
                    "requested " + std::to_string(n) + " entries, inputs determine " + std::to_string(out.size()));
    return out;
}

PadicStream to_stream(const PadicExact& x) { return PadicStream::exact(x); }

NString padic_add(const PadicStream& x, const PadicStream& y, std::size_t n) { return PadicStream::add(x, y).prefix(n); }
NString padic_neg(const PadicStream& x, std::size_t n) { return PadicStream::neg(x).prefix(n); }
NString padic_mul(const PadicStream& x, const PadicStream& y, std::size_t n) { return PadicStream::mul(x, y).prefix(n); }

PadicStream parse_stream_literal(const std::string& text, unsigned p) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (!text.empty() && text.back() == ':') parts.emplace_back();
    if (parts.size() == 3) {
        unsigned q = 0;
        try {
            q = static_cast<unsigned>(std::stoul(parts[0]));
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "bad prime in stream literal: " + text);
        }
        if (p != 0 && q != p) throw Error(ErrorKind::ParseError, "stream literal prime disagrees with --p: " + text);
        p = q;
        parts.erase(parts.begin());
    }
    if (parts.size() != 2) throw Error(ErrorKind::ParseError, "stream literal must be head:digits or p:head:digits: " + text);
    if (p < 2) throw Error(ErrorKind::ParseError, "stream literal needs a prime: " + text);
    NString s;
    try {
        s.push_back(std::stoull(parts[0]));
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad head in stream literal: " + text);
    }
    const std::string& ds = parts[1];
    if (ds.find(',') != std::string::npos) {
        std::stringstream dss(ds);
        for (std::string tok; std::getline(dss, tok, ',');) {
            if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
                throw Error(ErrorKind::ParseError, "bad digit '" + tok + "' in " + text);
            s.push_back(std::stoull(tok));
        }
    } else {
        for (char c : ds) {
            if (std::isdigit(static_cast<unsigned char>(c))) s.push_back(static_cast<std::uint64_t>(c - '0'));
            else if (c >= 'a' && c <= 'z') s.push_back(static_cast<std::uint64_t>(c - 'a' + 10));
            else throw Error(ErrorKind::ParseError, std::string("bad digit '") + c + "' in " + text);
        }
    }
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] >= p) throw Error(ErrorKind::ParseError, "digit out of range in " + text);
    if (s.size() >= 2 && s[0] > 0 && s[1] == 0)
        throw Error(ErrorKind::ParseError, "positive head needs a nonzero first digit: " + text);
    return PadicStream::literal(p, std::move(s));
}

std::string format_stream_prefix(const NString& prefix) {
    if (prefix.empty()) return "";
    std::string out = std::to_string(prefix[0]) + ":";
    bool wide = std::any_of(prefix.begin() + 1, prefix.end(), [](auto d) { return d > 9; });
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        if (wide && i > 1) out += ',';
        out += std::to_string(prefix[i]);
    }
    return out;
}

// ---- image decision ----

UnaryTransducer identity_transducer(unsigned p) {
    return {"identity", p, [](const NString& x) { return x; }, [](std::size_t n, std::uint64_t) { return n; }};
}

UnaryTransducer neg_transducer(unsigned p) {
    return {"neg", p, [p](const NString& x) { return neg_prefix(p, x); },
            [](std::size_t n, std::uint64_t) { return modulus(PadicOp::Neg, n, {}); }};
}

UnaryTransducer add_constant_transducer(const PadicExact& c) {
    unsigned p = c.prime();
    std::uint64_t hc = c.digits(1)[0];
    return {"add " + format_padic_exact(c), p,
            [c, hc](const NString& x) {
                if (x.empty()) return NString{};
                return add_prefix(c.prime(), x, c.digits(x.size() + x[0] + hc + 2));
            },
            [hc](std::size_t n, std::uint64_t head) { return modulus(PadicOp::Add, n, {head, hc}); }};
}

UnaryTransducer mul_constant_transducer(const PadicExact& c) {
    unsigned p = c.prime();
    std::uint64_t hc = c.digits(1)[0];
    return {"mul " + format_padic_exact(c), p,
            [c, hc](const NString& x) {
                if (x.empty()) return NString{};
                return mul_prefix(c.prime(), x, c.digits(x.size() + x[0] + hc + 2));
            },
            [hc](std::size_t n, std::uint64_t head) { return modulus(PadicOp::Mul, n, {head, hc}); }};
}

bool decide_image_subset(const UnaryTransducer& op, const CodeSet& u, const CodeSet& w) {
    if (u.tree()->id() != w.tree()->id() || u.tree()->id() != QpTree(op.p).id())
        throw Error(ErrorKind::TreeMismatch, "image decision needs both sets on " + QpTree(op.p).id());
    std::size_t depth = 0;
    for (const auto& g : w.strings()) depth = std::max(depth, g.size());
    for (const auto& a : u.strings()) {
        std::size_t need = std::max(a.size(), op.modulus(depth, a[0]));
        for (const auto& b : expand_to_length(*u.tree(), a, need)) {
            NString out = op.apply(b);
            if (out.size() < depth) throw Error(ErrorKind::PrecisionExhausted, "modulus too small for " + op.name);
            bool hit = false;
            for (const auto& g : w.strings()) hit = hit || is_prefix(g, out);
            if (!hit) return false;
        }
    }
    return true;
}

// ---- matrices ----

PadicMatrix::PadicMatrix(unsigned p, std::size_t n, std::vector<PadicStream> entries)
    : p_(p), n_(n), entries_(std::move(entries)) {
    if (entries_.size() != n * n) throw Error(ErrorKind::InvalidArgument, "matrix needs n*n entries");
    for (const auto& e : entries_)
        if (e.prime() != p) throw Error(ErrorKind::InvalidArgument, "matrix entries over different primes");
}

PadicMatrix PadicMatrix::from_exact(const std::vector<std::vector<PadicExact>>& rows) {
    std::size_t n = rows.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");
    std::vector<PadicStream> entries;
    for (const auto& row : rows) {
        if (row.size() != n) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
        for (const auto& x : row) entries.push_back(to_stream(x));
    }
    return PadicMatrix(rows[0][0].prime(), n, std::move(entries));
}

PadicMatrix mat_mul_stream(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.size() != b.size() || a.prime() != b.prime()) throw Error(ErrorKind::InvalidArgument, "shape mismatch");
    std::size_t n = a.size();
    std::vector<PadicStream> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            PadicStream acc = PadicStream::mul(a.at(i, 0), b.at(0, j));
            for (std::size_t k = 1; k < n; ++k) acc = PadicStream::add(acc, PadicStream::mul(a.at(i, k), b.at(k, j)));
            out.push_back(acc);
        }
    return PadicMatrix(a.prime(), n, std::move(out));
}

namespace {

PadicStream det_of(const PadicMatrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    if (rows.size() == 1) return a.at(rows[0], cols[0]);
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    std::optional<PadicStream> acc;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::vector<std::size_t> sub_cols = cols;
        sub_cols.erase(sub_cols.begin() + static_cast<long>(k));
        PadicStream term = PadicStream::mul(a.at(rows[0], cols[k]), det_of(a, sub_rows, sub_cols));
        if (!acc) acc = k % 2 ? PadicStream::neg(term) : term;
        else acc = k % 2 ? PadicStream::sub(*acc, term) : PadicStream::add(*acc, term);
    }
    return *acc;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i)
        if (i != skip) v.push_back(i);
    return v;
}

PrefixMatrix prefixes(const PadicMatrix& m, std::size_t n) {
    PrefixMatrix out(m.size(), std::vector<NString>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m.at(i, j).prefix(n);
    return out;
}

}  // namespace

PadicStream det_stream(const PadicMatrix& a) { return det_of(a, all_but(a.size(), a.size()), all_but(a.size(), a.size())); }

PadicMatrix adjugate_stream(const PadicMatrix& a) {
    std::size_t n = a.size();
    std::vector<PadicStream> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (n == 1) {
                out.push_back(to_stream(PadicExact(a.prime(), 1)));
                continue;
            }
            PadicStream minor = det_of(a, all_but(n, j), all_but(n, i));
            out.push_back((i + j) % 2 ? PadicStream::neg(minor) : minor);
        }
    return PadicMatrix(a.prime(), n, std::move(out));
}

PrefixMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b, std::size_t n) { return prefixes(mat_mul_stream(a, b), n); }
NString det(const PadicMatrix& a, std::size_t n) { return det_stream(a).prefix(n); }
PrefixMatrix adjugate_inverse(const PadicMatrix& a, std::size_t n) { return prefixes(adjugate_stream(a), n); }

// ---- SL_2 pruning ----

namespace {

NString component(const NString& prefix, std::size_t i) {
    NString c;
    for (std::size_t k = i; k < prefix.size(); k += 4) c.push_back(prefix[k]);
    return c;
}

std::vector<PadicExact> candidates(unsigned p, const NString& c, unsigned height) {
    std::vector<PadicExact> out;
    auto keep = [&](const PadicExact& x) {
        if (x.digits(c.size()) == c && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    };
    BigInt span = pow_p(p, height);
    if (c.empty()) {
        for (unsigned r = 0; r <= height; ++r)
            for (BigInt z = -span; z <= span; ++z) keep(PadicExact(p, z, r));
        return out;
    }
    BigInt base = digits_value(c, 1, c.size() - 1, p);
    BigInt step = pow_p(p, c.size() - 1);
    for (BigInt j = -span; j <= span; ++j) keep(PadicExact(p, base + step * j, static_cast<std::int64_t>(c[0])));
    return out;
}

bool find_witness(unsigned p, const NString& prefix, unsigned height) {
    std::vector<NString> comps;
    for (std::size_t i = 0; i < 4; ++i) comps.push_back(component(prefix, i));
    auto as = candidates(p, comps[0], height);
    auto bs = candidates(p, comps[1], height);
    auto cs = candidates(p, comps[2], height);
    PadicExact one(p, 1);
    for (const auto& a : as) {
        if (a.is_zero()) continue;
        for (const auto& b : bs)
            for (const auto& c : cs) {
                Rational d = (one + b * c).value() / a.value();
                BigInt den = boost::multiprecision::denominator(d);
                while (den % p == 0) den /= p;
                if (den != 1) continue;
                if (PadicExact::from_rational(p, d).digits(comps[3].size()) == comps[3]) return true;
            }
    }
    return false;
}

bool contradicts_one(const NString& det_prefix) {
    for (std::size_t i = 0; i < det_prefix.size(); ++i) {
        std::uint64_t want = i == 1 ? 1 : 0;
        if (det_prefix[i] != want) return true;
    }
    return false;
}

// True when every extension by `extra` further rounds of digits forces det != 1.
bool refuted(unsigned p, const NString& prefix, unsigned extra) {
    if (prefix.size() < 4) return false;
    std::vector<NString> frontier{prefix};
    for (std::size_t step = 0; step < 4u * extra; ++step) {
        std::vector<NString> next;
        for (const auto& s : frontier) {
            NString comp = component(s, s.size() % 4);
            comp.push_back(0);
            for (std::uint64_t d = 0; d < p; ++d) {
                comp.back() = d;
                if (!QpTree(p).contains(comp)) continue;
                next.push_back(s);
                next.back().push_back(d);
            }
        }
        frontier = std::move(next);
    }
    for (const auto& s : frontier) {
        NString a = component(s, 0), b = component(s, 1), c = component(s, 2), d = component(s, 3);
        NString det_prefix = add_prefix(p, mul_prefix(p, a, d), neg_prefix(p, mul_prefix(p, b, c)));
        if (!contradicts_one(det_prefix)) return false;
    }
    return true;
}

}  // namespace

bool sl_prune(unsigned p, const NString& prefix, unsigned budget) {
    for (std::size_t i = 0; i < 4; ++i)
        if (!QpTree(p).contains(component(prefix, i)))
            throw Error(ErrorKind::InvalidArgument, format_nstring(prefix) + " is not on the matrix tree");
    for (unsigned t = 0; t <= budget; ++t) {
        if (find_witness(p, prefix, t)) return true;
        if (refuted(p, prefix, t)) return false;
    }
    throw Error(ErrorKind::BudgetExceeded, "sl_prune undecided at height " + std::to_string(budget) + " for " + format_nstring(prefix));
}

}  // namespace tdlc
