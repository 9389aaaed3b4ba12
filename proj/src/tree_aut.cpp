#include "tdlc/tree_aut.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

namespace {

unsigned colour_of(char ch) { return static_cast<unsigned>(ch - '0'); }
char letter_of(unsigned c) { return static_cast<char>('0' + c); }

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) throw Error(ErrorKind::BudgetExceeded, "count exceeds 64 bits");
    return a * b;
}

std::uint64_t factorial(unsigned n) {
    std::uint64_t out = 1;
    for (unsigned i = 2; i <= n; ++i) out = checked_mul(out, i);
    return out;
}

}  // namespace

// ---- tree geometry ----

bool is_vertex(unsigned d, const Vertex& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        unsigned c = colour_of(v[i]);
        if (c < 1 || c > d) return false;
        if (i > 0 && v[i] == v[i - 1]) return false;
    }
    return true;
}

Vertex move(const Vertex& x, unsigned colour) {
    if (!x.empty() && colour_of(x.back()) == colour) return x.substr(0, x.size() - 1);
    return x + letter_of(colour);
}

std::uint64_t tree_distance(const Vertex& x, const Vertex& y) {
    std::size_t k = 0;
    while (k < x.size() && k < y.size() && x[k] == y[k]) ++k;
    return x.size() + y.size() - 2 * k;
}

std::vector<Vertex> neighbours(unsigned d, const Vertex& x) {
    std::vector<Vertex> out;
    for (unsigned c = 1; c <= d; ++c) out.push_back(move(x, c));
    return out;
}

std::vector<Vertex> ball(unsigned d, const Vertex& centre, unsigned r) {
    std::vector<Vertex> out{centre};
    std::set<Vertex> seen{centre};
    std::size_t layer_begin = 0;
    for (unsigned k = 0; k < r; ++k) {
        std::size_t layer_end = out.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i)
            for (const Vertex& n : neighbours(d, out[i]))
                if (seen.insert(n).second) out.push_back(n);
        layer_begin = layer_end;
    }
    return out;
}

std::vector<Vertex> geodesic(const Vertex& x, const Vertex& y) {
    std::size_t k = 0;
    while (k < x.size() && k < y.size() && x[k] == y[k]) ++k;
    std::vector<Vertex> out;
    for (std::size_t n = x.size(); n > k; --n) out.push_back(x.substr(0, n));
    for (std::size_t n = k; n <= y.size(); ++n) out.push_back(y.substr(0, n));
    return out;
}

// ---- permutations ----

LocalPerm LocalPerm::identity(unsigned d) {
    std::vector<unsigned> img(d);
    std::iota(img.begin(), img.end(), 1u);
    return from_images(std::move(img));
}

LocalPerm LocalPerm::from_images(std::vector<unsigned> images) {
    std::vector<bool> hit(images.size() + 1, false);
    for (unsigned c : images) {
        if (c < 1 || c > images.size() || hit[c]) throw Error(ErrorKind::InvalidArgument, "not a permutation of the colours");
        hit[c] = true;
    }
    LocalPerm p;
    p.img_ = std::move(images);
    return p;
}

LocalPerm LocalPerm::transposition(unsigned d, unsigned a, unsigned b) {
    LocalPerm p = identity(d);
    std::swap(p.img_.at(a - 1), p.img_.at(b - 1));
    return p;
}

unsigned LocalPerm::preimage(unsigned c) const {
    for (unsigned i = 0; i < img_.size(); ++i)
        if (img_[i] == c) return i + 1;
    throw Error(ErrorKind::InvalidArgument, "colour out of range");
}

bool LocalPerm::is_identity() const {
    for (unsigned i = 0; i < img_.size(); ++i)
        if (img_[i] != i + 1) return false;
    return true;
}

LocalPerm LocalPerm::then(const LocalPerm& b) const {
    LocalPerm p = *this;
    for (auto& c : p.img_) c = b(c);
    return p;
}

LocalPerm LocalPerm::inverse() const {
    LocalPerm p = *this;
    for (unsigned i = 0; i < img_.size(); ++i) p.img_[img_[i] - 1] = i + 1;
    return p;
}

std::string LocalPerm::cycles() const {
    std::string out;
    std::vector<bool> seen(img_.size() + 1, false);
    for (unsigned c = 1; c <= img_.size(); ++c) {
        if (seen[c] || (*this)(c) == c) continue;
        out += '(';
        for (unsigned x = c; !seen[x]; x = (*this)(x)) {
            if (x != c) out += ' ';
            out += std::to_string(x);
            seen[x] = true;
        }
        out += ')';
    }
    return out.empty() ? "id" : out;
}

// ---- generators ----

LocalPerm GeneratorAut::raw(const Vertex& v) const {
    auto it = sigma.find(v);
    return it == sigma.end() ? LocalPerm::identity(d) : it->second;
}

namespace {

// Walks the tree keeping the effective permutations along the root path.
class Walker {
public:
    explicit Walker(const GeneratorAut& g) : g_(g) { taus_.push_back(g.raw("")); }

    const Vertex& at() const { return v_; }
    const LocalPerm& tau() const { return taus_.back(); }

    void step(unsigned c) {
        if (!v_.empty() && colour_of(v_.back()) == c) {
            v_.pop_back();
            taus_.pop_back();
            return;
        }
        unsigned want = taus_.back()(c);
        v_ += letter_of(c);
        LocalPerm s = g_.raw(v_);
        if (s(c) != want) s = s.then(LocalPerm::transposition(g_.d, s(c), want));
        taus_.push_back(std::move(s));
    }

private:
    const GeneratorAut& g_;
    Vertex v_;
    std::vector<LocalPerm> taus_;
};

}  // namespace

LocalPerm effective_perm(const GeneratorAut& g, const Vertex& v) {
    Walker w(g);
    for (char ch : v) w.step(colour_of(ch));
    return w.tau();
}

Vertex apply_generator(const GeneratorAut& g, const Vertex& x) {
    Walker s(g);
    Vertex y = g.w;
    for (char ch : x) {
        unsigned c = colour_of(ch);
        y = move(y, s.tau()(c));
        s.step(c);
    }
    return y;
}

Vertex apply_generator_inverse(const GeneratorAut& g, const Vertex& y) {
    // walk the source towards the preimage of the root, then along y
    Walker s(g);
    Vertex image = g.w;
    while (!image.empty()) {
        s.step(s.tau().preimage(colour_of(image.back())));
        image.pop_back();
    }
    for (char ch : y) s.step(s.tau().preimage(colour_of(ch)));
    return s.at();
}

// ---- words ----

TreeAut TreeAut::of(std::shared_ptr<const GeneratorAut> g) {
    TreeAut a(g->d);
    a.letters_.push_back({std::move(g), false});
    return a;
}

void TreeAut::push(const Letter& l) {
    if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().inverse != l.inverse)
        letters_.pop_back();
    else
        letters_.push_back(l);
}

TreeAut TreeAut::operator*(const TreeAut& b) const {
    if (b.d_ != d_) throw Error(ErrorKind::InvalidArgument, "degree mismatch");
    TreeAut out = *this;
    for (const auto& l : b.letters_) out.push(l);
    return out;
}

TreeAut TreeAut::inverse() const {
    TreeAut out(d_);
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push({it->gen, !it->inverse});
    return out;
}

TreeAut TreeAut::pow(std::int64_t k) const {
    TreeAut base = k < 0 ? inverse() : *this;
    TreeAut out(d_);
    for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) out = out * base;
    return out;
}

std::string TreeAut::to_string() const {
    if (letters_.empty()) return "id";
    std::string out;
    for (const auto& l : letters_) {
        if (!out.empty()) out += '*';
        out += l.gen->name.empty() ? "?" : l.gen->name;
        if (l.inverse) out += "^-1";
    }
    return out;
}

Vertex apply_word(const TreeAut& a, const Vertex& x) {
    Vertex y = x;
    for (const auto& l : a.letters()) y = l.inverse ? apply_generator_inverse(*l.gen, y) : apply_generator(*l.gen, y);
    return y;
}

LocalPerm portrait(const TreeAut& a, const Vertex& x) {
    unsigned d = a.degree();
    Vertex ax = apply_word(a, x);
    std::vector<unsigned> img(d);
    for (unsigned c = 1; c <= d; ++c) {
        Vertex ay = apply_word(a, move(x, c));
        const Vertex& longer = ay.size() > ax.size() ? ay : ax;
        img[c - 1] = colour_of(longer.back());
    }
    return LocalPerm::from_images(std::move(img));
}

// ---- classification ----

const char* aut_type_name(AutType t) {
    switch (t) {
        case AutType::Elliptic: return "elliptic";
        case AutType::Inversion: return "inversion";
        case AutType::Hyperbolic: return "hyperbolic";
        case AutType::Inconclusive: return "inconclusive";
    }
    return "?";
}

Classification classify(const TreeAut& a, unsigned radius) {
    if (radius < 2) throw Error(ErrorKind::InvalidArgument, "classify needs radius >= 2");
    Classification out;
    auto verts = ball(a.degree(), "", radius);
    std::vector<std::uint64_t> disp;
    std::vector<Vertex> images;
    for (const Vertex& x : verts) {
        images.push_back(apply_word(a, x));
        disp.push_back(tree_distance(x, images.back()));
    }
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (disp[i] == 0) out.fixed.push_back(verts[i]);
    if (!out.fixed.empty()) {
        out.type = AutType::Elliptic;
        return out;
    }
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (disp[i] == 1 && apply_word(a, images[i]) == verts[i]) {
            out.type = AutType::Inversion;
            out.edge = {verts[i], images[i]};
            return out;
        }
    std::uint64_t best = *std::min_element(disp.begin(), disp.end());
    bool interior = false;
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (disp[i] == best) {
            out.axis.push_back(verts[i]);
            if (verts[i].size() + best < radius) interior = true;
        }
    if (!interior) {
        out.axis.clear();
        return out;
    }
    out.type = AutType::Hyperbolic;
    out.length = best;
    return out;
}

std::optional<std::uint64_t> scale_treeaut(const TreeAut& a, unsigned radius) {
    Classification c = classify(a, radius);
    switch (c.type) {
        case AutType::Elliptic:
        case AutType::Inversion: return 1;
        case AutType::Hyperbolic: {
            std::uint64_t s = 1;
            for (std::uint64_t i = 0; i < c.length; ++i) s = checked_mul(s, a.degree() - 1);
            return s;
        }
        case AutType::Inconclusive: break;
    }
    return std::nullopt;
}

std::vector<Vertex> agree_set(const TreeAut& a, const TreeAut& b, unsigned radius) {
    std::vector<Vertex> out;
    for (const Vertex& x : ball(a.degree(), "", radius))
        if (apply_word(a, x) == apply_word(b, x)) out.push_back(x);
    return out;
}

// ---- conjugacy ----

namespace {

std::uint64_t generator_count(unsigned d, unsigned depth) {
    if (depth == 0) return 1;
    std::uint64_t n = ball(d, "", depth).size();
    n = checked_mul(n, factorial(d));
    std::uint64_t inner = ball(d, "", depth - 1).size() - 1;
    for (std::uint64_t i = 0; i < inner; ++i) n = checked_mul(n, factorial(d - 1));
    return n;
}

std::vector<LocalPerm> all_perms(unsigned d) {
    std::vector<unsigned> img(d);
    std::iota(img.begin(), img.end(), 1u);
    std::vector<LocalPerm> out;
    do out.push_back(LocalPerm::from_images(img));
    while (std::next_permutation(img.begin(), img.end()));
    return out;
}

}  // namespace

std::vector<GeneratorAut> enumerate_generators(unsigned d, unsigned depth, std::uint64_t budget) {
    if (generator_count(d, depth) > budget)
        throw Error(ErrorKind::BudgetExceeded, "more than " + std::to_string(budget) + " generators at depth " + std::to_string(depth));
    std::vector<GeneratorAut> out;
    if (depth == 0) {
        out.push_back(GeneratorAut{d, "", "", {}});
        return out;
    }
    auto perms = all_perms(d);
    auto inner = ball(d, "", depth - 1);  // vertices carrying a permutation
    std::vector<std::map<Vertex, LocalPerm>> portraits{{}};
    for (const Vertex& v : inner) {
        std::vector<std::map<Vertex, LocalPerm>> next;
        for (const auto& partial : portraits)
            for (const LocalPerm& s : perms) {
                if (!v.empty()) {
                    unsigned c = colour_of(v.back());
                    if (s(c) != partial.at(v.substr(0, v.size() - 1))(c)) continue;
                }
                auto grown = partial;
                grown[v] = s;
                next.push_back(std::move(grown));
            }
        portraits = std::move(next);
    }
    for (const Vertex& w : ball(d, "", depth))
        for (const auto& s : portraits) out.push_back(GeneratorAut{d, "x", w, s});
    return out;
}

ConjugacyResult conjugate_search(const TreeAut& a, const TreeAut& b, unsigned radius, unsigned depth, std::uint64_t budget) {
    ConjugacyResult out;
    Classification ca = classify(a, radius), cb = classify(b, radius);
    if (ca.type != AutType::Inconclusive && cb.type != AutType::Inconclusive) {
        if (ca.type != cb.type) {
            out.certificate = std::string("types differ: ") + aut_type_name(ca.type) + " vs " + aut_type_name(cb.type);
            return out;
        }
        if (ca.type == AutType::Hyperbolic && ca.length != cb.length) {
            out.certificate = "translation lengths differ: " + std::to_string(ca.length) + " vs " + std::to_string(cb.length);
            return out;
        }
    }
    unsigned d = a.degree();
    auto verts = ball(d, "", radius);
    std::vector<Vertex> ia;
    for (const Vertex& x : verts) ia.push_back(apply_word(a, x));
    for (unsigned k = 0; k <= depth; ++k) {
        std::uint64_t n = generator_count(d, k);
        if (out.candidates + n > budget) break;
        for (const GeneratorAut& x : enumerate_generators(d, k, budget)) {
            ++out.candidates;
            // a·x = x·b on the ball, acting on the right
            bool ok = true;
            for (std::size_t i = 0; i < verts.size() && ok; ++i)
                ok = apply_generator(x, ia[i]) == apply_word(b, apply_generator(x, verts[i]));
            if (ok) {
                out.witness = x;
                return out;
            }
        }
    }
    return out;
}

// ---- stabilizer indices ----

namespace {

void require_subtree(unsigned d, const std::set<Vertex>& s, const char* what) {
    for (const Vertex& v : s)
        if (!is_vertex(d, v)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " holds a non-vertex \"" + v + "\"");
    if (s.empty()) return;
    std::set<Vertex> reached{*s.begin()};
    std::deque<Vertex> queue{*s.begin()};
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (const Vertex& n : neighbours(d, v))
            if (s.count(n) && reached.insert(n).second) queue.push_back(n);
    }
    if (reached.size() != s.size()) throw Error(ErrorKind::NotConvex, std::string(what) + " is not a subtree");
}

}  // namespace

std::uint64_t ball_stab_index(unsigned d, const std::vector<Vertex>& b_prime, const std::vector<Vertex>& b) {
    std::set<Vertex> fixed(b_prime.begin(), b_prime.end()), other(b.begin(), b.end());
    if (fixed.empty()) throw Error(ErrorKind::InvalidArgument, "the fixed subtree must be nonempty");
    require_subtree(d, fixed, "first subtree");
    require_subtree(d, other, "second subtree");

    // hull of the union: the first subtree plus geodesics back to it
    std::set<Vertex> hull = fixed;
    for (const Vertex& v : other)
        for (const Vertex& g : geodesic(v, *fixed.begin())) hull.insert(g);

    std::uint64_t index = 1;
    std::deque<Vertex> queue(fixed.begin(), fixed.end());
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        unsigned pinned = 0;
        std::vector<Vertex> fresh;
        for (const Vertex& n : neighbours(d, v)) {
            if (fixed.count(n))
                ++pinned;
            else if (hull.count(n))
                fresh.push_back(n);
        }
        unsigned free = d - pinned;
        for (unsigned i = 0; i < fresh.size(); ++i) index = checked_mul(index, free - i);
        for (const Vertex& n : fresh) {
            fixed.insert(n);
            queue.push_back(n);
        }
    }
    return index;
}

std::uint64_t m_tree(const TreeAut& a, const std::vector<Vertex>& subtree) {
    TreeAut inv = a.inverse();
    std::vector<Vertex> moved;
    for (const Vertex& v : subtree) moved.push_back(apply_word(inv, v));
    return ball_stab_index(a.degree(), moved, subtree);
}

std::uint64_t m_tree(const TreeAut& a, const Vertex& base, unsigned n) { return m_tree(a, ball(a.degree(), base, n)); }

TidyReport tidy_check(const TreeAut& a, const std::vector<Vertex>& subtree, unsigned kmax, unsigned radius) {
    TidyReport rep;
    for (unsigned k = 1; k <= kmax; ++k) rep.m.push_back(m_tree(a.pow(k), subtree));
    std::uint64_t expect = 1;
    for (unsigned k = 1; k <= kmax; ++k) {
        expect = checked_mul(expect, rep.m.front());
        if (rep.m[k - 1] != expect) rep.multiplicative = false;
    }
    if (auto s = scale_treeaut(a, radius); s && !rep.m.empty()) rep.equals_scale = *s == rep.m.front();
    return rep;
}

TidyReport tidy_check(const TreeAut& a, const Vertex& base, unsigned n, unsigned kmax) {
    return tidy_check(a, ball(a.degree(), base, n), kmax, static_cast<unsigned>(base.size()) + n + 8);
}

bool injection_extends(const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i + 1; j < pairs.size(); ++j)
            if (tree_distance(pairs[i].first, pairs[j].first) != tree_distance(pairs[i].second, pairs[j].second)) return false;
    return true;
}

// ---- brute force ----

TruncatedAuts brute_force_aut(unsigned d, unsigned depth, std::uint64_t budget) {
    std::uint64_t count = depth == 0 ? 1 : factorial(d);
    if (depth > 0) {
        std::uint64_t inner = ball(d, "", depth - 1).size() - 1;
        for (std::uint64_t i = 0; i < inner; ++i) count = checked_mul(count, factorial(d - 1));
    }
    if (count > budget) throw Error(ErrorKind::BudgetExceeded, std::to_string(count) + " truncated automorphisms exceed the budget");

    TruncatedAuts out;
    out.vertices = ball(d, "", depth);
    std::map<Vertex, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < out.vertices.size(); ++i) pos[out.vertices[i]] = i;
    std::vector<std::uint32_t> img(out.vertices.size(), 0);

    auto children = [&](const Vertex& v) {
        std::vector<unsigned> cs;
        for (unsigned c = 1; c <= d; ++c)
            if (v.empty() || colour_of(v.back()) != c) cs.push_back(c);
        return cs;
    };
    std::size_t inner_end = depth == 0 ? 0 : ball(d, "", depth - 1).size();
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == inner_end) {
            out.maps.push_back(img);
            return;
        }
        const Vertex& v = out.vertices[i];
        const Vertex& vi = out.vertices[img[i]];
        auto from = children(v), to = children(vi);
        do {
            for (std::size_t k = 0; k < from.size(); ++k) img[pos.at(v + letter_of(from[k]))] = pos.at(vi + letter_of(to[k]));
            self(self, i + 1);
        } while (std::next_permutation(to.begin(), to.end()));
    };
    rec(rec, 0);
    return out;
}

// ---- mini-language ----

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& s, std::size_t base = 0) : s_(s), base_(base) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::ParseError, "at position " + std::to_string(base_ + i_) + ": " + what);
    }
    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool done() {
        ws();
        return i_ >= s_.size();
    }
    char peek() {
        ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(const std::string& tok) {
        ws();
        if (s_.compare(i_, tok.size(), tok) == 0) {
            i_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok) {
        if (!accept(tok)) fail("expected '" + tok + "'");
    }
    std::string name() {
        ws();
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        if (start == i_ || std::isdigit(static_cast<unsigned char>(s_[start]))) {
            i_ = start;
            fail("expected a name");
        }
        return s_.substr(start, i_ - start);
    }
    std::int64_t integer() {
        ws();
        std::size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '-') ++i_;
        std::size_t digits = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (digits == i_ || i_ - digits > 9) {
            i_ = start;
            fail("expected an integer");
        }
        return std::stoll(s_.substr(start, i_ - start));
    }
    std::string quoted() {
        ws();
        if (i_ >= s_.size() || s_[i_] != '"') fail("expected '\"'");
        std::size_t start = ++i_;
        while (i_ < s_.size() && s_[i_] != '"') ++i_;
        if (i_ >= s_.size()) fail("unterminated string");
        return s_.substr(start, i_++ - start);
    }
    std::size_t pos() const { return base_ + i_; }

private:
    const std::string& s_;
    std::size_t base_;
    std::size_t i_ = 0;
};

Vertex vertex_literal(unsigned d, Cursor& c) {
    std::size_t at = c.pos();
    Vertex v = c.quoted();
    if (!is_vertex(d, v))
        throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) + ": \"" + v + "\" is not a reduced colour word");
    return v;
}

LocalPerm perm_literal(unsigned d, Cursor& c) {
    if (c.accept("id")) return LocalPerm::identity(d);
    std::vector<unsigned> img(d);
    std::iota(img.begin(), img.end(), 1u);
    std::vector<bool> used(d + 1, false);
    if (c.peek() != '(') c.fail("expected 'id' or a cycle");
    while (c.peek() == '(') {
        c.expect("(");
        std::vector<unsigned> cyc;
        while (c.peek() != ')') {
            std::size_t at = c.pos();
            std::int64_t x = c.integer();
            if (x < 1 || x > static_cast<std::int64_t>(d) || used[x])
                throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) + ": bad or repeated colour " + std::to_string(x));
            used[x] = true;
            cyc.push_back(static_cast<unsigned>(x));
        }
        c.expect(")");
        for (std::size_t k = 0; k < cyc.size(); ++k) img[cyc[k] - 1] = cyc[(k + 1) % cyc.size()];
    }
    return LocalPerm::from_images(std::move(img));
}

}  // namespace

GeneratorSet parse_generators(unsigned d, const std::string& text) {
    if (d < 3 || d > 9) throw Error(ErrorKind::InvalidArgument, "degree must lie in 3..9");
    GeneratorSet out;
    std::size_t base = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        Cursor c(line, base);
        base += line.size() + 1;
        if (c.done() || c.peek() == '#') continue;
        c.expect("gen");
        auto g = std::make_shared<GeneratorAut>();
        g->d = d;
        std::size_t name_at = c.pos();
        g->name = c.name();
        if (out.count(g->name) || g->name == "id")
            throw Error(ErrorKind::ParseError, "at position " + std::to_string(name_at) + ": generator '" + g->name + "' redefined");
        c.expect("=");
        c.expect("w");
        c.expect(":");
        g->w = vertex_literal(d, c);
        if (c.accept(";")) {
            c.expect("sigma");
            c.expect(":");
            do {
                std::size_t at = c.pos();
                Vertex v = vertex_literal(d, c);
                c.expect("->");
                LocalPerm s = perm_literal(d, c);
                if (!g->sigma.emplace(v, s).second)
                    throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) + ": vertex \"" + v + "\" listed twice");
            } while (c.accept(","));
        }
        if (!c.done()) c.fail("unexpected trailing text");
        out[g->name] = g;
    }
    return out;
}

TreeAut parse_word(unsigned d, const GeneratorSet& gens, const std::string& text) {
    Cursor c(text);
    TreeAut out(d);
    if (c.done()) c.fail("empty word");
    do {
        std::size_t at = c.pos();
        std::string n = c.name();
        TreeAut term(d);
        if (n != "id") {
            auto it = gens.find(n);
            if (it == gens.end()) throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) + ": unknown generator '" + n + "'");
            if (it->second->d != d) throw Error(ErrorKind::InvalidArgument, "generator '" + n + "' has another degree");
            term = TreeAut::of(it->second);
        }
        if (c.accept("^")) term = term.pow(c.integer());
        out = out * term;
    } while (c.accept("*"));
    if (!c.done()) c.fail("unexpected trailing text");
    return out;
}

std::string format_generator(const GeneratorAut& g) {
    std::string out = "gen " + g.name + " = w:\"" + g.w + "\"";
    if (!g.sigma.empty()) {
        out += "; sigma: ";
        bool first = true;
        for (const auto& [v, s] : g.sigma) {
            if (!first) out += ", ";
            first = false;
            out += "\"" + v + "\" -> " + s.cycles();
        }
    }
    return out;
}

}  // namespace tdlc
