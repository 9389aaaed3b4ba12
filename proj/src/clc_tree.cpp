#include "tdlc/clc_tree.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

namespace {

std::uint64_t nth_prime(std::size_t i) {
    static std::vector<std::uint64_t> primes{2};
    std::uint64_t candidate = primes.back();
    while (primes.size() <= i) {
        ++candidate;
        bool prime = true;
        for (auto q : primes) {
            if (q * q > candidate) break;
            if (candidate % q == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(candidate);
    }
    return primes[i];
}

void require_same_tree(const CodeSet& u, const CodeSet& w) {
    if (u.tree()->id() != w.tree()->id())
        throw Error(ErrorKind::TreeMismatch, u.tree()->id() + " vs " + w.tree()->id());
}

bool has_prefix_in(const std::set<NString>& w, const NString& s) {
    for (const auto& g : w)
        if (is_prefix(g, s)) return true;
    return false;
}

}  // namespace

bool is_prefix(const NString& a, const NString& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool comparable(const NString& a, const NString& b) { return is_prefix(a, b) || is_prefix(b, a); }

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) { return (x + y) * (x + y + 1) / 2 + y; }

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n) {
    std::uint64_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= n) ++w;
    std::uint64_t y = n - w * (w + 1) / 2;
    return {w - y, y};
}

std::vector<std::uint64_t> ClcTree::successors(const NString& s) const {
    std::vector<std::uint64_t> out;
    if (s.empty()) throw Error(ErrorKind::InvalidArgument, "root is infinitely branching");
    NString t = s;
    t.push_back(0);
    std::uint64_t bound = branch_bound(s[0], s.size());
    for (std::uint64_t c = 0; c <= bound; ++c) {
        t.back() = c;
        if (contains(t)) out.push_back(c);
    }
    return out;
}

// ---- Qp-tree ----

QpTree::QpTree(unsigned p) : p_(p) {
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "p must be at least 2");
}

std::string QpTree::id() const { return "qp:" + std::to_string(p_); }

bool QpTree::contains(const NString& s) const {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] >= p_) return false;
    if (s.size() >= 2 && s[0] > 0 && s[1] == 0) return false;
    return true;
}

std::uint64_t QpTree::branch_bound(std::uint64_t first, std::size_t i) const { return i == 0 ? first : p_ - 1; }

std::vector<std::uint64_t> QpTree::successors(const NString& s) const {
    if (s.empty()) throw Error(ErrorKind::InvalidArgument, "root is infinitely branching");
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = (s.size() == 1 && s[0] > 0) ? 1 : 0; c < p_; ++c) out.push_back(c);
    return out;
}

// ---- S_infinity fragment ----

SInfinityFragment::SInfinityFragment(std::uint64_t n) : n_(n) {}

std::string SInfinityFragment::id() const { return "sinf:" + std::to_string(n_); }

bool SInfinityFragment::contains(const NString& s) const {
    for (std::size_t k = 0; k < s.size(); ++k) {
        auto [a, b] = cantor_unpair(s[k]);
        if (k >= n_) {
            if (a != k || b != k) return false;
        } else if (a >= n_ || b >= n_) {
            return false;
        }
    }
    try {
        decode_pair_injection(s);
    } catch (const Error&) {
        return false;
    }
    return true;
}

std::uint64_t SInfinityFragment::branch_bound(std::uint64_t, std::size_t i) const {
    return i < n_ ? cantor_pair(n_ - 1, n_ - 1) : cantor_pair(i, i);
}

// ---- Tree(Aut T_d) ----

TreeAutTd::TreeAutTd(unsigned d) : d_(d) {
    if (d < 3) throw Error(ErrorKind::InvalidArgument, "degree must be at least 3");
}

std::string TreeAutTd::id() const { return "td:" + std::to_string(d_); }

std::uint64_t TreeAutTd::ball_size(std::size_t radius) const {
    std::uint64_t total = 1, level = d_;
    for (std::size_t i = 1; i <= radius; ++i) {
        total += level;
        level *= d_ - 1;
    }
    return total;
}

std::uint64_t TreeAutTd::code_of_vertex(const std::vector<unsigned>& word) const {
    if (word.empty()) return 0;
    std::uint64_t idx = word[0] - 1;
    for (std::size_t i = 1; i < word.size(); ++i) {
        unsigned c = word[i], prev = word[i - 1];
        idx = idx * (d_ - 1) + (c - 1 - (c > prev ? 1 : 0));
    }
    return ball_size(word.size() - 1) + idx;
}

std::vector<unsigned> TreeAutTd::vertex_of_code(std::uint64_t code) const {
    if (code == 0) return {};
    std::size_t len = 1;
    while (ball_size(len) <= code) ++len;
    std::uint64_t idx = code - ball_size(len - 1);
    std::vector<std::uint64_t> ranks(len);
    for (std::size_t i = len; i-- > 1;) {
        ranks[i] = idx % (d_ - 1);
        idx /= d_ - 1;
    }
    ranks[0] = idx;
    std::vector<unsigned> word(len);
    word[0] = static_cast<unsigned>(ranks[0]) + 1;
    for (std::size_t i = 1; i < len; ++i) {
        unsigned c = static_cast<unsigned>(ranks[i]) + 1;
        if (c >= word[i - 1]) ++c;
        word[i] = c;
    }
    return word;
}

namespace {

std::size_t word_distance(const std::vector<unsigned>& x, const std::vector<unsigned>& y) {
    std::size_t l = 0;
    while (l < x.size() && l < y.size() && x[l] == y[l]) ++l;
    return x.size() + y.size() - 2 * l;
}

}  // namespace

bool TreeAutTd::contains(const NString& s) const {
    std::map<std::uint64_t, std::uint64_t> alpha;
    try {
        alpha = decode_pair_injection(s);
    } catch (const Error&) {
        return false;
    }
    std::vector<std::pair<std::vector<unsigned>, std::vector<unsigned>>> words;
    for (auto [x, y] : alpha) words.emplace_back(vertex_of_code(x), vertex_of_code(y));
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j)
            if (word_distance(words[i].first, words[j].first) != word_distance(words[i].second, words[j].second))
                return false;
    return true;
}

std::uint64_t TreeAutTd::branch_bound(std::uint64_t first, std::size_t i) const {
    auto [img, pre] = cantor_unpair(first);
    std::size_t here = vertex_of_code(i).size();
    std::uint64_t a = ball_size(here + vertex_of_code(img).size()) - 1;
    std::uint64_t b = ball_size(here + vertex_of_code(pre).size()) - 1;
    return cantor_pair(a, b);
}

TreePtr make_tree(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "tree spec needs kind:parameter: " + spec);
    std::string kind = spec.substr(0, colon);
    std::uint64_t param = 0;
    try {
        param = std::stoull(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad tree parameter: " + spec);
    }
    if (kind == "qp") return std::make_shared<QpTree>(static_cast<unsigned>(param));
    if (kind == "td") return std::make_shared<TreeAutTd>(static_cast<unsigned>(param));
    if (kind == "sinf") return std::make_shared<SInfinityFragment>(param);
    throw Error(ErrorKind::ParseError, "unknown tree kind: " + kind);
}

// ---- codes ----

BigInt godel_code(const NString& w) {
    BigInt h = 1;
    for (std::size_t i = 0; i < w.size(); ++i) h *= boost::multiprecision::pow(BigInt(nth_prime(i)), static_cast<unsigned>(w[i] + 1));
    return h;
}

NString godel_decode(const BigInt& h) {
    if (h < 1) throw Error(ErrorKind::InvalidCode, "nonpositive code");
    NString w;
    BigInt rest = h;
    for (std::size_t i = 0; rest > 1; ++i) {
        BigInt q = nth_prime(i);
        std::uint64_t e = 0;
        while (rest % q == 0) {
            rest /= q;
            ++e;
        }
        if (e == 0) throw Error(ErrorKind::InvalidCode, "prime exponents not consecutive");
        w.push_back(e - 1);
    }
    return w;
}

BigInt strong_index(const std::set<NString>& u) {
    constexpr unsigned kMaxBit = 1u << 24;
    BigInt n = 0;
    for (const auto& eta : u) {
        BigInt h = godel_code(eta);
        if (h > kMaxBit) throw Error(ErrorKind::BudgetExceeded, "strong index of " + format_nstring(eta) + " too large");
        boost::multiprecision::bit_set(n, h.convert_to<unsigned>());
    }
    return n;
}

std::set<NString> decode_strong_index(const BigInt& n) {
    if (n < 0) throw Error(ErrorKind::InvalidCode, "negative strong index");
    std::set<NString> out;
    if (n == 0) return out;
    unsigned top = boost::multiprecision::msb(n);
    for (unsigned b = 0; b <= top; ++b)
        if (boost::multiprecision::bit_test(n, b)) out.insert(godel_decode(b));
    return out;
}

std::map<std::uint64_t, std::uint64_t> decode_pair_injection(const NString& s) {
    std::map<std::uint64_t, std::uint64_t> sigma_inv, tau_inv;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sigma_tau;
    for (std::size_t k = 0; k < s.size(); ++k) {
        auto [a, b] = cantor_unpair(s[k]);
        sigma_tau.emplace_back(a, b);
        if (!sigma_inv.emplace(a, k).second)
            throw Error(ErrorKind::NotInjective, "sigma repeats value " + std::to_string(a));
        if (!tau_inv.emplace(b, k).second)
            throw Error(ErrorKind::NotInjective, "tau repeats value " + std::to_string(b));
    }
    std::map<std::uint64_t, std::uint64_t> alpha, preimage;
    auto put = [&](std::uint64_t r, std::uint64_t v) {
        auto [it, fresh] = alpha.emplace(r, v);
        if (!fresh && it->second != v)
            throw Error(ErrorKind::InconsistentPair, std::to_string(r) + " sent to " + std::to_string(it->second) + " and " +
                                                         std::to_string(v));
        auto [jt, fresh2] = preimage.emplace(v, r);
        if (!fresh2 && jt->second != r)
            throw Error(ErrorKind::InconsistentPair, std::to_string(v) + " hit by " + std::to_string(jt->second) + " and " +
                                                         std::to_string(r));
    };
    for (std::size_t k = 0; k < sigma_tau.size(); ++k) put(k, sigma_tau[k].first);
    for (std::size_t k = 0; k < sigma_tau.size(); ++k) put(sigma_tau[k].second, k);
    return alpha;
}

// ---- code sets ----

CodeSet::CodeSet(TreePtr tree, std::set<NString> strings, bool canonical)
    : tree_(std::move(tree)), strings_(std::move(strings)), canonical_(canonical) {
    for (const auto& s : strings_) {
        if (s.empty()) throw Error(ErrorKind::InvalidArgument, "code sets hold nonempty strings");
        if (!tree_->contains(s)) throw Error(ErrorKind::InvalidArgument, format_nstring(s) + " not in " + tree_->id());
    }
}

bool CodeSet::operator==(const CodeSet& other) const {
    return tree_->id() == other.tree_->id() && strings_ == other.strings_;
}

std::vector<NString> expand_to_length(const ClcTree& tree, const NString& s, std::size_t length) {
    std::vector<NString> frontier{s};
    for (std::size_t len = s.size(); len < length; ++len) {
        std::vector<NString> next;
        for (const auto& t : frontier) {
            for (auto c : tree.successors(t)) {
                next.push_back(t);
                next.back().push_back(c);
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

CodeSet minimal_code(const CodeSet& u) {
    std::set<NString> cur = u.strings();
    for (bool changed = true; changed;) {
        changed = false;
        std::set<NString> kept;
        for (const auto& s : cur) {
            bool absorbed = false;
            for (std::size_t l = 1; l < s.size() && !absorbed; ++l)
                absorbed = cur.count(NString(s.begin(), s.begin() + static_cast<long>(l))) > 0;
            if (!absorbed) kept.insert(s);
        }
        if (kept.size() != cur.size()) changed = true;
        cur = std::move(kept);

        std::map<NString, std::set<std::uint64_t>> families;
        for (const auto& s : cur)
            if (s.size() >= 2) families[NString(s.begin(), s.end() - 1)].insert(s.back());
        for (const auto& [parent, children] : families) {
            auto succ = u.tree()->successors(parent);
            bool complete = std::all_of(succ.begin(), succ.end(), [&](auto c) { return children.count(c) > 0; });
            if (!complete) continue;
            for (auto c : succ) {
                NString child = parent;
                child.push_back(c);
                cur.erase(child);
            }
            cur.insert(parent);
            changed = true;
        }
    }
    return CodeSet(u.tree(), std::move(cur), true);
}

CodeSet cone_union(const CodeSet& u, const CodeSet& w) {
    require_same_tree(u, w);
    std::set<NString> all = u.strings();
    all.insert(w.strings().begin(), w.strings().end());
    return minimal_code(CodeSet(u.tree(), std::move(all)));
}

CodeSet cone_intersect(const CodeSet& u, const CodeSet& w) {
    require_same_tree(u, w);
    std::set<NString> out;
    for (const auto& a : u.strings())
        for (const auto& b : w.strings())
            if (comparable(a, b)) out.insert(a.size() >= b.size() ? a : b);
    return minimal_code(CodeSet(u.tree(), std::move(out)));
}

bool cone_subset(const CodeSet& u, const CodeSet& w) {
    require_same_tree(u, w);
    std::size_t depth = 0;
    for (const auto& g : w.strings()) depth = std::max(depth, g.size());
    for (const auto& a : u.strings()) {
        if (has_prefix_in(w.strings(), a)) continue;
        if (a.size() >= depth) return false;
        for (const auto& b : expand_to_length(*u.tree(), a, depth))
            if (!has_prefix_in(w.strings(), b)) return false;
    }
    return true;
}

// ---- text syntax ----

std::string format_nstring(const NString& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ']';
    return os.str();
}

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek(char c) {
        skip();
        return pos < text.size() && text[pos] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw Error(ErrorKind::ParseError, what + " at offset " + std::to_string(pos) + " in \"" + text + "\"");
    }
    std::uint64_t number() {
        skip();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected a natural number");
        return std::stoull(text.substr(start, pos - start));
    }
    NString nstring() {
        NString s;
        expect('[');
        if (peek(']')) {
            ++pos;
            return s;
        }
        s.push_back(number());
        while (peek(',')) {
            ++pos;
            s.push_back(number());
        }
        expect(']');
        return s;
    }
    void finish() {
        skip();
        if (pos != text.size()) fail("trailing input");
    }
};

}  // namespace

NString parse_nstring(const std::string& text) {
    Cursor c{text};
    NString s = c.nstring();
    c.finish();
    return s;
}

std::string format_codeset(const CodeSet& u) {
    std::string out = "{";
    bool first = true;
    for (const auto& s : u.strings()) {
        out += (first ? "" : ";") + format_nstring(s);
        first = false;
    }
    return out + "}";
}

CodeSet parse_codeset(TreePtr tree, const std::string& text) {
    Cursor c{text};
    std::set<NString> strings;
    c.expect('{');
    if (!c.peek('}')) {
        strings.insert(c.nstring());
        while (c.peek(';')) {
            ++c.pos;
            strings.insert(c.nstring());
        }
    }
    c.expect('}');
    c.finish();
    return CodeSet(std::move(tree), std::move(strings));
}

}  // namespace tdlc
