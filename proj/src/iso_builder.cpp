#include "tdlc/iso_builder.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

Handle SubgroupChain::at(std::int64_t r) const {
    auto it = levels.find(r);
    if (it == levels.end()) throw Error(ErrorKind::NotFound, "chain has no level " + std::to_string(r));
    return it->second;
}

std::optional<std::int64_t> SubgroupChain::level_of(Handle h) const {
    for (const auto& [r, u] : levels)
        if (u == h) return r;
    return std::nullopt;
}

std::optional<Handle> IsoTable::image(const ZQpCoset& c) const {
    auto it = map.find(c);
    if (it == map.end()) return std::nullopt;
    return it->second;
}

// ---- chain ----

SubgroupChain locate_chain(const MeetGroupoidOracle& o, Handle anchor, unsigned p) {
    if (anchor == kEmpty || !is_idempotent(o, anchor))
        throw Error(ErrorKind::InvalidArgument, "anchor " + o.describe(anchor) + " is not a subgroup");
    auto subs = subgroups(o);
    SubgroupChain chain;
    chain.levels[0] = anchor;
    auto step = [&](Handle cur, bool up) -> std::optional<Handle> {
        std::vector<Handle> found;
        for (Handle v : subs) {
            if (v == cur) continue;
            bool nested = up ? is_subset(o, v, cur) : is_subset(o, cur, v);
            if (nested && (up ? o.index(cur, v) : o.index(v, cur)) == p) found.push_back(v);
        }
        if (found.size() > 1)
            throw Error(ErrorKind::NotUnique, std::to_string(found.size()) + " subgroups of index " + std::to_string(p) +
                                                  (up ? " inside " : " above ") + o.describe(cur));
        if (found.empty()) return std::nullopt;
        return found.front();
    };
    for (std::int64_t r = 0;; ++r) {
        auto next = step(chain.levels[r], true);
        if (!next) break;
        chain.levels[r + 1] = *next;
    }
    for (std::int64_t r = 0;; --r) {
        auto next = step(chain.levels[r], false);
        if (!next) break;
        chain.levels[r - 1] = *next;
    }
    if (chain.levels.size() < 2)
        throw Error(ErrorKind::NotFound, "no subgroup of index " + std::to_string(p) + " next to " + o.describe(anchor));
    return chain;
}

namespace {

std::int64_t level_of_left_coset(const MeetGroupoidOracle& o, const SubgroupChain& chain, Handle b) {
    auto r = chain.level_of(target(o, b));
    if (!r) throw Error(ErrorKind::InvalidArgument, o.describe(b) + " is not a left coset of a chain subgroup");
    return *r;
}

}  // namespace

Handle definable_shift(const MeetGroupoidOracle& o, const SubgroupChain& chain, Handle b) {
    std::int64_t r = level_of_left_coset(o, chain, b);
    if (!chain.has(r + 1)) throw Error(ErrorKind::NotFound, "no chain level above " + std::to_string(r));
    unsigned p = static_cast<unsigned>(o.index(chain.at(r), chain.at(r + 1)));
    for (Handle d : left_cosets(o, chain.at(r + 1))) {
        if (!is_subset(o, d, b)) continue;
        if (auto c = power(o, d, p)) return *c;
    }
    throw Error(ErrorKind::NotFound, "no root witness for the shift of " + o.describe(b));
}

Handle definable_unshift(const MeetGroupoidOracle& o, const SubgroupChain& chain, Handle c) {
    std::int64_t r = level_of_left_coset(o, chain, c);
    if (!chain.has(r - 1)) throw Error(ErrorKind::NotFound, "no chain level below " + std::to_string(r));
    unsigned p = static_cast<unsigned>(o.index(chain.at(r - 1), chain.at(r)));
    for (Handle d : left_cosets(o, chain.at(r))) {
        auto dp = power(o, d, p);
        if (!dp || *dp != c) continue;
        for (Handle b : left_cosets(o, chain.at(r - 1)))
            if (is_subset(o, d, b)) return b;
    }
    throw Error(ErrorKind::NotFound, "no p-th root of " + o.describe(c) + " in the window");
}

// ---- sub-oracle ----

SubOracle::SubOracle(const MeetGroupoidOracle& base, std::vector<Handle> keep) : base_(base), keep_(std::move(keep)) {}

SubOracle two_sided_part(const MeetGroupoidOracle& o) {
    std::vector<Handle> keep;
    for (Handle a : o.elements()) {
        ProdResult l = o.prod(o.inv(a), a), r = o.prod(a, o.inv(a));
        if (l.defined() && r.defined() && l.value == r.value) keep.push_back(a);
    }
    return SubOracle(o, std::move(keep));
}

// ---- builders ----

namespace {

SubgroupChain recentre(const SubgroupChain& c) {
    std::int64_t centre = c.lo() + (c.hi() - c.lo()) / 2;
    SubgroupChain out;
    for (const auto& [r, h] : c.levels) out.levels[r - centre] = h;
    return out;
}

std::uint64_t upow(unsigned p, unsigned m) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < m; ++i) out *= p;
    return out;
}

}  // namespace

IsoTable build_iso_qp(const MeetGroupoidOracle& o, unsigned p) {
    Handle anchor = kEmpty;
    for (Handle a : o.elements())
        if (is_idempotent(o, a)) {
            anchor = a;
            break;
        }
    if (anchor == kEmpty) throw Error(ErrorKind::NotFound, "oracle has no subgroup");

    IsoTable t;
    t.p = p;
    t.abelian = true;
    t.chain = recentre(locate_chain(o, anchor, p));
    Handle u0 = t.chain.at(0);

    std::vector<Handle> l0;
    for (Handle d : left_cosets(o, u0)) {
        ProdResult s = o.prod(d, o.inv(d));
        if (s.defined() && s.value == u0) l0.push_back(d);
    }

    // p-th root tower: tower[m-1] has order p^m
    std::vector<Handle> tower;
    Handle below = u0;
    while (tower.size() < 62) {
        auto it = std::find_if(l0.begin(), l0.end(), [&](Handle d) {
            if (d == u0) return false;
            auto dp = power(o, d, p);
            return dp && *dp == below;
        });
        if (it == l0.end()) break;
        tower.push_back(*it);
        below = *it;
    }
    if (tower.empty()) throw Error(ErrorKind::NotFound, "no element of order " + std::to_string(p) + " among cosets of " + o.describe(u0));

    unsigned max_m = static_cast<unsigned>(tower.size()) - 1;
    t.safe = {t.chain.lo(), t.chain.hi(), max_m};

    std::map<PruferElement, Handle> level0{{PruferElement{}, u0}};
    for (unsigned m = 1; m <= tower.size(); ++m) {
        std::uint64_t n = upow(p, m);
        for (std::uint64_t k = 1; k < n; ++k) {
            if (k % p == 0) continue;
            auto v = power(o, tower[m - 1], k);
            if (!v) throw Error(ErrorKind::NotFound, "power " + std::to_string(k) + " of " + o.describe(tower[m - 1]) + " undefined");
            level0[prufer_make(p, k, m)] = *v;
        }
    }
    std::set<Handle> seen;
    for (const auto& [a, h] : level0) {
        if (!seen.insert(h).second) throw Error(ErrorKind::NotInjective, "two powers of the root tower coincide at " + o.describe(h));
    }

    for (const auto& [a, h0] : level0) {
        if (a.m > max_m) continue;
        t.map[{0, 0, a}] = h0;
        Handle cur = h0;
        for (std::int64_t r = 1; r <= t.chain.hi(); ++r) {
            cur = definable_shift(o, t.chain, cur);
            t.map[{0, r, a}] = cur;
        }
        cur = h0;
        for (std::int64_t r = -1; r >= t.chain.lo(); --r) {
            cur = definable_unshift(o, t.chain, cur);
            t.map[{0, r, a}] = cur;
        }
    }
    return t;
}

IsoTable build_iso_zqp(const MeetGroupoidOracle& o, unsigned p) {
    SubOracle w = two_sided_part(o);
    IsoTable t = build_iso_qp(w, p);
    t.abelian = false;
    std::int64_t lo = t.chain.lo(), hi = t.chain.hi();

    std::map<Handle, std::pair<Handle, Handle>> ends;  // element -> (source, target)
    for (Handle a : o.elements()) {
        ProdResult s = o.prod(a, o.inv(a)), g = o.prod(o.inv(a), a);
        if (s.defined() && g.defined()) ends[a] = {s.value, g.value};
    }
    auto arrow = [&](Handle a, Handle from, Handle to) {
        auto it = ends.find(a);
        return it != ends.end() && it->second.first == from && it->second.second == to;
    };

    // F_r : U_{r+1} -> U_r, nested downward from the top level; upward nesting
    // can run out of roots inside a finite window.
    std::optional<Handle> top;
    for (Handle a : o.elements())
        if (arrow(a, t.chain.at(hi), t.chain.at(hi - 1))) {
            top = a;
            break;
        }
    if (!top) throw Error(ErrorKind::NotFound, "no coset from " + o.describe(t.chain.at(hi)) + " to " + o.describe(t.chain.at(hi - 1)));
    t.f_chain[hi - 1] = *top;
    for (std::int64_t r = hi - 2; r >= lo; --r) {
        Handle inner = t.f_chain[r + 1];
        std::optional<Handle> f;
        for (Handle a : o.elements())
            if (arrow(a, t.chain.at(r + 1), t.chain.at(r)) && is_subset(o, inner, a)) {
                f = a;
                break;
            }
        if (!f) throw Error(ErrorKind::NestedChoiceFailed, "no coset from level " + std::to_string(r + 1) + " to " + std::to_string(r) +
                                                               " contains " + o.describe(inner));
        t.f_chain[r] = *f;
    }

    auto must = [&](ProdResult r, const std::string& what) {
        if (!r.defined()) throw Error(ErrorKind::NotFound, what + " undefined in the oracle");
        return r.value;
    };
    // image of E(z, r, 0)
    std::map<std::pair<std::int64_t, std::int64_t>, Handle> e0;
    for (std::int64_t r = lo; r <= hi; ++r)
        for (std::int64_t z = r - hi; z <= r - lo; ++z) {
            if (z == 0) {
                e0[{z, r}] = t.chain.at(r);
            } else if (z < 0) {
                Handle acc = t.f_chain.at(r - z - 1);
                for (std::int64_t s = r - z - 2; s >= r; --s) acc = must(o.prod(acc, t.f_chain.at(s)), "F-chain product");
                e0[{z, r}] = acc;
            }
        }
    for (std::int64_t r = lo; r <= hi; ++r)
        for (std::int64_t z = 1; z <= r - lo; ++z) e0[{z, r}] = o.inv(e0.at({-z, r - z}));

    std::map<ZQpCoset, Handle> ds = t.map;
    for (const auto& [zr, e] : e0) {
        auto [z, r] = zr;
        if (z == 0) continue;
        for (const auto& [c, d] : ds) {
            if (c.r != r) continue;
            t.map[{z, r, c.a}] = must(o.prod(e, d), "E·D product");
        }
    }
    return t;
}

// ---- verification ----

std::string IsoReport::summary() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " entries=" << entries << " checks=" << checks;
    for (const auto& f : failures) os << "\n  " << f;
    return os.str();
}

IsoReport verify_iso(const IsoTable& table, const CosetWindow& source, const MeetGroupoidOracle& oracle) {
    IsoReport rep;
    const std::size_t max_failures = 8;
    auto fail = [&](const std::string& what) {
        rep.passed = false;
        if (rep.failures.size() < max_failures) rep.failures.push_back(what);
    };
    unsigned p = source.prime();

    // forward map on source handles
    std::vector<Handle> fwd(source.size() + 1, kEmpty);
    std::vector<Handle> dom;
    std::map<Handle, Handle> back;
    for (const auto& [c, h] : table.map) {
        auto sh = source.find(c);
        if (!sh) continue;
        fwd[*sh] = h;
        dom.push_back(*sh);
        auto [it, fresh] = back.emplace(h, *sh);
        if (!fresh) fail("not injective: " + source.describe(it->second) + " and " + source.describe(*sh) + " both map to " + oracle.describe(h));
    }
    rep.entries = dom.size();
    for (Handle a : source.elements())
        if (table.safe.contains(source.coset(a)) && fwd[a] == kEmpty) fail("not total: " + source.describe(a) + " is missing");

    auto img = [&](Handle a) { return a == kEmpty ? kEmpty : fwd[a]; };
    for (Handle a : dom) {
        ++rep.checks;
        Handle ia = source.inv(a);
        if (img(ia) != kEmpty && oracle.inv(fwd[a]) != img(ia)) fail("inverse of " + source.describe(a));
        for (Handle b : dom) {
            ++rep.checks;
            ProdResult s = source.prod(a, b);
            ProdResult t = oracle.prod(fwd[a], fwd[b]);
            if (s.status == ProdStatus::Undefined && t.status != ProdStatus::Undefined) {
                fail("product " + source.describe(a) + "·" + source.describe(b) + " undefined but its image is defined");
            } else if (s.defined() && img(s.value) != kEmpty && (!t.defined() || t.value != img(s.value))) {
                fail("product " + source.describe(a) + "·" + source.describe(b) + " = " + source.describe(s.value) + " not preserved");
            }
            Handle m = source.meet(a, b);
            if (m == kEmpty || img(m) != kEmpty) {
                if (oracle.meet(fwd[a], fwd[b]) != img(m)) fail("meet of " + source.describe(a) + " and " + source.describe(b));
            }
        }
    }
    for (Handle u : subgroups(source)) {
        if (img(u) == kEmpty) continue;
        for (Handle v : subgroups(source))
            if (img(v) != kEmpty && source.index(u, v) != oracle.index(img(u), img(v)))
                fail("index of " + source.describe(u) + " in " + source.describe(v));
    }

    // surjectivity onto the oracle's copy of the safe window
    std::set<Handle> hit;
    for (Handle a : dom) hit.insert(fwd[a]);
    std::uint64_t bound = 1;
    for (unsigned i = 0; i < table.safe.max_m; ++i) bound *= p;
    for (Handle b : oracle.elements()) {
        ProdResult sr = oracle.prod(b, oracle.inv(b)), tr = oracle.prod(oracle.inv(b), b);
        if (!sr.defined() || !tr.defined()) continue;
        auto s = table.chain.level_of(sr.value), t = table.chain.level_of(tr.value);
        if (!s || !t) continue;
        std::int64_t z = *t - *s, r = *t;
        if (r < table.safe.r_lo || r > table.safe.r_hi || *s < table.safe.r_lo || *s > table.safe.r_hi) continue;
        Handle n = b;
        if (z != 0) {
            auto e = table.image({z, r, {}});
            if (!e) {
                fail("no image for E(" + std::to_string(z) + "," + std::to_string(r) + ",0)");
                continue;
            }
            ProdResult q = oracle.prod(oracle.inv(*e), b);
            if (!q.defined()) {
                fail("cannot normalise " + oracle.describe(b));
                continue;
            }
            n = q.value;
        }
        Handle u = table.chain.at(r);
        Handle acc = n;
        std::uint64_t order = 1;
        while (acc != u && order <= bound) {
            ProdResult q = oracle.prod(acc, n);
            if (!q.defined()) break;
            acc = q.value;
            ++order;
        }
        ++rep.checks;
        if (acc == u && order <= bound && !hit.count(b)) fail("not onto: " + oracle.describe(b) + " has no preimage");
    }
    (void)p;
    return rep;
}

}  // namespace tdlc
