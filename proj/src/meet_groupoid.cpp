#include "tdlc/meet_groupoid.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tdlc/error.hpp"

namespace tdlc {

std::string MeetGroupoidOracle::describe(Handle a) const { return a == kEmpty ? "EMPTY" : "#" + std::to_string(a); }

// ---- table oracle ----

TableGroupoid::TableGroupoid(std::size_t n)
    : n_(n),
      prod_((n + 1) * (n + 1), -1),
      inv_(n + 1, kEmpty),
      meet_((n + 1) * (n + 1), kEmpty),
      index_((n + 1) * (n + 1), 0),
      boundary_(n + 1, false),
      labels_(n + 1) {
    prod_[slot(kEmpty, kEmpty)] = kEmpty;
}

void TableGroupoid::check(Handle a) const {
    if (a > n_) throw Error(ErrorKind::InvalidArgument, "handle " + std::to_string(a) + " out of range");
}

std::vector<Handle> TableGroupoid::elements() const {
    std::vector<Handle> out;
    for (Handle a = 1; a <= n_; ++a) out.push_back(a);
    return out;
}

ProdResult TableGroupoid::prod(Handle a, Handle b) const {
    check(a);
    check(b);
    std::int64_t v = prod_[slot(a, b)];
    if (v == -1) return {ProdStatus::Undefined, kEmpty};
    if (v == -2) return {ProdStatus::Overflow, kEmpty};
    return {ProdStatus::Defined, static_cast<Handle>(v)};
}

Handle TableGroupoid::inv(Handle a) const {
    check(a);
    return inv_[a];
}

Handle TableGroupoid::meet(Handle a, Handle b) const {
    check(a);
    check(b);
    return meet_[slot(a, b)];
}

std::uint64_t TableGroupoid::index(Handle u, Handle v) const {
    check(u);
    check(v);
    return index_[slot(u, v)];
}

bool TableGroupoid::boundary_flag(Handle a) const {
    check(a);
    return boundary_[a];
}

std::string TableGroupoid::describe(Handle a) const {
    check(a);
    return labels_[a].empty() ? MeetGroupoidOracle::describe(a) : labels_[a];
}

void TableGroupoid::set_prod(Handle a, Handle b, ProdResult r) {
    check(a);
    check(b);
    std::int64_t v = -1;
    if (r.status == ProdStatus::Defined) v = r.value;
    else if (r.status == ProdStatus::Overflow) v = -2;
    prod_[slot(a, b)] = v;
}

void TableGroupoid::set_inv(Handle a, Handle b) {
    check(a);
    inv_[a] = b;
}

void TableGroupoid::set_meet(Handle a, Handle b, Handle c) {
    check(a);
    check(b);
    meet_[slot(a, b)] = c;
    meet_[slot(b, a)] = c;
}

void TableGroupoid::set_index(Handle u, Handle v, std::uint64_t k) {
    check(u);
    check(v);
    index_[slot(u, v)] = k;
}

void TableGroupoid::set_boundary(Handle a, bool flag) {
    check(a);
    boundary_[a] = flag;
}

void TableGroupoid::set_label(Handle a, std::string label) {
    check(a);
    labels_[a] = std::move(label);
}

TableGroupoid TableGroupoid::materialize(const MeetGroupoidOracle& source) {
    auto elems = source.elements();
    std::map<Handle, Handle> renum{{kEmpty, kEmpty}};
    for (std::size_t i = 0; i < elems.size(); ++i) renum[elems[i]] = static_cast<Handle>(i + 1);
    auto to_new = [&](Handle h) {
        auto it = renum.find(h);
        if (it == renum.end()) throw Error(ErrorKind::InvalidArgument, "oracle result outside its element list");
        return it->second;
    };
    TableGroupoid t(elems.size());
    std::vector<Handle> all{kEmpty};
    all.insert(all.end(), elems.begin(), elems.end());
    for (Handle a : all) {
        Handle na = to_new(a);
        t.set_inv(na, to_new(source.inv(a)));
        if (a != kEmpty) {
            t.set_boundary(na, source.boundary_flag(a));
            t.set_label(na, source.describe(a));
        }
        for (Handle b : all) {
            Handle nb = to_new(b);
            ProdResult r = source.prod(a, b);
            if (r.defined()) r.value = to_new(r.value);
            t.set_prod(na, nb, r);
            t.meet_[t.slot(na, nb)] = to_new(source.meet(a, b));
        }
    }
    auto subs = subgroups(source);
    for (Handle u : subs)
        for (Handle v : subs) t.set_index(to_new(u), to_new(v), source.index(u, v));
    return t;
}

TableGroupoid TableGroupoid::without(Handle victim) const {
    check(victim);
    if (victim == kEmpty) throw Error(ErrorKind::InvalidArgument, "cannot drop the empty set");
    auto shift = [&](Handle h) -> Handle { return h > victim ? h - 1 : h; };
    TableGroupoid t(n_ - 1);
    for (Handle a = 0; a <= n_; ++a) {
        if (a == victim) continue;
        Handle na = shift(a);
        t.inv_[na] = inv_[a] == victim ? kEmpty : shift(inv_[a]);
        t.boundary_[na] = boundary_[a];
        t.labels_[na] = labels_[a];
        for (Handle b = 0; b <= n_; ++b) {
            if (b == victim) continue;
            Handle nb = shift(b);
            std::int64_t v = prod_[slot(a, b)];
            t.prod_[t.slot(na, nb)] = v == victim ? -1 : (v >= 0 ? shift(static_cast<Handle>(v)) : v);
            Handle m = meet_[slot(a, b)];
            t.meet_[t.slot(na, nb)] = m == victim ? kEmpty : shift(m);
            t.index_[t.slot(na, nb)] = index_[slot(a, b)];
        }
    }
    return t;
}

TableGroupoid TableGroupoid::with_duplicate(Handle original) const {
    check(original);
    Handle copy = static_cast<Handle>(n_ + 1);
    TableGroupoid t(n_ + 1);
    for (Handle a = 0; a <= n_ + 1; ++a) {
        Handle sa = a == copy ? original : a;
        t.inv_[a] = a == copy && inv_[sa] == original ? copy : inv_[sa];
        t.boundary_[a] = boundary_[sa];
        t.labels_[a] = a == copy ? labels_[sa] + "'" : labels_[sa];
        for (Handle b = 0; b <= n_ + 1; ++b) {
            Handle sb = b == copy ? original : b;
            std::int64_t v = prod_[slot(sa, sb)];
            if (v == original && (a == copy || b == copy)) v = copy;
            t.prod_[t.slot(a, b)] = v;
            Handle m = meet_[slot(sa, sb)];
            if (m == original && (a == copy || b == copy)) m = copy;
            if (a == copy && b == original) m = original;
            if (a == original && b == copy) m = original;
            t.meet_[t.slot(a, b)] = m;
            t.index_[t.slot(a, b)] = index_[slot(sa, sb)];
        }
    }
    return t;
}

// ---- finite groups ----

TableGroupoid coset_groupoid(const std::vector<std::vector<std::size_t>>& mult) {
    std::size_t n = mult.size();
    std::vector<std::size_t> inverse(n);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h)
            if (mult[g][h] == 0) inverse[g] = h;

    auto is_subgroup = [&](std::uint64_t mask) {
        if (!(mask & 1)) return false;
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t h = 0; h < n; ++h)
                if ((mask >> g & 1) && (mask >> h & 1) && !(mask >> mult[g][h] & 1)) return false;
        return true;
    };
    auto translate = [&](std::uint64_t mask, std::size_t g, bool left) {
        std::uint64_t out = 0;
        for (std::size_t h = 0; h < n; ++h)
            if (mask >> h & 1) out |= std::uint64_t{1} << (left ? mult[g][h] : mult[h][g]);
        return out;
    };
    if (n > 20) throw Error(ErrorKind::InvalidArgument, "finite group too large for subset enumeration");
    std::vector<std::uint64_t> subs;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask)
        if (is_subgroup(mask)) subs.push_back(mask);
    std::set<std::uint64_t> cosets;
    for (auto s : subs)
        for (std::size_t g = 0; g < n; ++g) cosets.insert(translate(s, g, true));
    std::vector<std::uint64_t> elems(cosets.begin(), cosets.end());
    std::map<std::uint64_t, Handle> handle{{0, kEmpty}};
    for (std::size_t i = 0; i < elems.size(); ++i) handle[elems[i]] = static_cast<Handle>(i + 1);
    std::set<std::uint64_t> sub_set(subs.begin(), subs.end());

    auto left_subgroup = [&](std::uint64_t a) {  // A = xW, returns W = A^{-1}A
        std::size_t x = static_cast<std::size_t>(__builtin_ctzll(a));
        return translate(a, inverse[x], true);
    };
    auto right_subgroup = [&](std::uint64_t a) {  // A = Wy, returns W = AA^{-1}
        std::size_t y = static_cast<std::size_t>(__builtin_ctzll(a));
        return translate(a, inverse[y], false);
    };
    auto setprod = [&](std::uint64_t a, std::uint64_t b) {
        std::uint64_t out = 0;
        for (std::size_t g = 0; g < n; ++g)
            if (a >> g & 1)
                for (std::size_t h = 0; h < n; ++h)
                    if (b >> h & 1) out |= std::uint64_t{1} << mult[g][h];
        return out;
    };
    auto setinv = [&](std::uint64_t a) {
        std::uint64_t out = 0;
        for (std::size_t g = 0; g < n; ++g)
            if (a >> g & 1) out |= std::uint64_t{1} << inverse[g];
        return out;
    };

    TableGroupoid t(elems.size());
    for (auto a : elems) {
        Handle ha = handle[a];
        t.set_inv(ha, handle.at(setinv(a)));
        std::string label = "{";
        for (std::size_t g = 0; g < n; ++g)
            if (a >> g & 1) label += (label.size() > 1 ? "," : "") + std::to_string(g);
        t.set_label(ha, label + "}");
        for (auto b : elems) {
            Handle hb = handle[b];
            if (left_subgroup(a) == right_subgroup(b)) t.set_prod(ha, hb, {ProdStatus::Defined, handle.at(setprod(a, b))});
            t.set_meet(ha, hb, handle.at(a & b));
        }
    }
    for (auto u : subs)
        for (auto v : subs)
            t.set_index(handle[u], handle[v],
                        static_cast<std::uint64_t>(__builtin_popcountll(u) / __builtin_popcountll(u & v)));
    return t;
}

// ---- derived notions ----

bool is_idempotent(const MeetGroupoidOracle& o, Handle a) {
    if (a == kEmpty) throw Error(ErrorKind::InvalidArgument, "idempotence is asked of nonempty elements");
    ProdResult r = o.prod(a, a);
    return r.defined() && r.value == a;
}

namespace {

Handle defined_prod(const MeetGroupoidOracle& o, Handle a, Handle b, const char* what) {
    ProdResult r = o.prod(a, b);
    if (r.status == ProdStatus::Overflow) throw Error(ErrorKind::WindowOverflow, what);
    if (!r.defined()) throw Error(ErrorKind::Undefined, what);
    return r.value;
}

}  // namespace

Handle source(const MeetGroupoidOracle& o, Handle a) {
    if (a == kEmpty) throw Error(ErrorKind::InvalidArgument, "source of the empty set");
    return defined_prod(o, a, o.inv(a), "A·A^-1");
}

Handle target(const MeetGroupoidOracle& o, Handle a) {
    if (a == kEmpty) throw Error(ErrorKind::InvalidArgument, "target of the empty set");
    return defined_prod(o, o.inv(a), a, "A^-1·A");
}

bool is_subset(const MeetGroupoidOracle& o, Handle a, Handle b) { return o.meet(a, b) == a; }

std::vector<Handle> subgroups(const MeetGroupoidOracle& o) {
    std::vector<Handle> out;
    for (Handle a : o.elements())
        if (is_idempotent(o, a)) out.push_back(a);
    return out;
}

std::vector<Handle> left_cosets(const MeetGroupoidOracle& o, Handle u) {
    std::vector<Handle> out;
    for (Handle a : o.elements()) {
        ProdResult r = o.prod(a, u);
        if (r.defined() && r.value == a) out.push_back(a);
    }
    return out;
}

std::vector<Handle> right_cosets(const MeetGroupoidOracle& o, Handle u) {
    std::vector<Handle> out;
    for (Handle a : o.elements()) {
        ProdResult r = o.prod(u, a);
        if (r.defined() && r.value == a) out.push_back(a);
    }
    return out;
}

std::optional<Handle> power(const MeetGroupoidOracle& o, Handle a, std::uint64_t k) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "power needs k >= 1");
    Handle acc = a;
    for (std::uint64_t i = 1; i < k; ++i) {
        ProdResult r = o.prod(acc, a);
        if (!r.defined()) return std::nullopt;
        acc = r.value;
    }
    return acc;
}

// ---- axioms ----

std::string AxiomReport::summary() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " checks=" << checks << " skipped_overflow=" << skipped_overflow
       << (complete ? "" : " (budget exhausted)");
    for (const auto& f : failures) os << "\n  (" << f.axiom << ") " << f.witness;
    return os.str();
}

namespace {

class AxiomRun {
public:
    AxiomRun(const MeetGroupoidOracle& o, std::uint64_t budget, std::size_t max_failures)
        : o_(o), budget_(budget), max_failures_(max_failures), elems_(o.elements()) {}

    AxiomReport run() {
        empty_laws();
        if (keep_going()) inverse_laws();
        if (keep_going()) cancellation();
        if (keep_going()) associativity();
        if (keep_going()) idempotent_meets();
        if (keep_going()) semilattice();
        if (keep_going()) inversion_order();
        if (keep_going()) exchange();
        report_.passed = report_.failures.empty();
        return report_;
    }

private:
    bool keep_going() const { return report_.failures.size() < max_failures_ && report_.complete; }

    bool tick() {
        if (++report_.checks > budget_) report_.complete = false;
        return report_.complete;
    }

    void fail(const std::string& axiom, const std::string& witness) {
        if (report_.failures.size() < max_failures_) report_.failures.push_back({axiom, witness});
    }

    std::string d(Handle h) const { return o_.describe(h); }

    void empty_laws() {
        tick();
        if (o_.inv(kEmpty) != kEmpty) fail("d", "inverse of EMPTY is " + d(o_.inv(kEmpty)));
        ProdResult ee = o_.prod(kEmpty, kEmpty);
        if (!ee.defined() || ee.value != kEmpty) fail("d", "EMPTY·EMPTY is not EMPTY");
        for (Handle a : elems_) {
            if (!tick()) return;
            if (o_.prod(kEmpty, a).status != ProdStatus::Undefined) fail("d", "EMPTY·" + d(a) + " is defined");
            if (o_.prod(a, kEmpty).status != ProdStatus::Undefined) fail("d", d(a) + "·EMPTY is defined");
            if (o_.meet(kEmpty, a) != kEmpty) fail("d", "EMPTY is not below " + d(a));
        }
    }

    void inverse_laws() {
        for (Handle a : elems_) {
            if (!tick()) return;
            Handle ai = o_.inv(a);
            if (ai == kEmpty) {
                fail("b", "inverse of " + d(a) + " is EMPTY");
                continue;
            }
            if (o_.inv(ai) != a) fail("b", "inverse of inverse of " + d(a) + " is " + d(o_.inv(ai)));
            for (auto [x, y] : {std::pair{a, ai}, std::pair{ai, a}}) {
                ProdResult r = o_.prod(x, y);
                if (r.status == ProdStatus::Overflow) ++report_.skipped_overflow;
                else if (!r.defined()) fail("b", d(x) + "·" + d(y) + " undefined");
            }
        }
    }

    void cancellation() {
        for (Handle a : elems_)
            for (Handle b : elems_) {
                if (!tick()) return;
                ProdResult ab = o_.prod(a, b);
                if (!ab.defined()) continue;
                ProdResult back = o_.prod(ab.value, o_.inv(b));
                ProdResult front = o_.prod(o_.inv(a), ab.value);
                if (back.status == ProdStatus::Overflow || front.status == ProdStatus::Overflow) {
                    ++report_.skipped_overflow;
                    continue;
                }
                if (!back.defined() || back.value != a) fail("c", d(a) + "·" + d(b) + "·inv(" + d(b) + ") != " + d(a));
                if (!front.defined() || front.value != b) fail("c", "inv(" + d(a) + ")·" + d(a) + "·" + d(b) + " != " + d(b));
            }
    }

    void associativity() {
        for (Handle a : elems_)
            for (Handle b : elems_) {
                ProdResult ab = o_.prod(a, b);
                if (ab.status == ProdStatus::Overflow) continue;
                for (Handle c : elems_) {
                    if (!tick()) return;
                    ProdResult bc = o_.prod(b, c);
                    if (!ab.defined() && !bc.defined()) continue;
                    if (bc.status == ProdStatus::Overflow) continue;
                    ProdResult left = ab.defined() ? o_.prod(ab.value, c) : ProdResult{};
                    ProdResult right = bc.defined() ? o_.prod(a, bc.value) : ProdResult{};
                    if (left.status == ProdStatus::Overflow || right.status == ProdStatus::Overflow) {
                        ++report_.skipped_overflow;
                        continue;
                    }
                    if (left.defined() != right.defined() || (left.defined() && left.value != right.value))
                        fail("a", "(" + d(a) + "·" + d(b) + ")·" + d(c) + " vs " + d(a) + "·(" + d(b) + "·" + d(c) + ")");
                }
            }
    }

    void idempotent_meets() {
        std::vector<Handle> subs;
        for (Handle a : elems_) {
            ProdResult r = o_.prod(a, a);
            if (r.defined() && r.value == a) subs.push_back(a);
        }
        for (Handle u : subs)
            for (Handle v : subs) {
                if (!tick()) return;
                if (o_.meet(u, v) == kEmpty) fail("e", d(u) + " ∩ " + d(v) + " is EMPTY");
            }
    }

    void semilattice() {
        for (Handle a : elems_) {
            if (!tick()) return;
            if (o_.meet(a, a) != a) fail("s", d(a) + " ∩ itself != itself");
            for (Handle b : elems_) {
                if (!tick()) return;
                Handle m = o_.meet(a, b);
                if (m != o_.meet(b, a)) fail("s", "meet of " + d(a) + ", " + d(b) + " not commutative");
                if (m != kEmpty && (o_.meet(m, a) != m || o_.meet(m, b) != m))
                    fail("s", "meet of " + d(a) + ", " + d(b) + " is not below both");
            }
        }
        for (Handle a : elems_)
            for (Handle b : elems_) {
                Handle ab = o_.meet(a, b);
                for (Handle c : elems_) {
                    if (!tick()) return;
                    if (o_.meet(ab, c) != o_.meet(a, o_.meet(b, c)))
                        fail("s", "meet not associative on " + d(a) + ", " + d(b) + ", " + d(c));
                }
            }
    }

    void inversion_order() {
        for (Handle a : elems_)
            for (Handle b : elems_) {
                if (!tick()) return;
                bool sub = o_.meet(a, b) == a;
                bool sub_inv = o_.meet(o_.inv(a), o_.inv(b)) == o_.inv(a);
                if (sub != sub_inv) fail("f", d(a) + " ⊆ " + d(b) + " is " + (sub ? "true" : "false") + " but not for inverses");
            }
    }

    void exchange() {
        std::map<Handle, std::vector<Handle>> overlapping;
        std::map<Handle, std::vector<Handle>> right_partners;
        for (Handle a : elems_)
            for (Handle b : elems_) {
                if (o_.meet(a, b) != kEmpty) overlapping[a].push_back(b);
                if (o_.prod(a, b).defined()) right_partners[a].push_back(b);
            }
        for (Handle a0 : elems_)
            for (Handle a1 : overlapping[a0]) {
                Handle am = o_.meet(a0, a1);
                for (Handle b0 : right_partners[a0]) {
                    Handle p0 = o_.prod(a0, b0).value;
                    for (Handle b1 : overlapping[b0]) {
                        if (!tick()) return;
                        ProdResult p1 = o_.prod(a1, b1);
                        if (!p1.defined()) continue;
                        Handle bm = o_.meet(b0, b1);
                        ProdResult lhs = o_.prod(am, bm);
                        if (lhs.status == ProdStatus::Overflow) {
                            ++report_.skipped_overflow;
                            continue;
                        }
                        Handle rhs = o_.meet(p0, p1.value);
                        if (!lhs.defined() || lhs.value != rhs)
                            fail("g", "(" + d(a0) + "∩" + d(a1) + ")·(" + d(b0) + "∩" + d(b1) + ") != " + d(p0) + "∩" +
                                          d(p1.value));
                    }
                }
            }
    }

    const MeetGroupoidOracle& o_;
    std::uint64_t budget_;
    std::size_t max_failures_;
    std::vector<Handle> elems_;
    AxiomReport report_;
};

}  // namespace

AxiomReport axiom_check(const MeetGroupoidOracle& o, std::uint64_t budget, std::size_t max_failures) {
    return AxiomRun(o, budget, max_failures).run();
}

// ---- extension and suborbits ----

ExtensionResult extendable_injection(const MeetGroupoidOracle& o, const std::vector<std::pair<Handle, Handle>>& pairs) {
    std::optional<Handle> acc;
    for (auto [a, b] : pairs) {
        if (a == kEmpty || b == kEmpty) throw Error(ErrorKind::InvalidArgument, "pairs must be nonempty");
        ProdResult r = o.prod(b, o.inv(a));
        if (r.status == ProdStatus::Overflow) throw Error(ErrorKind::WindowOverflow, o.describe(b) + "·inv(" + o.describe(a) + ")");
        if (!r.defined()) return {std::nullopt, o.describe(b) + "·inv(" + o.describe(a) + ") undefined"};
        acc = acc ? o.meet(*acc, r.value) : r.value;
        if (*acc == kEmpty) return {std::nullopt, "translating cosets have empty meet"};
    }
    if (!acc) throw Error(ErrorKind::InvalidArgument, "no pairs given");
    return {acc, "witness " + o.describe(*acc)};
}

std::vector<Handle> suborbit(const MeetGroupoidOracle& o, Handle u, Handle l, Handle f) {
    if (f == kEmpty) throw Error(ErrorKind::InvalidArgument, "suborbit of the empty set");
    if (!is_idempotent(o, u)) throw Error(ErrorKind::InvalidArgument, o.describe(u) + " is not a subgroup");
    ProdResult lu = o.prod(l, u);
    if (!lu.defined() || lu.value != l) throw Error(ErrorKind::InvalidArgument, o.describe(l) + " is not a left coset of " + o.describe(u));

    // F is a right coset of V exactly when V = F·F^{-1}.
    Handle v = source(o, f);
    Handle uv = o.meet(u, v);
    std::uint64_t k = o.index(u, v);
    std::vector<Handle> level0;
    for (Handle c : left_cosets(o, uv))
        if (is_subset(o, c, l)) level0.push_back(c);
    if (level0.size() != k)
        throw Error(ErrorKind::WindowOverflow, "window holds " + std::to_string(level0.size()) + " of " + std::to_string(k) +
                                                   " cosets of " + o.describe(uv) + " inside " + o.describe(l));
    std::vector<Handle> cosets_of_v = left_cosets(o, v);
    std::set<Handle> level1;
    for (Handle c : level0) {
        auto it = std::find_if(cosets_of_v.begin(), cosets_of_v.end(), [&](Handle dd) { return is_subset(o, c, dd); });
        if (it == cosets_of_v.end()) throw Error(ErrorKind::WindowOverflow, "no coset of " + o.describe(v) + " above " + o.describe(c));
        level1.insert(*it);
    }
    std::set<Handle> out;
    for (Handle dd : level1) out.insert(defined_prod(o, dd, f, "D·F"));
    return {out.begin(), out.end()};
}

// ---- dump / load ----

std::string dump_groupoid(const MeetGroupoidOracle& o) {
    TableGroupoid t = TableGroupoid::materialize(o);
    std::ostringstream os;
    os << "meet-groupoid v1\n";
    os << "elements " << t.size() << "\n";
    for (Handle a = 1; a <= t.size(); ++a) os << "element " << a << " " << (t.boundary_flag(a) ? 1 : 0) << " " << t.describe(a) << "\n";
    for (Handle a = 1; a <= t.size(); ++a) os << "inv " << a << " " << t.inv(a) << "\n";
    for (Handle a = 1; a <= t.size(); ++a)
        for (Handle b = 1; b <= t.size(); ++b) {
            ProdResult r = t.prod(a, b);
            if (r.defined()) os << "prod " << a << " " << b << " " << r.value << "\n";
            else if (r.status == ProdStatus::Overflow) os << "prod " << a << " " << b << " overflow\n";
        }
    for (Handle a = 1; a <= t.size(); ++a)
        for (Handle b = a + 1; b <= t.size(); ++b)
            if (Handle m = t.meet(a, b); m != kEmpty) os << "meet " << a << " " << b << " " << m << "\n";
    auto subs = subgroups(t);
    for (Handle u : subs)
        for (Handle v : subs) os << "index " << u << " " << v << " " << t.index(u, v) << "\n";
    os << "end\n";
    return os.str();
}

TableGroupoid load_groupoid(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) -> void {
        throw Error(ErrorKind::ParseError, "groupoid dump line " + std::to_string(lineno) + ": " + what);
    };
    auto next = [&]() {
        if (!std::getline(is, line)) fail("unexpected end of input");
        ++lineno;
    };
    next();
    if (line != "meet-groupoid v1") fail("bad header");
    next();
    std::istringstream head(line);
    std::string kw;
    std::size_t n = 0;
    if (!(head >> kw >> n) || kw != "elements") fail("expected element count");
    TableGroupoid t(n);
    for (Handle a = 1; a <= n; ++a) t.set_meet(a, a, a);
    bool ended = false;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        ls >> kw;
        Handle a = 0, b = 0;
        if (kw == "end") {
            ended = true;
            break;
        } else if (kw == "element") {
            int flag = 0;
            if (!(ls >> a >> flag) || a == 0 || a > n) fail("bad element line");
            std::string label;
            std::getline(ls >> std::ws, label);
            t.set_boundary(a, flag != 0);
            t.set_label(a, label);
        } else if (kw == "inv") {
            if (!(ls >> a >> b) || a > n || b > n) fail("bad inv line");
            t.set_inv(a, b);
        } else if (kw == "prod") {
            std::string c;
            if (!(ls >> a >> b >> c) || a > n || b > n) fail("bad prod line");
            if (c == "overflow") t.set_prod(a, b, {ProdStatus::Overflow, kEmpty});
            else {
                Handle hc = static_cast<Handle>(std::stoul(c));
                if (hc > n) fail("product out of range");
                t.set_prod(a, b, {ProdStatus::Defined, hc});
            }
        } else if (kw == "meet") {
            Handle c = 0;
            if (!(ls >> a >> b >> c) || a > n || b > n || c > n) fail("bad meet line");
            t.set_meet(a, b, c);
        } else if (kw == "index") {
            std::uint64_t k = 0;
            if (!(ls >> a >> b >> k) || a > n || b > n) fail("bad index line");
            t.set_index(a, b, k);
        } else {
            fail("unknown record '" + kw + "'");
        }
    }
    if (!ended) fail("missing end marker");
    return t;
}

}  // namespace tdlc
