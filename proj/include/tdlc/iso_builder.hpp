#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tdlc/meet_groupoid.hpp"
#include "tdlc/qp_groupoids.hpp"

namespace tdlc {

// r -> the subgroup playing U_r in some oracle; indices lo..hi are contiguous.
struct SubgroupChain {
    std::map<std::int64_t, Handle> levels;

    std::int64_t lo() const { return levels.begin()->first; }
    std::int64_t hi() const { return levels.rbegin()->first; }
    bool has(std::int64_t r) const { return levels.count(r) != 0; }
    Handle at(std::int64_t r) const;
    // Level whose subgroup is h, if any.
    std::optional<std::int64_t> level_of(Handle h) const;
};

// Anchor becomes level 0; walks up through unique index-p subgroups and down
// through unique index-p supergroups until none is left.
SubgroupChain locate_chain(const MeetGroupoidOracle& o, Handle anchor, unsigned p);

// S(B) for B a left coset of chain level r: the p-th power of any left coset of
// level r+1 inside B.
Handle definable_shift(const MeetGroupoidOracle& o, const SubgroupChain& chain, Handle b);
// The coset B of level r-1 with S(B) = C.
Handle definable_unshift(const MeetGroupoidOracle& o, const SubgroupChain& chain, Handle c);

// Region of the canonical window on which a rebuilt table is total.
struct SafeWindow {
    std::int64_t r_lo = 0;
    std::int64_t r_hi = 0;
    unsigned max_m = 0;  // Prüfer coordinates of order at most p^max_m

    bool contains(const ZQpCoset& c) const {
        return c.r >= r_lo && c.r <= r_hi && c.r - c.z >= r_lo && c.r - c.z <= r_hi && c.a.m <= max_m;
    }
};

struct IsoTable {
    unsigned p = 0;
    bool abelian = true;
    SafeWindow safe;
    SubgroupChain chain;                  // recentred so that the levels straddle 0
    std::map<std::int64_t, Handle> f_chain;  // images of E(-1,r,0), Z⋉Q_p only
    std::map<ZQpCoset, Handle> map;

    std::optional<Handle> image(const ZQpCoset& c) const;
};

IsoTable build_iso_qp(const MeetGroupoidOracle& o, unsigned p);
IsoTable build_iso_zqp(const MeetGroupoidOracle& o, unsigned p);

struct IsoReport {
    bool passed = true;
    std::uint64_t checks = 0;
    std::size_t entries = 0;
    std::vector<std::string> failures;

    std::string summary() const;
};

IsoReport verify_iso(const IsoTable& table, const CosetWindow& source, const MeetGroupoidOracle& oracle);

// Restriction of an oracle to the elements that are a left and a right coset of the same subgroup.
class SubOracle final : public MeetGroupoidOracle {
public:
    SubOracle(const MeetGroupoidOracle& base, std::vector<Handle> keep);

    std::vector<Handle> elements() const override { return keep_; }
    ProdResult prod(Handle a, Handle b) const override { return base_.prod(a, b); }
    Handle inv(Handle a) const override { return base_.inv(a); }
    Handle meet(Handle a, Handle b) const override { return base_.meet(a, b); }
    std::uint64_t index(Handle u, Handle v) const override { return base_.index(u, v); }
    bool boundary_flag(Handle a) const override { return base_.boundary_flag(a); }
    std::string describe(Handle a) const override { return base_.describe(a); }

private:
    const MeetGroupoidOracle& base_;
    std::vector<Handle> keep_;
};

SubOracle two_sided_part(const MeetGroupoidOracle& o);

}  // namespace tdlc
