#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdlc/bigint.hpp"
#include "tdlc/meet_groupoid.hpp"
#include "tdlc/padic.hpp"

namespace tdlc {

// [k/p^m] in Z[1/p]/Z, reduced: p does not divide k unless k = m = 0.
struct PruferElement {
    std::uint64_t k = 0;
    unsigned m = 0;

    bool is_zero() const { return k == 0; }
    auto operator<=>(const PruferElement&) const = default;
};

PruferElement prufer_make(unsigned p, std::uint64_t k, unsigned m);
std::uint64_t prufer_order(unsigned p, const PruferElement& a);
PruferElement prufer_add(unsigned p, const PruferElement& a, const PruferElement& b);
PruferElement prufer_neg(unsigned p, const PruferElement& a);
PruferElement prufer_mul_p_power(unsigned p, const PruferElement& a, unsigned j);
// Multiplication by an integer; a unit when coprime to p.
PruferElement prufer_mul(unsigned p, const PruferElement& a, std::int64_t u);
Rational prufer_value(unsigned p, const PruferElement& a);
PruferElement prufer_from_rational(unsigned p, const Rational& q);
std::string format_prufer(unsigned p, const PruferElement& a);

// Class of p^{-r}x mod 1; the kernel is U_r = p^r Z_p.
PruferElement prufer_project(std::int64_t r, const PadicExact& x);

// D(r,a) = {x : π_r(x) = a}; U_r is D(r,0).
struct QpCoset {
    std::int64_t r = 0;
    PruferElement a;
    auto operator<=>(const QpCoset&) const = default;
};

// E(z,r,a) = g^z D(r,a) with g = <1,0>; E(0,r,a) is D(r,a).
struct ZQpCoset {
    std::int64_t z = 0;
    std::int64_t r = 0;
    PruferElement a;
    auto operator<=>(const ZQpCoset&) const = default;
};

inline ZQpCoset embed(const QpCoset& d) { return {0, d.r, d.a}; }

struct WindowParams {
    unsigned p = 3;
    std::int64_t R = 2;
    unsigned M = 2;
    std::int64_t Z = 0;  // 0 selects 2R, the smallest bound closed under products

    std::int64_t z_bound() const { return Z > 0 ? Z : 2 * R; }
    void validate() const;
};

// Coordinate rules, valid with no window bound.
QpCoset d_prod(unsigned p, const QpCoset& a, const QpCoset& b);  // Undefined unless same level
QpCoset d_inv(unsigned p, const QpCoset& a);
bool d_subset(unsigned p, const QpCoset& a, const QpCoset& b);
std::optional<QpCoset> d_meet(unsigned p, const QpCoset& a, const QpCoset& b);

ZQpCoset e_prod(unsigned p, const ZQpCoset& a, const ZQpCoset& b);  // Undefined unless r = s - w
ZQpCoset e_inv(unsigned p, const ZQpCoset& a);
bool e_subset(unsigned p, const ZQpCoset& a, const ZQpCoset& b);
std::optional<ZQpCoset> e_meet(unsigned p, const ZQpCoset& a, const ZQpCoset& b);

// |U_r : U_r ∩ U_s|.
std::uint64_t subgroup_index(unsigned p, std::int64_t r, std::int64_t s);
// Left Haar measure with μ(U_0) = 1.
Rational measure(unsigned p, const ZQpCoset& a);
Rational modular(unsigned p, const ZQpCoset& a);

bool in_window(const WindowParams& w, const QpCoset& a);
bool in_window(const WindowParams& w, const ZQpCoset& a);

QpCoset shift(const WindowParams& w, const QpCoset& a);

// Elements of Z⋉Q_p: <z,q> = g^z q, with <z1,q1><z2,q2> = <z1+z2, p^{z2} q1 + q2>.
struct ZQpElement {
    std::int64_t z = 0;
    PadicExact q;
};

ZQpElement element_mul(const ZQpElement& x, const ZQpElement& y);
ZQpElement element_inv(const ZQpElement& x);

QpCoset act_left(const WindowParams& w, const PadicExact& g, const QpCoset& a);
ZQpCoset act_left(const WindowParams& w, const ZQpElement& g, const ZQpCoset& a);
ZQpCoset act_right(const WindowParams& w, const ZQpElement& g, const ZQpCoset& a);

// g^{-1} U_s g for g in A; equals U_{s+z}.
std::int64_t conj_subgroup(const WindowParams& w, const ZQpCoset& a, std::int64_t s);
std::uint64_t m_value(const WindowParams& w, const ZQpCoset& a, std::int64_t s);
// Minimum of m_value over window subgroups whose conjugate stays in the window.
std::uint64_t scale(const WindowParams& w, const ZQpCoset& a);
// Minimum over the first t such subgroups in increasing level order.
std::uint64_t scale_upper_approx(const WindowParams& w, const ZQpCoset& a, std::size_t t);

std::string format_coset(unsigned p, const QpCoset& a);
std::string format_coset(unsigned p, const ZQpCoset& a);
QpCoset parse_qp_coset(unsigned p, const std::string& text);
ZQpCoset parse_zqp_coset(unsigned p, const std::string& text);  // accepts D[..] as z = 0

// Finite set of E-cosets closed under nothing in particular; operations whose
// coordinate result leaves the set report Overflow.
class CosetWindow : public MeetGroupoidOracle {
public:
    CosetWindow(unsigned p, std::vector<ZQpCoset> cosets, std::vector<bool> boundary, bool abelian);

    unsigned prime() const { return p_; }
    bool abelian() const { return abelian_; }
    std::size_t size() const { return cosets_.size(); }

    std::vector<Handle> elements() const override;
    ProdResult prod(Handle a, Handle b) const override;
    Handle inv(Handle a) const override;
    Handle meet(Handle a, Handle b) const override;
    std::uint64_t index(Handle u, Handle v) const override;
    bool boundary_flag(Handle a) const override;
    std::string describe(Handle a) const override;

    const ZQpCoset& coset(Handle a) const;
    std::optional<Handle> find(const ZQpCoset& c) const;
    Handle handle(const ZQpCoset& c) const;  // WindowOverflow if absent
    std::optional<Handle> find(const QpCoset& c) const { return find(embed(c)); }
    Handle handle(const QpCoset& c) const { return handle(embed(c)); }

private:
    unsigned p_;
    bool abelian_;
    std::vector<ZQpCoset> cosets_;
    std::vector<bool> boundary_;
    std::map<ZQpCoset, Handle> lookup_;
};

// Boundary: |r| = R, |r - z| = R, |z| = Z or order(a) = p^M.
CosetWindow qp_window(const WindowParams& w);
CosetWindow zqp_window(const WindowParams& w);

struct Twist {
    std::int64_t shift_power = 0;
    std::int64_t unit = 1;
};

struct Scramble {
    TableGroupoid oracle;
    std::vector<Handle> relabel;  // base handle -> oracle handle; index 0 is the empty set
};

// Disguised copy: the image of the window under r -> r + k, a -> u·a, with handles
// permuted by a seeded shuffle.
Scramble scramble(const CosetWindow& base, std::uint64_t seed, Twist twist = {});

}  // namespace tdlc
