#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tdlc/bigint.hpp"
#include "tdlc/clc_tree.hpp"

namespace tdlc {

// p^{-r} * z, normalized so that p does not divide z (zero is stored as r = 0).
class PadicExact {
public:
    PadicExact(unsigned p, BigInt z, std::int64_t r = 0);

    static PadicExact from_rational(unsigned p, const Rational& q);

    unsigned prime() const { return p_; }
    const BigInt& numerator() const { return z_; }
    std::int64_t shift() const { return r_; }
    bool is_zero() const { return z_ == 0; }
    Rational value() const;

    PadicExact operator+(const PadicExact& o) const;
    PadicExact operator-(const PadicExact& o) const;
    PadicExact operator*(const PadicExact& o) const;
    PadicExact operator-() const;
    bool operator==(const PadicExact& o) const = default;

    // Tree string of the given length: head max(r,0), then base-p digits.
    NString digits(std::size_t length) const;

private:
    unsigned p_;
    BigInt z_;
    std::int64_t r_;
};

std::string format_padic_exact(const PadicExact& x);

// ---- prefix transducers ----
// Each returns the longest output prefix determined by the given input prefixes.

enum class PadicOp { Add, Neg, Mul };

NString add_prefix(unsigned p, const NString& x, const NString& y);
NString neg_prefix(unsigned p, const NString& x);
NString mul_prefix(unsigned p, const NString& x, const NString& y);

// Input length sufficient for the first n output entries, given the input heads.
std::size_t modulus(PadicOp op, std::size_t n, const std::vector<std::uint64_t>& heads);

// ---- streams ----

class PadicStream {
public:
    struct Node;

    static PadicStream exact(const PadicExact& x);
    static PadicStream literal(unsigned p, NString known);
    static PadicStream add(const PadicStream& a, const PadicStream& b);
    static PadicStream neg(const PadicStream& a);
    static PadicStream mul(const PadicStream& a, const PadicStream& b);
    static PadicStream sub(const PadicStream& a, const PadicStream& b);

    unsigned prime() const;
    // Longest determined prefix of length at most n.
    NString available(std::size_t n) const;
    // Exactly n entries or PrecisionExhausted.
    NString prefix(std::size_t n) const;

private:
    explicit PadicStream(std::shared_ptr<Node> node) : node_(std::move(node)) {}
    std::shared_ptr<Node> node_;
};

PadicStream to_stream(const PadicExact& x);

NString padic_add(const PadicStream& x, const PadicStream& y, std::size_t n);
NString padic_neg(const PadicStream& x, std::size_t n);
NString padic_mul(const PadicStream& x, const PadicStream& y, std::size_t n);

// "head:digits" with the prime given separately, or "p:head:digits".
// Digits are single characters 0-9a-z, or comma separated when any exceeds 9.
PadicStream parse_stream_literal(const std::string& text, unsigned p);
std::string format_stream_prefix(const NString& prefix);

// ---- image decision ----

struct UnaryTransducer {
    std::string name;
    unsigned p;
    std::function<NString(const NString&)> apply;
    std::function<std::size_t(std::size_t n, std::uint64_t head)> modulus;
};

UnaryTransducer identity_transducer(unsigned p);
UnaryTransducer neg_transducer(unsigned p);
UnaryTransducer add_constant_transducer(const PadicExact& c);
UnaryTransducer mul_constant_transducer(const PadicExact& c);

bool decide_image_subset(const UnaryTransducer& op, const CodeSet& u, const CodeSet& w);

// ---- matrices ----

class PadicMatrix {
public:
    PadicMatrix(unsigned p, std::size_t n, std::vector<PadicStream> entries);
    static PadicMatrix from_exact(const std::vector<std::vector<PadicExact>>& rows);

    unsigned prime() const { return p_; }
    std::size_t size() const { return n_; }
    const PadicStream& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

private:
    unsigned p_;
    std::size_t n_;
    std::vector<PadicStream> entries_;
};

using PrefixMatrix = std::vector<std::vector<NString>>;

PadicMatrix mat_mul_stream(const PadicMatrix& a, const PadicMatrix& b);
PadicStream det_stream(const PadicMatrix& a);
PadicMatrix adjugate_stream(const PadicMatrix& a);

PrefixMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b, std::size_t n);
NString det(const PadicMatrix& a, std::size_t n);
PrefixMatrix adjugate_inverse(const PadicMatrix& a, std::size_t n);

// Whether some determinant-one matrix over Z[1/p] has a path through the
// interleaved 2x2 prefix (component i at positions congruent to i mod 4).
// Raises BudgetExceeded once the search height passes the budget.
bool sl_prune(unsigned p, const NString& prefix, unsigned budget = 4);

}  // namespace tdlc
