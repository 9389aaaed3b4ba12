#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tdlc/bigint.hpp"

namespace tdlc {

using NString = std::vector<std::uint64_t>;

bool is_prefix(const NString& a, const NString& b);
bool comparable(const NString& a, const NString& b);

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n);

// Computably locally compact tree. Only the root may be infinitely branching;
// below it every entry is bounded by branch_bound(first entry, position).
class ClcTree {
public:
    virtual ~ClcTree() = default;

    virtual std::string id() const = 0;
    virtual bool contains(const NString& s) const = 0;
    virtual std::uint64_t branch_bound(std::uint64_t first, std::size_t i) const = 0;

    // One-entry extensions of a nonempty contained string.
    virtual std::vector<std::uint64_t> successors(const NString& s) const;
};

using TreePtr = std::shared_ptr<const ClcTree>;

// Strings (r, d0, d1, ...) with digits below p; r > 0 forbids d0 = 0.
class QpTree final : public ClcTree {
public:
    explicit QpTree(unsigned p);
    unsigned prime() const { return p_; }
    std::string id() const override;
    bool contains(const NString& s) const override;
    std::uint64_t branch_bound(std::uint64_t first, std::size_t i) const override;
    std::vector<std::uint64_t> successors(const NString& s) const override;

private:
    unsigned p_;
};

// Interleavings of (image, preimage) pairs describing permutations of
// {0..n-1} that fix every larger natural.
class SInfinityFragment final : public ClcTree {
public:
    explicit SInfinityFragment(std::uint64_t n);
    std::string id() const override;
    bool contains(const NString& s) const override;
    std::uint64_t branch_bound(std::uint64_t first, std::size_t i) const override;

private:
    std::uint64_t n_;
};

// Pair strings whose decoded injection on vertex codes of T_d preserves distance.
class TreeAutTd final : public ClcTree {
public:
    explicit TreeAutTd(unsigned d);
    std::string id() const override;
    bool contains(const NString& s) const override;
    std::uint64_t branch_bound(std::uint64_t first, std::size_t i) const override;

    // Shortlex numbering of reduced colour words of T_d.
    std::vector<unsigned> vertex_of_code(std::uint64_t code) const;
    std::uint64_t code_of_vertex(const std::vector<unsigned>& word) const;
    std::uint64_t ball_size(std::size_t radius) const;

private:
    unsigned d_;
};

TreePtr make_tree(const std::string& spec);  // "qp:3", "td:3", "sinf:4"

BigInt godel_code(const NString& w);
NString godel_decode(const BigInt& h);
BigInt strong_index(const std::set<NString>& u);
std::set<NString> decode_strong_index(const BigInt& n);

// Finite partial injection read off a pair string: a(r) = s iff sigma(r) = s or tau(s) = r.
std::map<std::uint64_t, std::uint64_t> decode_pair_injection(const NString& s);

class CodeSet {
public:
    CodeSet(TreePtr tree, std::set<NString> strings, bool canonical = false);

    const TreePtr& tree() const { return tree_; }
    const std::set<NString>& strings() const { return strings_; }
    bool canonical() const { return canonical_; }
    bool empty() const { return strings_.empty(); }

    bool operator==(const CodeSet& other) const;

private:
    TreePtr tree_;
    std::set<NString> strings_;
    bool canonical_;
};

CodeSet cone_union(const CodeSet& u, const CodeSet& w);
CodeSet cone_intersect(const CodeSet& u, const CodeSet& w);
bool cone_subset(const CodeSet& u, const CodeSet& w);
CodeSet minimal_code(const CodeSet& u);

// All contained extensions of s having the given length (s itself if already that long).
std::vector<NString> expand_to_length(const ClcTree& tree, const NString& s, std::size_t length);

std::string format_nstring(const NString& s);
NString parse_nstring(const std::string& text);
std::string format_codeset(const CodeSet& u);
CodeSet parse_codeset(TreePtr tree, const std::string& text);

}  // namespace tdlc
