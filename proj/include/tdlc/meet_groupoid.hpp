#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tdlc {

using Handle = std::uint32_t;
inline constexpr Handle kEmpty = 0;

enum class ProdStatus { Defined, Undefined, Overflow };

struct ProdResult {
    ProdStatus status = ProdStatus::Undefined;
    Handle value = kEmpty;

    bool defined() const { return status == ProdStatus::Defined; }
};

// Finite window onto a meet groupoid. Handle 0 is the empty set.
class MeetGroupoidOracle {
public:
    virtual ~MeetGroupoidOracle() = default;

    // Nonempty elements in enumeration order.
    virtual std::vector<Handle> elements() const = 0;
    virtual ProdResult prod(Handle a, Handle b) const = 0;
    virtual Handle inv(Handle a) const = 0;
    virtual Handle meet(Handle a, Handle b) const = 0;
    // |U : U∩V| for subgroups U, V.
    virtual std::uint64_t index(Handle u, Handle v) const = 0;
    virtual bool boundary_flag(Handle a) const = 0;
    virtual std::string describe(Handle a) const;
};

// Dense tables; the common materialized form of windows, scrambles and dumps.
class TableGroupoid final : public MeetGroupoidOracle {
public:
    explicit TableGroupoid(std::size_t n = 0);

    static TableGroupoid materialize(const MeetGroupoidOracle& source);

    std::size_t size() const { return n_; }
    std::vector<Handle> elements() const override;
    ProdResult prod(Handle a, Handle b) const override;
    Handle inv(Handle a) const override;
    Handle meet(Handle a, Handle b) const override;
    std::uint64_t index(Handle u, Handle v) const override;
    bool boundary_flag(Handle a) const override;
    std::string describe(Handle a) const override;

    void set_prod(Handle a, Handle b, ProdResult r);
    void set_inv(Handle a, Handle b);
    void set_meet(Handle a, Handle b, Handle c);  // sets both orders
    void set_index(Handle u, Handle v, std::uint64_t k);
    void set_boundary(Handle a, bool flag);
    void set_label(Handle a, std::string label);

    // Drop an element; every product, meet or inverse that produced it becomes undefined or empty.
    TableGroupoid without(Handle victim) const;
    // Append a copy of an existing element under a fresh handle.
    TableGroupoid with_duplicate(Handle original) const;

private:
    std::size_t slot(Handle a, Handle b) const { return static_cast<std::size_t>(a) * (n_ + 1) + b; }
    void check(Handle a) const;

    std::size_t n_;
    std::vector<std::int64_t> prod_;  // -1 undefined, -2 overflow
    std::vector<Handle> inv_;
    std::vector<Handle> meet_;
    std::vector<std::uint64_t> index_;
    std::vector<bool> boundary_;
    std::vector<std::string> labels_;
};

// Meet groupoid of all cosets of all subgroups of a finite group given by its
// multiplication table (identity must be element 0).
TableGroupoid coset_groupoid(const std::vector<std::vector<std::size_t>>& mult);

bool is_idempotent(const MeetGroupoidOracle& o, Handle a);
Handle source(const MeetGroupoidOracle& o, Handle a);
Handle target(const MeetGroupoidOracle& o, Handle a);
bool is_subset(const MeetGroupoidOracle& o, Handle a, Handle b);
std::vector<Handle> subgroups(const MeetGroupoidOracle& o);
std::vector<Handle> left_cosets(const MeetGroupoidOracle& o, Handle u);
std::vector<Handle> right_cosets(const MeetGroupoidOracle& o, Handle u);
// a^k for k >= 1; nullopt when some partial product is not defined.
std::optional<Handle> power(const MeetGroupoidOracle& o, Handle a, std::uint64_t k);

struct AxiomFailure {
    std::string axiom;
    std::string witness;
};

struct AxiomReport {
    bool passed = true;
    bool complete = true;  // false when the budget ran out
    std::uint64_t checks = 0;
    std::uint64_t skipped_overflow = 0;
    std::vector<AxiomFailure> failures;

    std::string summary() const;
};

AxiomReport axiom_check(const MeetGroupoidOracle& o, std::uint64_t budget = 200'000'000, std::size_t max_failures = 5);

struct ExtensionResult {
    std::optional<Handle> witness;
    std::string reason;
};

// Meet of all B·A^{-1}; nonempty exactly when the finite injection A ↦ B extends.
ExtensionResult extendable_injection(const MeetGroupoidOracle& o, const std::vector<std::pair<Handle, Handle>>& pairs);

// {p(F) : p a group element with p(U) = L}.
std::vector<Handle> suborbit(const MeetGroupoidOracle& o, Handle u, Handle l, Handle f);

std::string dump_groupoid(const MeetGroupoidOracle& o);
TableGroupoid load_groupoid(const std::string& text);

}  // namespace tdlc
