#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tdlc {

// Vertices of the d-regular tree with a legal edge colouring: reduced words over
// the colours '1'..'9' (no letter repeated consecutively). The root is "".
using Vertex = std::string;

bool is_vertex(unsigned d, const Vertex& v);
Vertex move(const Vertex& x, unsigned colour);
std::uint64_t tree_distance(const Vertex& x, const Vertex& y);
std::vector<Vertex> neighbours(unsigned d, const Vertex& x);
// Vertices within distance r of centre, in breadth-first order.
std::vector<Vertex> ball(unsigned d, const Vertex& centre, unsigned r);
std::vector<Vertex> geodesic(const Vertex& x, const Vertex& y);

// Permutation of the colours 1..d.
class LocalPerm {
public:
    LocalPerm() = default;
    static LocalPerm identity(unsigned d);
    static LocalPerm from_images(std::vector<unsigned> images);  // images[c-1] = image of c
    static LocalPerm transposition(unsigned d, unsigned a, unsigned b);

    unsigned degree() const { return static_cast<unsigned>(img_.size()); }
    unsigned operator()(unsigned c) const { return img_.at(c - 1); }
    unsigned preimage(unsigned c) const;
    bool is_identity() const;
    // (a.then(b))(c) = b(a(c))
    LocalPerm then(const LocalPerm& b) const;
    LocalPerm inverse() const;
    std::string cycles() const;  // "id" or "(1 2)(3 4)"

    bool operator==(const LocalPerm&) const = default;
    auto operator<=>(const LocalPerm&) const = default;

private:
    std::vector<unsigned> img_;
};

// Root image plus finitely many local permutations (identity elsewhere). A
// child's permutation is corrected by a transposition when it disagrees with
// its parent on the colour of the edge between them.
struct GeneratorAut {
    unsigned d = 3;
    std::string name;
    Vertex w;
    std::map<Vertex, LocalPerm> sigma;

    LocalPerm raw(const Vertex& v) const;
};

// Effective local permutation at v after the correction along the root path.
LocalPerm effective_perm(const GeneratorAut& g, const Vertex& v);
Vertex apply_generator(const GeneratorAut& g, const Vertex& x);
Vertex apply_generator_inverse(const GeneratorAut& g, const Vertex& y);

// Freely reduced word; letters act left to right, so apply_word(a*b, x) = b(a(x)).
class TreeAut {
public:
    struct Letter {
        std::shared_ptr<const GeneratorAut> gen;
        bool inverse = false;
    };

    explicit TreeAut(unsigned d = 3) : d_(d) {}
    static TreeAut of(std::shared_ptr<const GeneratorAut> g);

    unsigned degree() const { return d_; }
    const std::vector<Letter>& letters() const { return letters_; }
    bool is_identity_word() const { return letters_.empty(); }

    TreeAut operator*(const TreeAut& b) const;
    TreeAut inverse() const;
    TreeAut pow(std::int64_t k) const;
    std::string to_string() const;

private:
    void push(const Letter& l);

    unsigned d_;
    std::vector<Letter> letters_;
};

Vertex apply_word(const TreeAut& a, const Vertex& x);
LocalPerm portrait(const TreeAut& a, const Vertex& x);

enum class AutType { Elliptic, Inversion, Hyperbolic, Inconclusive };
const char* aut_type_name(AutType t);

struct Classification {
    AutType type = AutType::Inconclusive;
    std::vector<Vertex> fixed;              // Elliptic: fixed vertices in the ball
    std::pair<Vertex, Vertex> edge;         // Inversion: the swapped edge
    std::uint64_t length = 0;               // Hyperbolic: translation length
    std::vector<Vertex> axis;               // Hyperbolic: minimizers in the ball
};

Classification classify(const TreeAut& a, unsigned radius);
// 1 for elliptic and inversions, (d-1)^length for hyperbolic; nullopt when inconclusive.
std::optional<std::uint64_t> scale_treeaut(const TreeAut& a, unsigned radius);

std::vector<Vertex> agree_set(const TreeAut& a, const TreeAut& b, unsigned radius);

struct ConjugacyResult {
    std::optional<GeneratorAut> witness;  // x with x^-1 a x = b on the radius ball
    std::string certificate;              // why no conjugator can exist, when known
    std::uint64_t candidates = 0;
};

// Bounded search over generators supported within `depth` of the root.
ConjugacyResult conjugate_search(const TreeAut& a, const TreeAut& b, unsigned radius, unsigned depth,
                                 std::uint64_t budget = 200000);

// Every generator with root image within `depth` and local permutations on
// vertices of length < depth that need no correction.
std::vector<GeneratorAut> enumerate_generators(unsigned d, unsigned depth, std::uint64_t budget);

// |stab(b_prime) : stab(b_prime ∪ b)| for finite subtrees.
std::uint64_t ball_stab_index(unsigned d, const std::vector<Vertex>& b_prime, const std::vector<Vertex>& b);

std::uint64_t m_tree(const TreeAut& a, const std::vector<Vertex>& subtree);
std::uint64_t m_tree(const TreeAut& a, const Vertex& base, unsigned n);

struct TidyReport {
    std::vector<std::uint64_t> m;        // m[k-1] = m(a^k, V)
    bool multiplicative = true;          // m(a^k) = m(a)^k for every k checked
    std::optional<bool> equals_scale;    // nullopt when the scale is inconclusive
};

TidyReport tidy_check(const TreeAut& a, const std::vector<Vertex>& subtree, unsigned kmax, unsigned radius);
TidyReport tidy_check(const TreeAut& a, const Vertex& base, unsigned n, unsigned kmax);

bool injection_extends(const std::vector<std::pair<Vertex, Vertex>>& pairs);

// Automorphisms of the radius-`depth` ball around the root, as index maps into `vertices`.
struct TruncatedAuts {
    std::vector<Vertex> vertices;
    std::vector<std::vector<std::uint32_t>> maps;
};

TruncatedAuts brute_force_aut(unsigned d, unsigned depth, std::uint64_t budget = 100000);

// Mini-language:
//   gen g1 = w:"1"; sigma: "" -> (1 2), "1" -> id
// one definition per line; words such as g1*g2^-1*g3^2 or id.
using GeneratorSet = std::map<std::string, std::shared_ptr<const GeneratorAut>>;

GeneratorSet parse_generators(unsigned d, const std::string& text);
TreeAut parse_word(unsigned d, const GeneratorSet& gens, const std::string& text);
std::string format_generator(const GeneratorAut& g);

}  // namespace tdlc
