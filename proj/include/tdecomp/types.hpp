#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "tdecomp/bag.hpp"
#include "tdecomp/bitrow.hpp"

namespace tdecomp {

/// Abstraction of a vertex inside a bag: its colour plus the orientation of
/// its boundary edge towards every input colour (bvec bit c set means
/// input c -> vertex).
struct VertexType {
    Colour colour = 0;
    BitRow bvec;

    friend bool operator==(const VertexType&, const VertexType&) = default;
    friend std::strong_ordering operator<=>(const VertexType& a, const VertexType& b) {
        if (auto c = a.colour <=> b.colour; c != 0) return c;
        return a.bvec <=> b.bvec;
    }
    std::size_t hash_value() const {
        return bvec.hash_value() * 31 + static_cast<std::size_t>(colour);
    }
    std::string to_string() const;
};

/// Direction of the edges between two inhabited vertex-type classes.
/// Fwd means first -> second in the canonical pair order.
enum class HomDir : std::uint8_t { Fwd, Bwd, Mixed };

/// Finite abstraction of a bag: recolouring, inhabited vertex types, and the
/// homogeneity table over unordered pairs of distinct inhabited types
/// (packed upper triangle over the canonically sorted inhabited list).
struct BagType {
    std::vector<Colour> rho;            // dense, size k
    std::vector<VertexType> inhabited;  // sorted canonically
    std::vector<HomDir> hom;            // m*(m-1)/2 entries

    std::uint32_t order() const { return static_cast<std::uint32_t>(rho.size()); }

    std::size_t pair_index(std::size_t i, std::size_t j) const {
        std::size_t m = inhabited.size();
        return i * m - i * (i + 1) / 2 + (j - i - 1);
    }
    HomDir hom_at(std::size_t i, std::size_t j) const { return hom[pair_index(i, j)]; }

    friend bool operator==(const BagType&, const BagType&) = default;
    std::size_t hash_value() const;
};

struct BagTypeHash {
    std::size_t operator()(const BagType& t) const { return t.hash_value(); }
};

/// Canonical one-line serialization, stable across runs.
std::string canonical_text(const BagType& t);

BagType identity_type(std::uint32_t k);

VertexType vertex_type_of(const Bag& b, VertexId v);

/// Relabelling of vertex types under left context g and right context h:
/// colour through h, boundary bits pulled back through g.
VertexType f_map(const std::vector<Colour>& g, const std::vector<Colour>& h,
                 const VertexType& a);

BagType bag_type_of(const Bag& b);

/// The monoid operation on bag types; satisfies
/// bag_type_of(product(A,B)) == type_product(bag_type_of(A), bag_type_of(B)).
BagType type_product(const BagType& s, const BagType& t);

bool is_idempotent(const BagType& t);

/// All k * 2^k vertex types of a small order (guarded).
std::vector<VertexType> all_vertex_types(std::uint32_t k);

/// { a : f_map(g, h, a) in G }, enumerated over all vertex types of order k.
std::vector<VertexType> gamma_pullback(const std::vector<VertexType>& g_set,
                                       const std::vector<Colour>& g,
                                       const std::vector<Colour>& h, std::uint32_t k);

/// Keeps only inhabited types inside G, restricting the homogeneity table.
BagType restrict_type(const BagType& t, const std::vector<VertexType>& g_set);

/// Submonoid generated by a set of bag types, with the identity adjoined.
struct TypeMonoid {
    std::vector<BagType> elements;
    std::size_t identity_index = 0;
    std::vector<std::size_t> generator_indices;

    std::size_t size() const { return elements.size(); }
};

/// Worklist closure under the type product. Throws CapExceeded beyond cap.
TypeMonoid submonoid_closure(const std::vector<BagType>& gens, std::size_t cap = 10000);

}  // namespace tdecomp
