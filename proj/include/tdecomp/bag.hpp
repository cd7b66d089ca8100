#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdecomp/bitrow.hpp"
#include "tdecomp/tournament.hpp"

namespace tdecomp {

using Colour = std::uint64_t;

/// Bag orders can reach 2^r + 1 for measured ranks r of wide instances, so
/// the declared order gets 128 bits while the colours actually inhabited
/// stay small.
using OrderK = unsigned __int128;

std::string order_to_string(OrderK k);
inline OrderK pow2_plus1(int r) { return (OrderK{1} << r) + 1; }

/// Recolouring map on colours, stored as explicit entries over an identity
/// default so that astronomically wide orders stay representable.
struct SparseRho {
    std::vector<std::pair<Colour, Colour>> entries;  // sorted by key, no fixpoints

    Colour operator()(Colour c) const;
    bool is_identity() const { return entries.empty(); }
    void set(Colour from, Colour to);

    friend bool operator==(const SparseRho&, const SparseRho&) = default;
};

/// A letter of a linear decomposition: at most one internal vertex plus a
/// recolouring. When a vertex is present, in_set lists the colours c whose
/// vertices send an edge towards it (colour-c vertex -> new vertex).
struct AtomicBag {
    bool has_vertex = false;
    VertexId vertex = 0;
    Colour colour = 0;
    std::vector<Colour> in_set;  // sorted
    SparseRho rho;

    friend bool operator==(const AtomicBag&, const AtomicBag&) = default;
};

struct DecompositionWord {
    OrderK k = 1;
    std::vector<AtomicBag> letters;
    std::unordered_map<VertexId, std::size_t> vertex_index;

    std::size_t size() const { return letters.size(); }
    void push_letter(AtomicBag letter);
    void check_well_formed() const;
};

/// Dense bag: internal tournament, boundary bipartite tournament against k
/// input colours, colouring and recolouring. Only materialised for small
/// orders; the wide-order pipeline never builds these.
struct Bag {
    std::uint32_t k = 0;
    std::vector<VertexId> ids;              // insertion order
    std::vector<BitRow> internal_adj;       // |V| rows over |V| columns
    std::vector<BitRow> boundary;           // k rows over |V| columns: input c -> v
    std::vector<Colour> lambda;             // per vertex
    std::vector<Colour> rho;                // dense, size k

    std::size_t vertices() const { return ids.size(); }
    bool operator==(const Bag&) const = default;
};

/// Largest order for which dense bags and vertex types are materialised.
inline constexpr std::uint32_t kDenseOrderCap = 4096;

Bag empty_bag(std::uint32_t k);
Bag bag_of_letter(const AtomicBag& letter, OrderK k);

/// Monoid product. Throws on order mismatch or vertex id collision.
Bag product(const Bag& a, const Bag& b);

/// Left fold of product over the letters (requires small order).
Bag fold_word(const DecompositionWord& w);

/// Result of decoding a word: the internal tournament over local indices
/// sorted by global id, plus the insertion ordering in global ids.
struct Decoded {
    Tournament graph;
    std::vector<VertexId> ids;     // ids[local] = global id, ascending
    std::vector<VertexId> order;   // insertion order, global ids

    std::size_t local(VertexId id) const;  // throws when absent
};

/// Direct O(letters * vertices) decoder using running colours; never
/// materialises bags.
Decoded decode(const DecompositionWord& w);

/// Baseline witness: order-n word giving every vertex a fresh colour.
DecompositionWord encode_trivial(const Tournament& t, const Ordering& o);

/// B[X]: drops internal vertices outside `keep`, restricting edges, boundary
/// and colouring; the recolouring is unchanged.
Bag restrict_bag(const Bag& b, const std::vector<VertexId>& keep);

/// Text format: `k m` then one line per letter, either `R r1 .. rk` or
/// `V id c x1..xk r1 .. rk` with x the in-set bitstring. Colours are 1-based
/// in files and rejected outside [k]. Writing requires a small order.
DecompositionWord read_word(std::istream& in);
void write_word(std::ostream& out, const DecompositionWord& w);

/// Width-2 witness words for the two drawn families; decode to the
/// generators with their canonical insertion orders.
DecompositionWord rotating_witness_word(int n);       // odd n, order 0,m,1,m+1,...
DecompositionWord inverted_path_witness_word(int n);  // natural order

}  // namespace tdecomp
