#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "tdecomp/bitrow.hpp"

namespace tdecomp {

using VertexId = std::uint32_t;

/// Complete oriented graph on vertices 0..n-1. adj[u].get(v) is 1 exactly
/// when the edge u -> v is present; between distinct vertices exactly one
/// orientation exists and the diagonal is zero.
struct Tournament {
    int n = 0;
    std::vector<BitRow> adj;

    Tournament() = default;
    explicit Tournament(int n) : n(n), adj(n, BitRow(n)) {}

    bool edge(VertexId u, VertexId v) const { return adj[u].get(v); }
    void set_edge(VertexId u, VertexId v) {
        adj[u].set(v, true);
        adj[v].set(u, false);
    }

    /// Verifies both structural invariants; returns the offending pair.
    bool check_invariants(std::pair<int, int>* bad = nullptr) const;

    friend bool operator==(const Tournament&, const Tournament&) = default;
};

/// Vertex permutation; position in the vector is the rank in the ordering.
using Ordering = std::vector<VertexId>;

/// Per-prefix ranks and neighbourhood-class counts of an ordering.
struct CutReport {
    std::vector<int> ranks;         // prefix i (1..n-1) vs suffix
    std::vector<int> class_counts;  // distinct suffix-neighbourhood rows
    int cut_rank = 0;               // max of ranks
    int max_classes = 0;            // max of class_counts
};

CutReport cut_rank(const Tournament& t, const Ordering& o);

enum class Homogeneity { AllForward, AllBackward, Mixed };

/// Classifies the edges between disjoint non-empty vertex sets A and B.
Homogeneity is_homogeneous(const Tournament& t, const std::vector<VertexId>& a,
                           const std::vector<VertexId>& b);

// Instance generators.
Tournament inverted_path(int n);
Tournament rotating(int n);  // n must be odd
Tournament lex_triangle_power(int d);
Tournament random_tournament(int n, std::uint64_t seed);

/// Exhaustive minimum cut-rank over all n! orderings with one witness.
/// Refuses instances above the cap.
std::pair<int, Ordering> min_cutrank_bruteforce(const Tournament& t, int cap = 8);

/// Text format: first line n, then n rows of n characters '0'/'1'.
/// Rejects invariant violations with line/column diagnostics.
Tournament read_tournament(std::istream& in);
void write_tournament(std::ostream& out, const Tournament& t);

}  // namespace tdecomp
