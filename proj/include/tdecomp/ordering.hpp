#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tdecomp/forest.hpp"

namespace tdecomp {

/// Cut-rank budget of the main induction, memoized over (k, p, q). The
/// recurrences are taken with equality, so the value is the least admissible
/// bound: f(k,0,0) = k, f(k,p,q) = max of f(k,p,q-1)+k when q>0 and
/// f(k,p-1,2p+q) + 2k(2^k+1) when p>0.
std::int64_t f_bound(int k, int p, int q);

/// Rank budget of one idempotent reorganisation step.
std::int64_t partition_rank_bound(int k);

/// Direction of the edge between two vertices at index gap >= 2 in an
/// idempotent factorisation: true means earlier -> later.
bool far_edge_direction(const VertexType& earlier, const VertexType& later,
                        const std::vector<Colour>& rho);

struct ColourPair {
    Colour init;
    Colour fin;
};

/// Initial colour (inside the owning factor) and final colour (after one
/// application of the idempotent recolouring) per vertex under `node`.
std::unordered_map<VertexId, ColourPair> initial_final_colours(const DecompositionWord& w,
                                                               const ForestNode& node);

/// Bag-relative vertex types for the vertices of one factor, given as the
/// letters [begin, end) of w.
std::unordered_map<VertexId, VertexType> factor_vertex_types(const DecompositionWord& w,
                                                             std::size_t begin,
                                                             std::size_t end);

struct SyncGraph {
    std::vector<VertexType> nodes;  // inhabited types, canonically sorted
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<int> component;     // per node, numbered canonically
    int num_components = 0;
};

/// Types are adjacent when their vertex classes are not homogeneous.
SyncGraph sync_graph(const Tournament& t, const std::vector<VertexType>& type_of);

struct IdempotentPartition {
    std::vector<std::vector<VertexType>> components;
    struct Cell {
        int component;
        std::size_t child;                // child index within the node
        std::vector<VertexId> vertices;
    };
    std::vector<Cell> cells;              // component-major then child-minor
    std::unordered_map<VertexId, int> quasi_rank;  // cell index per vertex
    std::int64_t rank_bound = 0;
    int max_prefix_rank = 0;              // verified against rank_bound
};

/// The reorganised quasi-order of an idempotent node: synchronisation-graph
/// components, cells ordered first by component and then by factor, and the
/// GF(2)-verified prefix rank bound k(2^k+1).
IdempotentPartition idempotent_partition(const Decoded& d, const DecompositionWord& w,
                                         const ForestNode& node);

struct OrderingResult {
    Ordering order;                // global ids
    int cut_rank = 0;              // measured
    std::int64_t bound = 0;        // f_bound at the certified root depth
    Depth depth;
    nlohmann::ordered_json report;
};

/// The main induction: leaf and binary concatenation, idempotent
/// reorganisation via restrict_forest per cell. Every stated rank bound is
/// recomputed and asserted while building.
OrderingResult build_ordering(const Tournament& t, const DecompositionWord& w,
                              const ForestNode& root);

/// Verification-grade reconstruction of the factor quasi-order on one
/// synchronisation component, using only adjacency queries, the given vertex
/// types, and factor indices mod 5. rank[v] is -1 outside the component.
struct QueryOrder {
    std::vector<int> rank;
};
QueryOrder order_by_queries(const Tournament& t, const std::vector<VertexType>& type_of,
                            const std::vector<int>& mod5, const std::vector<Colour>& rho,
                            const std::vector<VertexType>& theta);

}  // namespace tdecomp
