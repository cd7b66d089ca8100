#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdecomp/bag.hpp"
#include "tdecomp/types.hpp"

namespace tdecomp {

/// Nesting depths of a factorisation forest: p counts idempotent operations,
/// q binary ones.
struct Depth {
    int p = 0;
    int q = 0;
    friend bool operator==(const Depth&, const Depth&) = default;
};

struct ForestNode {
    enum class Kind { Leaf, Binary, Idempotent };

    Kind kind = Kind::Leaf;
    std::size_t begin = 0, end = 0;  // letter span [begin, end)
    BagType type;                    // fold of the letter types over the span
    std::vector<std::unique_ptr<ForestNode>> children;

    std::unique_ptr<ForestNode> clone() const;
};

struct BuiltForest {
    std::unique_ptr<ForestNode> root;
    Depth depth;
    std::size_t submonoid_size = 0;
};

/// Optimal-depth factorisation forest over the type homomorphism, found by
/// interval dynamic programming on Pareto-minimal (p, q) pairs. The result
/// is certified at runtime against (|S|, 2|S|) for the generated submonoid
/// S of the letter types; a violation raises TheoryViolation.
BuiltForest build_forest(const DecompositionWord& w, std::size_t submonoid_cap = 10000);

Depth measure_depth(const ForestNode& node);

struct Violation {
    std::string path;
    std::string message;
};

/// Span partition, cached-type and idempotency checks; nullopt when valid.
std::optional<Violation> validate_forest(const ForestNode& root,
                                         const DecompositionWord& w);

struct RestrictedForest {
    std::unique_ptr<ForestNode> root;
    DecompositionWord word;
    Depth depth;
};

/// Restriction of the decomposition to the vertices whose type (in the whole
/// bag) lies in g_set. Produces a word for B[Gamma(B)] over the same letter
/// positions (letters may lose their vertex) and a forest of depth at most
/// (p, q+2p), rebuilt bottom-up so the middle-type claims are checked.
RestrictedForest restrict_forest(const ForestNode& root, const DecompositionWord& w,
                                 const std::vector<VertexType>& g_set);

/// Per-position minimal depth of a node having that position as its leftmost
/// leaf; the root sits at depth 0.
std::vector<int> split_encoding(const ForestNode& root);

/// Answers factor-type queries in time proportional to the forest height.
class FactorIndex {
public:
    explicit FactorIndex(const ForestNode& root) : root_(&root) {}

    /// Type of letters i..j inclusive (0-based).
    BagType query(std::size_t i, std::size_t j) const;

private:
    const ForestNode* root_;
};

/// Indented tree dump; the root line carries the measured depth.
std::string dump_forest(const ForestNode& root);

/// Letters [begin, end) as a standalone word with rebased positions.
DecompositionWord slice_word(const DecompositionWord& w, std::size_t begin,
                             std::size_t end);

/// Deep copy with spans shifted left by offset.
std::unique_ptr<ForestNode> clone_shifted(const ForestNode& node, std::size_t offset);

}  // namespace tdecomp
