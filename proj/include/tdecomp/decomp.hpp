#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdecomp/bag.hpp"

namespace tdecomp {

struct WidthReport {
    OrderK declared_k = 1;
    int max_classes = 0;             // max simultaneous colour classes
    std::vector<int> class_counts;   // after each letter
};

/// Builds a decomposition word realizing the given ordering, of order
/// exactly 2^r + 1 for r the measured cut-rank: prefix vertices are grouped
/// into suffix-neighbourhood classes, labels follow first appearance, and
/// each letter recolours the old classes into the refined partition.
DecompositionWord decomposition_from_ordering(const Tournament& t, const Ordering& o);

/// Max number of distinct suffix-neighbourhood rows over the prefixes; a
/// lower bound for the relative NLC-width of the ordering.
int relative_width_oracle(const Tournament& t, const Ordering& o);

/// Field-exact comparison of decode(w) against (t, o); nullopt when equal,
/// otherwise a description naming the first difference.
std::optional<std::string> verify_roundtrip(const Tournament& t, const Ordering& o,
                                            const DecompositionWord& w);

/// Colour classes in use after each letter of a word.
WidthReport width_report(const DecompositionWord& w);

}  // namespace tdecomp
