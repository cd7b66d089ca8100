#include "tdecomp/decomp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tdecomp/errors.hpp"
#include "tdecomp/tournament.hpp"

namespace tdecomp {

namespace {

// Suffix-neighbourhood classes of o[0..s) against o[s..n), each class listed
// by first appearance and carrying its member positions.
std::vector<std::vector<int>> neighbourhood_classes(const Tournament& t, const Ordering& o,
                                                    int s) {
    std::vector<std::vector<int>> classes;
    std::map<BitRow, int> by_row;
    int n = t.n;
    for (int a = 0; a < s; ++a) {
        BitRow row(n - s);
        for (int b = s; b < n; ++b) row.set(b - s, t.edge(o[a], o[b]));
        auto [it, inserted] = by_row.try_emplace(std::move(row), classes.size());
        if (inserted) classes.emplace_back();
        classes[it->second].push_back(a);
    }
    return classes;
}

}  // namespace

int relative_width_oracle(const Tournament& t, const Ordering& o) {
    if (static_cast<int>(o.size()) != t.n)
        throw std::invalid_argument("relative_width_oracle: ordering size mismatch");
    int best = 0;
    for (int s = 1; s < t.n; ++s)
        best = std::max(best, static_cast<int>(neighbourhood_classes(t, o, s).size()));
    return best;
}

DecompositionWord decomposition_from_ordering(const Tournament& t, const Ordering& o) {
    if (static_cast<int>(o.size()) != t.n)
        throw std::invalid_argument("decomposition_from_ordering: ordering size mismatch");
    int n = t.n;
    int r = cut_rank(t, o).cut_rank;

    DecompositionWord w;
    w.k = pow2_plus1(r);

    // label[a] = colour of prefix position a under the current partition.
    std::vector<Colour> label;
    std::vector<std::vector<int>> prev_classes;
    for (int s = 0; s < n; ++s) {
        auto classes = neighbourhood_classes(t, o, s + 1);  // partition of o[0..s]
        if (r < 63 && classes.size() > (std::size_t{1} << r))
            throw TheoryViolation("decomposition_from_ordering: more classes than 2^r");

        std::vector<Colour> next_label(s + 1);
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (int a : classes[c]) next_label[a] = static_cast<Colour>(c);

        // Each old class must refine into a single new class.
        for (const auto& cls : prev_classes) {
            for (std::size_t i = 1; i < cls.size(); ++i)
                if (next_label[cls[i]] != next_label[cls[0]])
                    throw TheoryViolation(
                        "decomposition_from_ordering: classes do not refine monotonically");
        }

        AtomicBag letter;
        letter.has_vertex = true;
        letter.vertex = o[s];
        letter.colour = next_label[s];
        {
            std::set<Colour> in;
            for (int a = 0; a < s; ++a)
                if (t.edge(o[a], o[s])) in.insert(label[a]);
            letter.in_set.assign(in.begin(), in.end());
        }
        for (const auto& cls : prev_classes) {
            Colour from = label[cls[0]];
            letter.rho.set(from, next_label[cls[0]]);
        }
        w.push_letter(std::move(letter));

        label = std::move(next_label);
        prev_classes = std::move(classes);
    }
    return w;
}

std::optional<std::string> verify_roundtrip(const Tournament& t, const Ordering& o,
                                            const DecompositionWord& w) {
    Decoded d;
    try {
        d = decode(w);
    } catch (const std::exception& e) {
        return std::string("word does not decode: ") + e.what();
    }
    if (d.graph.n != t.n)
        return "vertex count differs: decoded " + std::to_string(d.graph.n) + ", expected " +
               std::to_string(t.n);
    for (std::size_t i = 0; i < d.ids.size(); ++i)
        if (d.ids[i] != i) return "decoded ids are not 0..n-1";
    if (d.order != o) {
        for (std::size_t i = 0; i < o.size(); ++i)
            if (d.order[i] != o[i])
                return "insertion order differs at position " + std::to_string(i) +
                       ": decoded " + std::to_string(d.order[i]) + ", expected " +
                       std::to_string(o[i]);
    }
    for (int u = 0; u < t.n; ++u)
        for (int v = 0; v < t.n; ++v) {
            if (u == v) continue;
            if (d.graph.edge(u, v) != t.edge(u, v)) {
                std::ostringstream os;
                os << "edge between " << u << " and " << v << " differs: decoded "
                   << (d.graph.edge(u, v) ? "forward" : "backward");
                return os.str();
            }
        }
    return std::nullopt;
}

WidthReport width_report(const DecompositionWord& w) {
    WidthReport rep;
    rep.declared_k = w.k;
    std::vector<Colour> colour;
    for (const AtomicBag& l : w.letters) {
        if (!l.rho.is_identity())
            for (Colour& c : colour) c = l.rho(c);
        if (l.has_vertex) colour.push_back(l.colour);
        std::set<Colour> distinct(colour.begin(), colour.end());
        rep.class_counts.push_back(static_cast<int>(distinct.size()));
        rep.max_classes = std::max(rep.max_classes, rep.class_counts.back());
    }
    return rep;
}

}  // namespace tdecomp
