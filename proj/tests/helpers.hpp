#pragma once

#include <memory>
#include <random>
#include <unordered_map>
#include <vector>

#include "tdecomp/bag.hpp"
#include "tdecomp/forest.hpp"
#include "tdecomp/types.hpp"
#include "tdecomp/tournament.hpp"

namespace tdecomp::testing {

inline Tournament triangle() {
    Tournament t(3);
    t.set_edge(0, 1);
    t.set_edge(1, 2);
    t.set_edge(2, 0);
    return t;
}

inline Tournament transitive(int n) {
    Tournament t(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) t.set_edge(i, j);
    return t;
}

inline Ordering natural(int n) {
    Ordering o(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    return o;
}

/// Arbitrary dense bag: random internal tournament, boundary, colouring and
/// recolouring. Vertex ids start at id_base.
inline Bag random_bag(std::mt19937_64& rng, std::uint32_t k, int max_vertices,
                      VertexId id_base = 0) {
    int n = static_cast<int>(rng() % (max_vertices + 1));
    Bag b = empty_bag(k);
    b.internal_adj.assign(n, BitRow(n));
    for (std::uint32_t c = 0; c < k; ++c) b.boundary[c] = BitRow(n);
    for (int i = 0; i < n; ++i) {
        b.ids.push_back(id_base + i);
        b.lambda.push_back(rng() % k);
        for (int j = i + 1; j < n; ++j) {
            if (rng() & 1)
                b.internal_adj[i].set(j, true);
            else
                b.internal_adj[j].set(i, true);
        }
        for (std::uint32_t c = 0; c < k; ++c) b.boundary[c].set(i, rng() & 1);
    }
    for (std::uint32_t i = 0; i < k; ++i) b.rho[i] = rng() % k;
    return b;
}

/// Random word drawn from a small alphabet of letter shapes, mirroring how
/// real decompositions reuse a bounded set of operations. Vertex ids are
/// fresh per position; pure-recolouring shapes appear occasionally.
inline DecompositionWord random_word(std::mt19937_64& rng, std::uint64_t k,
                                     int letters, int alphabet = 3) {
    std::vector<AtomicBag> shapes;
    for (int s = 0; s < alphabet; ++s) {
        AtomicBag sh;
        sh.has_vertex = rng() % 8 != 0;
        sh.colour = rng() % k;
        for (Colour c = 0; c < k; ++c)
            if (rng() & 1) sh.in_set.push_back(c);
        // Recolourings stay tame (identity, constant, or one redirect);
        // arbitrary maps can make the letter-type closure explode.
        switch (rng() % 4) {
            case 0: {
                Colour to = rng() % k;
                for (Colour c = 0; c < k; ++c) sh.rho.set(c, to);
                break;
            }
            case 1: {
                sh.rho.set(rng() % k, rng() % k);
                break;
            }
            default: break;
        }
        shapes.push_back(std::move(sh));
    }
    DecompositionWord w;
    w.k = k;
    VertexId next_id = 0;
    for (int i = 0; i < letters; ++i) {
        AtomicBag l = shapes[rng() % shapes.size()];
        if (l.has_vertex)
            l.vertex = next_id++;
        else
            l.in_set.clear();
        w.push_letter(std::move(l));
    }
    return w;
}

/// A word whose idempotent factors each span `factor_letters` letters,
/// together with the ground-truth factor index per vertex.
struct Planted {
    DecompositionWord word;
    std::size_t factor_letters = 0;
    int factors = 0;
    std::unordered_map<VertexId, int> factor_of;
};

/// `components` independent type pairs over order 2r. Within a pair the two
/// classes are mixed (backward edges between consecutive unit blocks) while
/// distinct pairs stay homogeneous, so the synchronisation graph has exactly
/// `components` components. One factor = two unit blocks.
inline Planted planted_multi(int components, int factors) {
    Planted p;
    int r = components;
    p.word.k = static_cast<std::uint64_t>(2 * r);
    p.factor_letters = static_cast<std::size_t>(4 * r);
    p.factors = factors;
    VertexId next = 0;
    for (int f = 0; f < factors; ++f)
        for (int half = 0; half < 2; ++half)
            for (int t = 0; t < r; ++t) {
                Colour ca = static_cast<Colour>(2 * t), cb = static_cast<Colour>(2 * t + 1);
                AtomicBag a;
                a.has_vertex = true;
                a.vertex = next++;
                a.colour = ca;
                for (Colour c = 0; c < ca; ++c) a.in_set.push_back(c);
                a.in_set.push_back(cb);
                std::sort(a.in_set.begin(), a.in_set.end());
                AtomicBag b;
                b.has_vertex = true;
                b.vertex = next++;
                b.colour = cb;
                for (Colour c = 0; c < ca; ++c) b.in_set.push_back(c);
                b.in_set.push_back(ca);
                std::sort(b.in_set.begin(), b.in_set.end());
                p.factor_of[a.vertex] = f;
                p.factor_of[b.vertex] = f;
                p.word.push_letter(std::move(a));
                p.word.push_letter(std::move(b));
            }
    return p;
}

/// One synchronisation component whose far edges all point the same way, so
/// ordering it needs the backward-edge anchors. Each factor is a single
/// six-letter bag over order 4 carrying two vertices per class; backward
/// edges live inside the bags. `mirrored` swaps the colour roles to flip
/// which side anchors.
inline Planted planted_one_directional(int factors, bool mirrored = false) {
    Planted p;
    p.word.k = 4;
    p.factor_letters = 6;
    p.factors = factors;
    Colour ca = mirrored ? 1 : 0, cb = mirrored ? 0 : 1;
    VertexId next = 0;
    for (int f = 0; f < factors; ++f) {
        AtomicBag shift;  // reroute input lane 2 to 3 before the vertices
        shift.rho.set(2, 3);
        p.word.push_letter(std::move(shift));

        auto vertex_letter = [&](Colour colour, std::vector<Colour> in_set) {
            AtomicBag l;
            l.has_vertex = true;
            l.vertex = next++;
            l.colour = colour;
            l.in_set = std::move(in_set);
            p.factor_of[l.vertex] = f;
            p.word.push_letter(std::move(l));
        };
        vertex_letter(2, {ca});   // b1, transient colour 2
        vertex_letter(ca, {2});   // a1, receives the backward edge b1 -> a1
        vertex_letter(ca, {2});   // a2
        vertex_letter(2, {ca});   // b2, receives a1 -> b2 and a2 -> b2

        AtomicBag fin;  // settle the transient lanes on the b colour
        fin.rho.set(2, cb);
        fin.rho.set(3, cb);
        p.word.push_letter(std::move(fin));
    }
    return p;
}

/// Balanced binary tree over the letters [begin, end) with fold types.
inline std::unique_ptr<ForestNode> balanced_tree(const DecompositionWord& w,
                                                 std::size_t begin, std::size_t end) {
    auto node = std::make_unique<ForestNode>();
    node->begin = begin;
    node->end = end;
    if (end - begin == 1) {
        node->kind = ForestNode::Kind::Leaf;
        node->type = bag_type_of(bag_of_letter(w.letters[begin], w.k));
        return node;
    }
    node->kind = ForestNode::Kind::Binary;
    std::size_t mid = begin + (end - begin) / 2;
    node->children.push_back(balanced_tree(w, begin, mid));
    node->children.push_back(balanced_tree(w, mid, end));
    node->type = type_product(node->children[0]->type, node->children[1]->type);
    return node;
}

/// Idempotent root over equal-length factors, each a balanced subtree.
inline std::unique_ptr<ForestNode> factor_forest(const DecompositionWord& w,
                                                 std::size_t factor_letters) {
    auto root = std::make_unique<ForestNode>();
    root->kind = ForestNode::Kind::Idempotent;
    root->begin = 0;
    root->end = w.size();
    for (std::size_t b = 0; b < w.size(); b += factor_letters)
        root->children.push_back(balanced_tree(w, b, b + factor_letters));
    root->type = root->children[0]->type;
    return root;
}

}  // namespace tdecomp::testing
