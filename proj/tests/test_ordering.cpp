#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "tdecomp/errors.hpp"
#include "tdecomp/ordering.hpp"

using namespace tdecomp;
using namespace tdecomp::testing;

namespace {

DecompositionWord chain_word(int n) {
    DecompositionWord w;
    w.k = 1;
    for (int i = 0; i < n; ++i)
        w.push_letter(AtomicBag{true, static_cast<VertexId>(i), 0, {0}, {}});
    return w;
}

// Everything the query-ordering tests need about one planted instance.
struct PlantedSetup {
    Decoded d;
    std::vector<VertexType> type_of;
    std::vector<int> mod5;
    std::vector<int> truth;  // factor index per local vertex
    std::vector<Colour> rho;
    std::unique_ptr<ForestNode> root;
};

PlantedSetup setup(const Planted& p) {
    PlantedSetup s;
    s.d = decode(p.word);
    int n = s.d.graph.n;
    s.type_of.resize(n);
    s.mod5.resize(n);
    s.truth.resize(n);
    s.root = factor_forest(p.word, p.factor_letters);
    for (const auto& child : s.root->children) {
        auto types = factor_vertex_types(p.word, child->begin, child->end);
        for (auto& [id, vt] : types) s.type_of[s.d.local(id)] = vt;
    }
    for (const auto& [id, f] : p.factor_of) {
        s.truth[s.d.local(id)] = f;
        s.mod5[s.d.local(id)] = f % 5;
    }
    s.rho = s.root->type.rho;
    return s;
}

void check_query_order(const Planted& p) {
    PlantedSetup s = setup(p);
    REQUIRE_FALSE(validate_forest(*s.root, p.word).has_value());
    REQUIRE(is_idempotent(s.root->type));

    SyncGraph g = sync_graph(s.d.graph, s.type_of);
    for (int comp = 0; comp < g.num_components; ++comp) {
        std::vector<VertexType> theta;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (g.component[i] == comp) theta.push_back(g.nodes[i]);
        QueryOrder qo = order_by_queries(s.d.graph, s.type_of, s.mod5, s.rho, theta);

        std::set<VertexType> in_theta(theta.begin(), theta.end());
        for (int u = 0; u < s.d.graph.n; ++u) {
            if (!in_theta.count(s.type_of[u])) {
                CHECK(qo.rank[u] == -1);
                continue;
            }
            REQUIRE(qo.rank[u] >= 0);
            for (int v = 0; v < s.d.graph.n; ++v) {
                if (!in_theta.count(s.type_of[v])) continue;
                CHECK((qo.rank[u] < qo.rank[v]) == (s.truth[u] < s.truth[v]));
                CHECK((qo.rank[u] == qo.rank[v]) == (s.truth[u] == s.truth[v]));
            }
        }
    }
}

}  // namespace

TEST_CASE("f_bound matches the recurrences") {
    CHECK(f_bound(2, 0, 0) == 2);
    CHECK(f_bound(2, 0, 3) == 8);
    CHECK(f_bound(1, 0, 2) == 3);
    CHECK(f_bound(1, 1, 0) == f_bound(1, 0, 2) + 2 * 1 * 3);
    CHECK(f_bound(2, 1, 1) ==
          std::max(f_bound(2, 1, 0) + 2, f_bound(2, 0, 3) + 2 * partition_rank_bound(2)));
    for (int q = 1; q < 6; ++q) CHECK(f_bound(2, 1, q) >= f_bound(2, 1, q - 1));
    for (int p = 1; p < 4; ++p) CHECK(f_bound(2, p, 2) >= f_bound(2, p - 1, 2));
    CHECK(partition_rank_bound(2) == 10);
    CHECK(partition_rank_bound(3) == 27);
    CHECK_THROWS_AS(f_bound(0, 0, 0), std::invalid_argument);
}

TEST_CASE("far edge direction reads the boundary at the final colour") {
    VertexType chain;
    chain.colour = 0;
    chain.bvec = BitRow(1);
    chain.bvec.set(0, true);
    CHECK(far_edge_direction(chain, chain, {0}));

    VertexType sink;
    sink.colour = 1;
    sink.bvec = BitRow(2);  // all zero: the later vertex points back
    VertexType any;
    any.colour = 0;
    any.bvec = BitRow(2);
    any.bvec.set(0, true);
    CHECK_FALSE(far_edge_direction(any, sink, {0, 1}));
}

TEST_CASE("initial and final colours of idempotent nodes") {
    // Identity recolouring: both colours coincide.
    DecompositionWord w = chain_word(40);
    BuiltForest f = build_forest(w);
    REQUIRE(f.root->kind == ForestNode::Kind::Idempotent);
    auto cols = initial_final_colours(w, *f.root);
    CHECK(cols.size() == 40);
    for (auto& [id, cp] : cols) {
        CHECK(cp.init == 0);
        CHECK(cp.fin == 0);
    }

    // Constant recolouring with two-letter factors: the second vertex of a
    // factor keeps its own colour initially but is recoloured by the next
    // factor, so init and fin differ.
    DecompositionWord cw;
    cw.k = 2;
    for (int i = 0; i < 24; ++i) {
        AtomicBag l{true, static_cast<VertexId>(i), 1, {0, 1}, {}};
        l.rho.set(1, 0);
        cw.push_letter(std::move(l));
    }
    auto idem = factor_forest(cw, 2);
    REQUIRE_FALSE(validate_forest(*idem, cw).has_value());
    REQUIRE(is_idempotent(idem->type));
    auto cw_cols = initial_final_colours(cw, *idem);
    for (int i = 0; i < 24; ++i) {
        const ColourPair& cp = cw_cols.at(static_cast<VertexId>(i));
        CHECK(cp.fin == 0);
        CHECK(cp.init == (i % 2 == 0 ? 0 : 1));
    }

    // The final colour is the colour in any longer fold past the own factor.
    for (std::size_t c = 0; c + 1 < idem->children.size(); ++c) {
        auto to_end = factor_vertex_types(cw, idem->children[c]->begin, idem->end);
        auto own = factor_vertex_types(cw, idem->children[c]->begin, idem->children[c]->end);
        for (auto& [id, vt] : own) {
            CHECK(cw_cols.at(id).init == vt.colour);
            CHECK(to_end.at(id).colour == cw_cols.at(id).fin);
        }
    }

    CHECK_THROWS_AS(initial_final_colours(w, *f.root->children[0]),
                    std::invalid_argument);
}

TEST_CASE("sync graph shapes") {
    // One type, no edges: the transitive chain.
    DecompositionWord w = chain_word(12);
    Decoded d = decode(w);
    auto types = factor_vertex_types(w, 0, w.size());
    std::vector<VertexType> chain_types(d.graph.n, types.begin()->second);
    SyncGraph g1 = sync_graph(d.graph, chain_types);
    CHECK(g1.nodes.size() == 1);
    CHECK(g1.edges.empty());
    CHECK(g1.num_components == 1);

    // A planted pair is mixed, so its two types are adjacent.
    PlantedSetup one = setup(planted_multi(1, 6));
    SyncGraph g2 = sync_graph(one.d.graph, one.type_of);
    CHECK(g2.nodes.size() == 2);
    CHECK(g2.edges.size() == 1);
    CHECK(g2.num_components == 1);

    PlantedSetup three = setup(planted_multi(3, 6));
    SyncGraph g3 = sync_graph(three.d.graph, three.type_of);
    CHECK(g3.nodes.size() == 6);
    CHECK(g3.edges.size() == 3);
    CHECK(g3.num_components == 3);
}

TEST_CASE("idempotent partition keeps single components as the factors") {
    DecompositionWord w = chain_word(30);
    BuiltForest f = build_forest(w);
    Decoded d = decode(w);
    IdempotentPartition part = idempotent_partition(d, w, *f.root);
    CHECK(part.components.size() == 1);
    CHECK(part.cells.size() == f.root->children.size());
    for (std::size_t c = 0; c < part.cells.size(); ++c) {
        CHECK(part.cells[c].child == c);
        CHECK(part.cells[c].vertices.size() == 1);
    }
    CHECK(part.max_prefix_rank <= 1);
}

TEST_CASE("idempotent partition orders cells by component then factor") {
    Planted p = planted_multi(2, 5);
    PlantedSetup s = setup(p);
    IdempotentPartition part = idempotent_partition(s.d, p.word, *s.root);
    REQUIRE(part.components.size() == 2);
    CHECK(part.cells.size() == 10);  // two components times five factors
    int prev_comp = 0;
    std::size_t prev_child = 0;
    for (std::size_t c = 0; c < part.cells.size(); ++c) {
        const auto& cell = part.cells[c];
        if (c > 0) {
            bool advanced = cell.component > prev_comp ||
                            (cell.component == prev_comp && cell.child > prev_child);
            CHECK(advanced);
        }
        prev_comp = cell.component;
        prev_child = cell.child;
        CHECK(cell.vertices.size() == 4);  // one pair per unit block, two blocks
        for (VertexId v : cell.vertices) {
            CHECK(p.factor_of.at(v) == static_cast<int>(cell.child));
            CHECK(part.quasi_rank.at(v) == static_cast<int>(c));
        }
    }
    CHECK(part.max_prefix_rank <= part.rank_bound);
    // Same cell exactly when the quasi ranks agree, by construction of cells.
    for (const auto& [u, ru] : part.quasi_rank)
        for (const auto& [v, rv] : part.quasi_rank)
            CHECK((ru == rv) ==
                  (p.factor_of.at(u) == p.factor_of.at(v) &&
                   s.type_of[s.d.local(u)].colour / 2 == s.type_of[s.d.local(v)].colour / 2));
}

TEST_CASE("build_ordering on single-type words returns the insertion order") {
    DecompositionWord w = chain_word(100);
    Decoded d = decode(w);
    OrderingResult res = build_ordering(d.graph, w, *build_forest(w).root);
    CHECK(res.order == d.order);
    CHECK(res.cut_rank == 1);
    CHECK(res.cut_rank <= res.bound);
    CHECK(cut_rank(d.graph, res.order).cut_rank == res.cut_rank);
}

TEST_CASE("build_ordering on a single letter") {
    DecompositionWord w = chain_word(1);
    Decoded d = decode(w);
    OrderingResult res = build_ordering(d.graph, w, *build_forest(w).root);
    CHECK(res.order == Ordering{0});
    CHECK(res.cut_rank == 0);
    CHECK(res.bound == 1);  // f(k,0,0) = k
}

TEST_CASE("build_ordering end to end on the rotating family") {
    for (int n : {7, 23}) {
        DecompositionWord w = rotating_witness_word(n);
        Tournament t = rotating(n);
        BuiltForest f = build_forest(w);
        OrderingResult res = build_ordering(t, w, *f.root);
        std::set<VertexId> seen(res.order.begin(), res.order.end());
        CHECK(seen.size() == static_cast<std::size_t>(n));
        CHECK(res.cut_rank <= res.bound);
        CHECK(cut_rank(t, res.order).cut_rank == res.cut_rank);
        CHECK(res.report["nodes"].size() > 0);
    }
}

TEST_CASE("build_ordering reorganises multi-component idempotent words") {
    for (int r : {2, 3}) {
        Planted p = planted_multi(r, 4);
        Decoded d = decode(p.word);
        BuiltForest f = build_forest(p.word, 100000);
        OrderingResult res = build_ordering(d.graph, p.word, *f.root);
        CHECK(res.cut_rank <= res.bound);
        std::set<VertexId> seen(res.order.begin(), res.order.end());
        CHECK(seen.size() == d.order.size());
    }
}

TEST_CASE("build_ordering rejects mismatched inputs") {
    DecompositionWord w = chain_word(5);
    Decoded d = decode(w);
    BuiltForest f = build_forest(w);
    Tournament wrong = random_tournament(5, 5);
    if (wrong == d.graph) wrong = random_tournament(5, 6);
    CHECK_THROWS_AS(build_ordering(wrong, w, *f.root), std::invalid_argument);
}

TEST_CASE("far edges are type-determined on idempotent instances") {
    for (const Planted& p :
         {planted_multi(2, 7), planted_one_directional(6), planted_one_directional(6, true)}) {
        PlantedSetup s = setup(p);
        const std::vector<Colour>& rho = s.rho;
        int n = s.d.graph.n;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (s.truth[u] + 2 > s.truth[v]) continue;
                CHECK(s.d.graph.edge(u, v) ==
                      far_edge_direction(s.type_of[u], s.type_of[v], rho));
            }
    }
}

TEST_CASE("order_by_queries recovers the factor order from queries alone") {
    check_query_order(planted_multi(1, 9));
    check_query_order(planted_multi(2, 7));
    check_query_order(planted_multi(3, 11));
}

TEST_CASE("order_by_queries handles one-directional pairs via backward edges") {
    check_query_order(planted_one_directional(8));
    check_query_order(planted_one_directional(9, true));
    check_query_order(planted_one_directional(2));
}

TEST_CASE("order_by_queries on a single-type component") {
    DecompositionWord w = chain_word(13);
    Decoded d = decode(w);
    auto types = factor_vertex_types(w, 0, 1);
    VertexType ct = types.begin()->second;
    std::vector<VertexType> type_of(13, ct);
    std::vector<int> mod5(13);
    for (int i = 0; i < 13; ++i) mod5[i] = i % 5;
    QueryOrder qo = order_by_queries(d.graph, type_of, mod5, {0}, {ct});
    for (int i = 0; i < 13; ++i) CHECK(qo.rank[d.local(i)] == i);
}

TEST_CASE("order_by_queries trivial and error cases") {
    DecompositionWord w = chain_word(1);
    Decoded d = decode(w);
    VertexType ct = factor_vertex_types(w, 0, 1).begin()->second;
    QueryOrder qo = order_by_queries(d.graph, {ct}, {0}, {0}, {ct});
    CHECK(qo.rank[0] == 0);

    // Two homogeneous types do not form a connected component.
    Planted p = planted_multi(2, 3);
    PlantedSetup s = setup(p);
    SyncGraph g = sync_graph(s.d.graph, s.type_of);
    std::vector<VertexType> crossing{g.nodes[0], g.nodes[2]};
    CHECK_THROWS_AS(order_by_queries(s.d.graph, s.type_of, s.mod5, s.rho, crossing),
                    std::invalid_argument);

    std::vector<Colour> bad_rho{1, 0};  // swap is not idempotent
    CHECK_THROWS_AS(order_by_queries(s.d.graph, s.type_of, s.mod5, bad_rho, {g.nodes[0]}),
                    std::invalid_argument);
}
