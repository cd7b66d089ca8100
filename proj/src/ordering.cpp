#include "tdecomp/ordering.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tdecomp/errors.hpp"

namespace tdecomp {

std::int64_t partition_rank_bound(int k) {
    if (k < 1 || k > 32)
        throw std::invalid_argument("partition_rank_bound: order out of range");
    return static_cast<std::int64_t>(k) * ((std::int64_t{1} << k) + 1);
}

std::int64_t f_bound(int k, int p, int q) {
    if (k < 1 || p < 0 || q < 0) throw std::invalid_argument("f_bound: bad arguments");
    if (k > 32 || p > 64 || q > 4096) throw std::invalid_argument("f_bound: out of range");

    static std::map<std::tuple<int, int, int>, std::int64_t> memo;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);

    // Row p needs row p-1 up to column 2p+q, so the column budget grows by
    // p*(p+1) overall.
    auto get = [&](int pp, int qq) {
        auto it = memo.find({k, pp, qq});
        return it == memo.end() ? std::int64_t{-1} : it->second;
    };
    if (auto v = get(p, q); v >= 0) return v;

    std::int64_t step = 2 * partition_rank_bound(k);
    for (int pp = 0; pp <= p; ++pp) {
        int qmax = q;
        for (int j = pp + 1; j <= p; ++j) qmax += 2 * j;
        for (int qq = 0; qq <= qmax; ++qq) {
            if (get(pp, qq) >= 0) continue;
            std::int64_t v = k;
            if (qq > 0) v = std::max(v, get(pp, qq - 1) + k);
            if (pp > 0) v = std::max(v, get(pp - 1, 2 * pp + qq) + step);
            if (pp == 0 && qq == 0) v = k;
            memo[{k, pp, qq}] = v;
        }
    }
    return get(p, q);
}

bool far_edge_direction(const VertexType& earlier, const VertexType& later,
                        const std::vector<Colour>& rho) {
    return later.bvec.get(static_cast<std::size_t>(rho[earlier.colour]));
}

std::unordered_map<VertexId, VertexType> factor_vertex_types(const DecompositionWord& w,
                                                             std::size_t begin,
                                                             std::size_t end) {
    if (w.k > kDenseOrderCap)
        throw std::invalid_argument("factor_vertex_types: order too large");
    std::uint32_t k = static_cast<std::uint32_t>(w.k);

    std::vector<Colour> route(k);  // composition of the factor's recolourings
    for (std::uint32_t c = 0; c < k; ++c) route[c] = c;
    std::vector<std::pair<VertexId, Colour>> placed;
    std::unordered_map<VertexId, BitRow> bvecs;

    for (std::size_t pos = begin; pos < end; ++pos) {
        const AtomicBag& l = w.letters[pos];
        if (l.has_vertex) {
            BitRow bv(k);
            for (std::uint32_t c = 0; c < k; ++c)
                bv.set(c, std::binary_search(l.in_set.begin(), l.in_set.end(), route[c]));
            bvecs.emplace(l.vertex, std::move(bv));
        }
        if (!l.rho.is_identity()) {
            for (std::uint32_t c = 0; c < k; ++c) route[c] = l.rho(route[c]);
            for (auto& [id, col] : placed) col = l.rho(col);
        }
        if (l.has_vertex) placed.emplace_back(l.vertex, l.colour);
    }

    std::unordered_map<VertexId, VertexType> out;
    for (auto& [id, col] : placed) {
        VertexType t;
        t.colour = col;
        t.bvec = std::move(bvecs.at(id));
        out.emplace(id, std::move(t));
    }
    return out;
}

std::unordered_map<VertexId, ColourPair> initial_final_colours(const DecompositionWord& w,
                                                               const ForestNode& node) {
    if (node.kind != ForestNode::Kind::Idempotent)
        throw std::invalid_argument("initial_final_colours: node is not idempotent");
    const std::vector<Colour>& rho = node.type.rho;
    for (std::size_t c = 0; c < rho.size(); ++c)
        if (rho[static_cast<std::size_t>(rho[c])] != rho[c])
            throw TheoryViolation("initial_final_colours: recolouring is not idempotent");

    std::unordered_map<VertexId, ColourPair> out;
    for (const auto& child : node.children) {
        auto types = factor_vertex_types(w, child->begin, child->end);
        for (auto& [id, vt] : types)
            out.emplace(id, ColourPair{vt.colour, rho[static_cast<std::size_t>(vt.colour)]});
    }
    return out;
}

SyncGraph sync_graph(const Tournament& t, const std::vector<VertexType>& type_of) {
    if (static_cast<int>(type_of.size()) != t.n)
        throw std::invalid_argument("sync_graph: one type per vertex required");
    std::map<VertexType, std::vector<int>> classes;
    for (int v = 0; v < t.n; ++v) classes[type_of[v]].push_back(v);

    SyncGraph g;
    for (auto& [vt, members] : classes) g.nodes.push_back(vt);
    std::size_t m = g.nodes.size();

    std::vector<std::size_t> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            bool fwd = false, bwd = false;
            for (int u : classes[g.nodes[i]])
                for (int v : classes[g.nodes[j]]) (t.edge(u, v) ? fwd : bwd) = true;
            if (fwd && bwd) {
                g.edges.emplace_back(i, j);
                parent[find(i)] = find(j);
            }
        }

    g.component.assign(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = find(i);
        if (g.component[r] < 0) g.component[r] = g.num_components++;
        g.component[i] = g.component[r];
    }
    return g;
}

namespace {

// Rank of the bipartite adjacency block A-rows versus B-columns.
int block_rank(const Tournament& t, const std::vector<VertexId>& a,
               const std::vector<VertexId>& b) {
    std::vector<BitRow> rows;
    rows.reserve(a.size());
    for (VertexId u : a) {
        BitRow row(b.size());
        for (std::size_t j = 0; j < b.size(); ++j) row.set(j, t.edge(u, b[j]));
        rows.push_back(std::move(row));
    }
    return rank_gf2(std::move(rows));
}

// Max rank over the prefix cuts of an ordering, within its own vertex set.
int sequence_cut_rank(const Tournament& t, const Ordering& order) {
    int best = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
        std::vector<VertexId> pre(order.begin(), order.begin() + i);
        std::vector<VertexId> suf(order.begin() + i, order.end());
        best = std::max(best, block_rank(t, pre, suf));
    }
    return best;
}

std::vector<VertexId> span_vertices(const DecompositionWord& w, std::size_t begin,
                                    std::size_t end) {
    std::vector<VertexId> out;
    for (std::size_t i = begin; i < end; ++i)
        if (w.letters[i].has_vertex) out.push_back(w.letters[i].vertex);
    return out;
}

}  // namespace

IdempotentPartition idempotent_partition(const Decoded& d, const DecompositionWord& w,
                                         const ForestNode& node) {
    if (node.kind != ForestNode::Kind::Idempotent)
        throw std::invalid_argument("idempotent_partition: node is not idempotent");
    int k = static_cast<int>(w.k);

    std::vector<VertexId> verts = span_vertices(w, node.begin, node.end);
    std::sort(verts.begin(), verts.end());

    std::unordered_map<VertexId, VertexType> type_by_vertex;
    std::unordered_map<VertexId, std::size_t> child_of;
    for (std::size_t c = 0; c < node.children.size(); ++c) {
        auto types = factor_vertex_types(w, node.children[c]->begin, node.children[c]->end);
        for (auto& [id, vt] : types) {
            type_by_vertex.emplace(id, std::move(vt));
            child_of.emplace(id, c);
        }
    }

    // Induced tournament over the node's vertices, locals in sorted id order.
    Tournament sub(static_cast<int>(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = 0; j < verts.size(); ++j)
            if (i != j)
                sub.adj[i].set(j, d.graph.edge(d.local(verts[i]), d.local(verts[j])));
    std::vector<VertexType> type_of(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) type_of[i] = type_by_vertex.at(verts[i]);

    SyncGraph g = sync_graph(sub, type_of);

    IdempotentPartition part;
    part.rank_bound = partition_rank_bound(k);
    part.components.assign(g.num_components, {});
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        part.components[g.component[i]].push_back(g.nodes[i]);

    for (int comp = 0; comp < g.num_components; ++comp) {
        std::set<VertexType> theta(part.components[comp].begin(),
                                   part.components[comp].end());
        for (std::size_t c = 0; c < node.children.size(); ++c) {
            IdempotentPartition::Cell cell;
            cell.component = comp;
            cell.child = c;
            for (std::size_t pos = node.children[c]->begin; pos < node.children[c]->end;
                 ++pos) {
                const AtomicBag& l = w.letters[pos];
                if (l.has_vertex && theta.count(type_by_vertex.at(l.vertex)))
                    cell.vertices.push_back(l.vertex);
            }
            if (!cell.vertices.empty()) part.cells.push_back(std::move(cell));
        }
    }

    for (std::size_t c = 0; c < part.cells.size(); ++c)
        for (VertexId v : part.cells[c].vertices)
            part.quasi_rank[v] = static_cast<int>(c);

    // Every prefix of cells must cut at rank k(2^k+1) or less; ids are
    // translated to locals of d.graph for the elimination.
    auto to_locals = [&](const std::vector<VertexId>& ids) {
        std::vector<VertexId> out;
        out.reserve(ids.size());
        for (VertexId id : ids) out.push_back(static_cast<VertexId>(d.local(id)));
        return out;
    };
    std::vector<VertexId> prefix;
    part.max_prefix_rank = 0;
    for (std::size_t c = 0; c + 1 < part.cells.size(); ++c) {
        prefix.insert(prefix.end(), part.cells[c].vertices.begin(),
                      part.cells[c].vertices.end());
        std::set<VertexId> in_prefix(prefix.begin(), prefix.end());
        std::vector<VertexId> rest;
        for (VertexId v : verts)
            if (!in_prefix.count(v)) rest.push_back(v);
        int r = block_rank(d.graph, to_locals(prefix), to_locals(rest));
        part.max_prefix_rank = std::max(part.max_prefix_rank, r);
    }
    if (part.max_prefix_rank > part.rank_bound)
        throw TheoryViolation("idempotent_partition: prefix cut rank " +
                              std::to_string(part.max_prefix_rank) + " exceeds k(2^k+1) = " +
                              std::to_string(part.rank_bound));
    return part;
}

namespace {

struct RecResult {
    Ordering order;
    int measured = 0;
};

struct Builder {
    const Tournament& t;  // the root tournament; ids are its vertices
    int k;
    nlohmann::ordered_json& nodes;

    RecResult rec(const DecompositionWord& word, const Decoded& dec,
                  const ForestNode& node, const std::string& path) {
        RecResult result;
        int max_cell_rank = -1;
        Depth depth = measure_depth(node);
        std::int64_t bound = f_bound(k, depth.p, depth.q);
        nlohmann::ordered_json record;
        record["path"] = path;
        record["span"] = {node.begin + 1, node.end};
        record["depth"] = {depth.p, depth.q};
        record["f_bound"] = bound;

        switch (node.kind) {
            case ForestNode::Kind::Leaf: {
                record["kind"] = "leaf";
                result.order = span_vertices(word, node.begin, node.end);
                break;
            }
            case ForestNode::Kind::Binary: {
                record["kind"] = "binary";
                RecResult left = rec(word, dec, *node.children[0], path + ".0");
                RecResult right = rec(word, dec, *node.children[1], path + ".1");
                int cross = block_rank(t, left.order, right.order);
                if (cross > k)
                    throw TheoryViolation("build_ordering: factor cut rank " +
                                          std::to_string(cross) + " exceeds the order " +
                                          std::to_string(k) + " at " + path);
                record["cross_rank"] = cross;
                result.order = std::move(left.order);
                result.order.insert(result.order.end(), right.order.begin(),
                                    right.order.end());
                break;
            }
            case ForestNode::Kind::Idempotent: {
                record["kind"] = "idempotent";
                IdempotentPartition part = idempotent_partition(dec, word, node);
                int r = static_cast<int>(part.components.size());
                record["components"] = r;
                record["cells"] = part.cells.size();
                record["partition_rank"] = part.max_prefix_rank;
                record["partition_bound"] = part.rank_bound;

                max_cell_rank = 0;
                if (r == 1) {
                    // The given factorisation is kept as is.
                    for (std::size_t c = 0; c < node.children.size(); ++c) {
                        RecResult sub = rec(word, dec, *node.children[c],
                                            path + "." + std::to_string(c));
                        max_cell_rank = std::max(max_cell_rank, sub.measured);
                        result.order.insert(result.order.end(), sub.order.begin(),
                                            sub.order.end());
                    }
                } else {
                    bool tight = true;
                    for (std::size_t ci = 0; ci < part.cells.size(); ++ci) {
                        const auto& cell = part.cells[ci];
                        const ForestNode& child = *node.children[cell.child];
                        DecompositionWord subword = slice_word(word, child.begin, child.end);
                        auto subtree = clone_shifted(child, child.begin);
                        RestrictedForest rf = restrict_forest(
                            *subtree, subword, part.components[cell.component]);
                        if (rf.depth.p > depth.p - 1 || rf.depth.q > depth.q + 2 * depth.p)
                            throw TheoryViolation(
                                "build_ordering: restricted cell depth exceeds (p-1, q+2p) at " +
                                path);
                        tight &= rf.depth.q <= depth.q + 2 * (depth.p - 1);
                        Decoded subdec = decode(rf.word);
                        RecResult sub = rec(rf.word, subdec, *rf.root,
                                            path + ".cell" + std::to_string(ci));
                        std::set<VertexId> got(sub.order.begin(), sub.order.end());
                        std::set<VertexId> want(cell.vertices.begin(), cell.vertices.end());
                        if (got != want)
                            throw TheoryViolation(
                                "build_ordering: cell ordering lost vertices at " + path);
                        max_cell_rank = std::max(max_cell_rank, sub.measured);
                        result.order.insert(result.order.end(), sub.order.begin(),
                                            sub.order.end());
                    }
                    record["restricted_depth_tight"] = tight;
                }
                record["max_cell_rank"] = max_cell_rank;
                break;
            }
        }

        result.measured = sequence_cut_rank(t, result.order);
        record["measured_rank"] = result.measured;
        if (node.kind == ForestNode::Kind::Idempotent) {
            // Interval-composition bound: two partition cuts plus the worst cell.
            std::int64_t comp_bound = 2 * partition_rank_bound(k) + max_cell_rank;
            record["composition_ok"] = result.measured <= comp_bound;
            if (result.measured > comp_bound)
                throw TheoryViolation("build_ordering: composition bound violated at " + path);
        }
        if (result.measured > bound)
            throw TheoryViolation("build_ordering: measured cut rank " +
                                  std::to_string(result.measured) + " exceeds f(k,p,q) = " +
                                  std::to_string(bound) + " at " + path);
        nodes.push_back(std::move(record));
        return result;
    }
};

}  // namespace

OrderingResult build_ordering(const Tournament& t, const DecompositionWord& w,
                              const ForestNode& root) {
    Decoded d = decode(w);
    if (d.graph.n != t.n)
        throw std::invalid_argument("build_ordering: word does not decode to the tournament");
    for (std::size_t i = 0; i < d.ids.size(); ++i)
        if (d.ids[i] != i)
            throw std::invalid_argument("build_ordering: word vertex ids must be 0..n-1");
    if (!(d.graph == t))
        throw std::invalid_argument("build_ordering: word does not decode to the tournament");
    if (auto v = validate_forest(root, w))
        throw std::invalid_argument("build_ordering: invalid forest at " + v->path + ": " +
                                    v->message);

    OrderingResult out;
    out.depth = measure_depth(root);
    out.report = nlohmann::ordered_json::object();
    out.report["nodes"] = nlohmann::ordered_json::array();

    Builder b{t, static_cast<int>(w.k), out.report["nodes"]};
    RecResult res = b.rec(w, d, root, "root");
    out.order = std::move(res.order);
    out.cut_rank = res.measured;
    out.bound = f_bound(static_cast<int>(w.k), out.depth.p, out.depth.q);

    out.report["ordering"] = out.order;
    out.report["cut_rank"] = out.cut_rank;
    out.report["depth"] = {out.depth.p, out.depth.q};
    out.report["f_bound"] = out.bound;
    return out;
}

// ---------------------------------------------------------------------------
// Query-level ordering witness.

namespace {

int cyc_dist(int a, int b) {
    int d = (a - b + 5) % 5;
    return std::min(d, 5 - d);
}

struct QueryEngine {
    const Tournament& t;
    const std::vector<VertexType>& type_of;
    const std::vector<int>& mod5;
    const std::vector<Colour>& rho;

    std::map<VertexType, std::vector<int>> members;       // per type in theta
    std::map<VertexType, std::vector<int>> by_residue[5];
    std::map<VertexType, std::vector<int>> exact_rank;    // dense per type

    bool far(const VertexType& a, const VertexType& b) const {
        return far_edge_direction(a, b, rho);
    }

    // -1: u earlier, +1: v earlier. Reliable for index gaps >= 2 only.
    int approx_same(int u, int v) const {
        const VertexType& a = type_of[u];
        bool src_earlier = far(a, a);
        bool uv = t.edge(u, v);
        if (src_earlier) return uv ? -1 : 1;
        return uv ? 1 : -1;
    }

    template <typename Approx>
    int exact_cmp(int u, int v, const std::vector<int> (&pool_by_residue)[5],
                  Approx&& approx) const {
        int du = mod5[u], dv = mod5[v];
        if (cyc_dist(du, dv) >= 2) return approx(u, v);
        int m = 0;
        while (cyc_dist(m, du) < 2 || cyc_dist(m, dv) < 2) ++m;
        for (int z : pool_by_residue[m]) {
            if (z == u || z == v) continue;
            if (approx(u, z) < 0 && approx(z, v) < 0) return -1;
            if (approx(v, z) < 0 && approx(z, u) < 0) return 1;
        }
        int ou = (du - m + 5) % 5, ov = (dv - m + 5) % 5;
        if (ou == ov) return 0;
        return ou < ov ? -1 : 1;
    }
};

}  // namespace

QueryOrder order_by_queries(const Tournament& t, const std::vector<VertexType>& type_of,
                            const std::vector<int>& mod5, const std::vector<Colour>& rho,
                            const std::vector<VertexType>& theta) {
    if (static_cast<int>(type_of.size()) != t.n || static_cast<int>(mod5.size()) != t.n)
        throw std::invalid_argument("order_by_queries: per-vertex inputs required");
    for (std::size_t c = 0; c < rho.size(); ++c)
        if (rho[static_cast<std::size_t>(rho[c])] != rho[c])
            throw std::invalid_argument("order_by_queries: recolouring must be idempotent");
    if (theta.empty()) throw std::invalid_argument("order_by_queries: empty component");

    // The requested set must be exactly one synchronisation component.
    SyncGraph g = sync_graph(t, type_of);
    {
        std::set<VertexType> want(theta.begin(), theta.end());
        std::size_t root_idx = g.nodes.size();
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (want.count(g.nodes[i])) {
                root_idx = i;
                break;
            }
        if (root_idx == g.nodes.size())
            throw std::invalid_argument("order_by_queries: component types are not inhabited");
        std::set<VertexType> actual;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (g.component[i] == g.component[root_idx]) actual.insert(g.nodes[i]);
        if (actual != want)
            throw std::invalid_argument(
                "order_by_queries: the given set is not a connected synchronisation component");
    }

    std::vector<VertexType> types = theta;
    std::sort(types.begin(), types.end());

    QueryEngine eng{t, type_of, mod5, rho, {}, {}, {}};
    for (int v = 0; v < t.n; ++v) {
        auto it = std::lower_bound(types.begin(), types.end(), type_of[v]);
        if (it == types.end() || !(*it == type_of[v])) continue;
        eng.members[type_of[v]].push_back(v);
        eng.by_residue[mod5[v]][type_of[v]].push_back(v);
    }
    for (const VertexType& ty : types)
        if (!eng.members.count(ty))
            throw std::invalid_argument("order_by_queries: component types are not inhabited");

    // Exact per-type ranks via the mod-5 disambiguation.
    for (const VertexType& ty : types) {
        std::vector<int> pool[5];
        for (int r = 0; r < 5; ++r) {
            auto it = eng.by_residue[r].find(ty);
            if (it != eng.by_residue[r].end()) pool[r] = it->second;
        }
        auto approx = [&](int u, int v) { return eng.approx_same(u, v); };
        auto cmp = [&](int u, int v) { return eng.exact_cmp(u, v, pool, approx); };
        std::vector<int> xs = eng.members[ty];
        std::sort(xs.begin(), xs.end(), [&](int u, int v) { return cmp(u, v) < 0; });
        std::vector<int>& rk = eng.exact_rank[ty];
        rk.assign(t.n, -1);
        int r = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i > 0 && cmp(xs[i - 1], xs[i]) != 0) ++r;
            rk[xs[i]] = r;
        }
    }

    // Pairwise orders along a spanning tree of the component, then rank
    // propagation through same-factor ties.
    QueryOrder out;
    out.rank.assign(t.n, -1);

    std::set<VertexType> done;
    const VertexType& root_ty = types.front();
    for (int v : eng.members[root_ty]) out.rank[v] = eng.exact_rank[root_ty][v];
    done.insert(root_ty);

    auto adjacent = [&](const VertexType& a, const VertexType& b) {
        std::size_t ia =
            std::lower_bound(g.nodes.begin(), g.nodes.end(), a) - g.nodes.begin();
        std::size_t ib =
            std::lower_bound(g.nodes.begin(), g.nodes.end(), b) - g.nodes.begin();
        for (auto& [x, y] : g.edges)
            if ((x == ia && y == ib) || (x == ib && y == ia)) return true;
        return false;
    };

    while (done.size() < types.size()) {
        // Find an edge from the settled part into a new type.
        const VertexType* from = nullptr;
        const VertexType* to = nullptr;
        for (const VertexType& a : types) {
            if (!done.count(a)) continue;
            for (const VertexType& b : types) {
                if (done.count(b) || !adjacent(a, b)) continue;
                from = &a;
                to = &b;
                break;
            }
            if (from) break;
        }
        if (!from)
            throw std::invalid_argument("order_by_queries: component is not connected");

        const VertexType& ga = *from;
        const VertexType& gb = *to;
        bool d1 = eng.far(ga, gb);  // direction with the a-vertex earlier
        bool d2 = eng.far(gb, ga);  // direction with the b-vertex earlier

        // Backward-edge anchors for the two one-directional cases: for each
        // factor rank of one type, the rank of a witness on the other side.
        std::vector<int> anchor;
        if (d1 && !d2) {
            // Every far edge runs a -> b; backward edges b -> a pin factors.
            int ranks = 1 + *std::max_element(eng.exact_rank[ga].begin(),
                                              eng.exact_rank[ga].end());
            anchor.assign(ranks, -1);
            for (int u : eng.members[ga])
                for (int v : eng.members[gb])
                    if (t.edge(v, u)) {
                        int r = eng.exact_rank[ga][u];
                        if (anchor[r] < 0) anchor[r] = eng.exact_rank[gb][v];
                    }
            for (int r = 0; r < ranks; ++r)
                if (anchor[r] < 0)
                    throw TheoryViolation(
                        "order_by_queries: missing backward edge for a factor");
        } else if (!d1 && d2) {
            int ranks = 1 + *std::max_element(eng.exact_rank[gb].begin(),
                                              eng.exact_rank[gb].end());
            anchor.assign(ranks, -1);
            for (int v : eng.members[gb])
                for (int u : eng.members[ga])
                    if (t.edge(u, v)) {
                        int r = eng.exact_rank[gb][v];
                        if (anchor[r] < 0) anchor[r] = eng.exact_rank[ga][u];
                    }
            for (int r = 0; r < ranks; ++r)
                if (anchor[r] < 0)
                    throw TheoryViolation(
                        "order_by_queries: missing backward edge for a factor");
        }

        auto approx_cross = [&](int u, int v) -> int {
            // u and v of different types within {ga, gb}.
            bool u_is_a = type_of[u] == ga;
            int x = u_is_a ? u : v;  // the a-side vertex
            int y = u_is_a ? v : u;
            int sign = u_is_a ? 1 : -1;
            int res;
            if (d1 == d2) {
                // Edges run from (or to) the earlier factor in both
                // arrangements, so they reveal the order directly.
                bool xy = t.edge(x, y);
                bool x_earlier = d1 ? xy : !xy;
                res = x_earlier ? -1 : 1;
            } else if (d1) {
                // Always a -> b; anchor on x's factor.
                int va = anchor[eng.exact_rank[ga][x]];
                res = va <= eng.exact_rank[gb][y] ? -1 : 1;
            } else {
                // Always b -> a; anchor on y's factor.
                int ua = anchor[eng.exact_rank[gb][y]];
                res = ua <= eng.exact_rank[ga][x] ? 1 : -1;
            }
            return sign * res;
        };
        auto approx_mixed = [&](int u, int v) -> int {
            if (type_of[u] == type_of[v]) return eng.approx_same(u, v);
            return approx_cross(u, v);
        };

        std::vector<int> pool[5];
        for (int r = 0; r < 5; ++r) {
            for (const VertexType* ty : {&ga, &gb}) {
                auto it = eng.by_residue[r].find(*ty);
                if (it != eng.by_residue[r].end())
                    pool[r].insert(pool[r].end(), it->second.begin(), it->second.end());
            }
        }
        auto cmp = [&](int u, int v) { return eng.exact_cmp(u, v, pool, approx_mixed); };

        for (int v : eng.members[gb]) {
            int mate = -1;
            for (int u : eng.members[ga])
                if (cmp(u, v) == 0) {
                    mate = u;
                    break;
                }
            if (mate < 0)
                throw TheoryViolation("order_by_queries: no same-factor witness found");
            out.rank[v] = out.rank[mate];
        }
        done.insert(gb);
    }
    return out;
}

}  // namespace tdecomp
