#include "tdecomp/forest.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tdecomp/errors.hpp"

namespace tdecomp {

std::unique_ptr<ForestNode> ForestNode::clone() const {
    auto n = std::make_unique<ForestNode>();
    n->kind = kind;
    n->begin = begin;
    n->end = end;
    n->type = type;
    for (const auto& c : children) n->children.push_back(c->clone());
    return n;
}

std::unique_ptr<ForestNode> clone_shifted(const ForestNode& node, std::size_t offset) {
    auto n = std::make_unique<ForestNode>();
    n->kind = node.kind;
    n->begin = node.begin - offset;
    n->end = node.end - offset;
    n->type = node.type;
    for (const auto& c : node.children) n->children.push_back(clone_shifted(*c, offset));
    return n;
}

DecompositionWord slice_word(const DecompositionWord& w, std::size_t begin,
                             std::size_t end) {
    DecompositionWord out;
    out.k = w.k;
    for (std::size_t i = begin; i < end; ++i) out.push_letter(w.letters[i]);
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Interval DP for optimal-depth forests.

struct Entry {
    int p, q;
    ForestNode::Kind kind;
};

// Keeps candidates that are not dominated in both coordinates; sorted by
// increasing p, decreasing q.
void front_insert(std::vector<Entry>& front, Entry cand) {
    for (const Entry& e : front)
        if (e.p <= cand.p && e.q <= cand.q) return;
    std::erase_if(front, [&](const Entry& e) { return cand.p <= e.p && cand.q <= e.q; });
    auto pos = std::lower_bound(front.begin(), front.end(), cand,
                                [](const Entry& a, const Entry& b) { return a.p < b.p; });
    front.insert(pos, cand);
}

struct ForestDp {
    const DecompositionWord& w;
    std::size_t m;
    std::vector<BagType> interned;
    std::unordered_map<BagType, int, BagTypeHash> type_id;
    std::vector<char> idem;               // per interned id
    std::vector<std::vector<int>> fold;   // fold[i][j], j >= i
    std::vector<std::vector<std::vector<Entry>>> front;  // front[i][j]

    explicit ForestDp(const DecompositionWord& word) : w(word), m(word.size()) {}

    int intern(const BagType& t) {
        auto it = type_id.find(t);
        if (it != type_id.end()) return it->second;
        int id = static_cast<int>(interned.size());
        interned.push_back(t);
        type_id.emplace(t, id);
        idem.push_back(is_idempotent(t) ? 1 : 0);
        return id;
    }

    void build_tables() {
        fold.assign(m, std::vector<int>(m, -1));
        for (std::size_t i = 0; i < m; ++i)
            fold[i][i] = intern(bag_type_of(bag_of_letter(w.letters[i], w.k)));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                fold[i][j] =
                    intern(type_product(interned[fold[i][j - 1]], interned[fold[j][j]]));
    }

    // Pareto profiles of (max p, max q) over partitions of (i-1, x] into >= 1
    // chunks, each folding to type e. back[x] records (prev boundary, chunk
    // entry) pairs aligned with the returned profiles when tracing is needed.
    struct ReachEntry {
        int p, q;
        std::ptrdiff_t prev;  // previous boundary y (chunk is [y+1, x])
        Entry chunk;
    };

    std::vector<std::vector<ReachEntry>> reach_table(std::size_t i, std::size_t j,
                                                     int e) const {
        std::vector<std::vector<ReachEntry>> reach(j - i + 1);
        for (std::size_t x = i; x <= j; ++x) {
            auto& out = reach[x - i];
            for (std::ptrdiff_t y = static_cast<std::ptrdiff_t>(x) - 1;
                 y >= static_cast<std::ptrdiff_t>(i) - 1; --y) {
                std::size_t a = static_cast<std::size_t>(y + 1);
                if (fold[a][x] != e) continue;
                for (const Entry& chunk : front[a][x]) {
                    int p = chunk.p, q = chunk.q;
                    if (y >= static_cast<std::ptrdiff_t>(i)) {
                        for (const ReachEntry& prev : reach[y - i]) {
                            ReachEntry cand{std::max(prev.p, p), std::max(prev.q, q), y,
                                            chunk};
                            insert_reach(out, cand);
                        }
                    } else {
                        insert_reach(out, ReachEntry{p, q, y, chunk});
                    }
                }
            }
        }
        return reach;
    }

    static void insert_reach(std::vector<ReachEntry>& front, ReachEntry cand) {
        for (const ReachEntry& e : front)
            if (e.p <= cand.p && e.q <= cand.q) return;
        std::erase_if(front,
                      [&](const ReachEntry& e) { return cand.p <= e.p && cand.q <= e.q; });
        front.push_back(cand);
    }

    void run() {
        front.assign(m, std::vector<std::vector<Entry>>(m));
        for (std::size_t i = 0; i < m; ++i)
            front[i][i].push_back(Entry{0, 0, ForestNode::Kind::Leaf});
        for (std::size_t len = 2; len <= m; ++len) {
            for (std::size_t i = 0; i + len <= m; ++i) {
                std::size_t j = i + len - 1;
                auto& f = front[i][j];
                for (std::size_t mid = i; mid < j; ++mid)
                    for (const Entry& l : front[i][mid])
                        for (const Entry& r : front[mid + 1][j])
                            front_insert(f, Entry{std::max(l.p, r.p),
                                                  std::max(l.q, r.q) + 1,
                                                  ForestNode::Kind::Binary});
                int e = fold[i][j];
                if (idem[e]) {
                    auto reach = reach_table(i, j, e);
                    for (std::size_t y = i; y < j; ++y) {
                        if (fold[y + 1][j] != e) continue;
                        for (const ReachEntry& prev : reach[y - i])
                            for (const Entry& last : front[y + 1][j])
                                front_insert(f, Entry{std::max(prev.p, last.p) + 1,
                                                      std::max(prev.q, last.q),
                                                      ForestNode::Kind::Idempotent});
                    }
                }
            }
        }
    }

    std::unique_ptr<ForestNode> materialize(std::size_t i, std::size_t j,
                                            const Entry& entry) const {
        auto node = std::make_unique<ForestNode>();
        node->begin = i;
        node->end = j + 1;
        node->type = interned[fold[i][j]];
        node->kind = entry.kind;
        if (entry.kind == ForestNode::Kind::Leaf) return node;

        if (entry.kind == ForestNode::Kind::Binary) {
            for (std::size_t mid = i; mid < j; ++mid)
                for (const Entry& l : front[i][mid])
                    for (const Entry& r : front[mid + 1][j])
                        if (std::max(l.p, r.p) == entry.p &&
                            std::max(l.q, r.q) + 1 == entry.q) {
                            node->children.push_back(materialize(i, mid, l));
                            node->children.push_back(materialize(mid + 1, j, r));
                            return node;
                        }
            throw TheoryViolation("build_forest: lost binary derivation");
        }

        int e = fold[i][j];
        auto reach = reach_table(i, j, e);
        for (std::size_t y = i; y < j; ++y) {
            if (fold[y + 1][j] != e) continue;
            for (const ReachEntry& prev : reach[y - i])
                for (const Entry& last : front[y + 1][j]) {
                    if (std::max(prev.p, last.p) + 1 != entry.p ||
                        std::max(prev.q, last.q) != entry.q)
                        continue;
                    // Trace chunk boundaries right to left.
                    std::vector<std::pair<std::size_t, Entry>> chunks;
                    chunks.emplace_back(y + 1, last);
                    const ReachEntry* cur = &prev;
                    std::size_t x = y;
                    while (true) {
                        std::size_t a = static_cast<std::size_t>(cur->prev + 1);
                        chunks.emplace_back(a, cur->chunk);
                        if (cur->prev < static_cast<std::ptrdiff_t>(i)) break;
                        std::size_t nx = static_cast<std::size_t>(cur->prev);
                        // Find the reach entry this one extended.
                        const ReachEntry* next = nullptr;
                        for (const ReachEntry& cand : reach[nx - i])
                            if (std::max(cand.p, cur->chunk.p) == cur->p &&
                                std::max(cand.q, cur->chunk.q) == cur->q) {
                                next = &cand;
                                break;
                            }
                        if (!next) throw TheoryViolation("build_forest: lost chunk trace");
                        x = nx;
                        cur = next;
                    }
                    (void)x;
                    std::reverse(chunks.begin(), chunks.end());
                    std::size_t pos = i;
                    for (std::size_t c = 0; c < chunks.size(); ++c) {
                        std::size_t cb = chunks[c].first;
                        std::size_t ce = (c + 1 < chunks.size() ? chunks[c + 1].first : j + 1);
                        if (cb != pos) throw TheoryViolation("build_forest: bad chunk span");
                        node->children.push_back(materialize(cb, ce - 1, chunks[c].second));
                        pos = ce;
                    }
                    return node;
                }
        }
        throw TheoryViolation("build_forest: lost idempotent derivation");
    }
};

}  // namespace

BuiltForest build_forest(const DecompositionWord& w, std::size_t submonoid_cap) {
    if (w.size() == 0) throw std::invalid_argument("build_forest: empty word");
    if (w.k > kDenseOrderCap)
        throw std::invalid_argument("build_forest: order too large for the type machinery");

    ForestDp dp(w);
    dp.build_tables();

    std::vector<BagType> gens;
    {
        std::unordered_set<int> seen;
        for (std::size_t i = 0; i < dp.m; ++i)
            if (seen.insert(dp.fold[i][i]).second) gens.push_back(dp.interned[dp.fold[i][i]]);
    }
    TypeMonoid monoid = submonoid_closure(gens, submonoid_cap);
    std::size_t s = monoid.size();

    dp.run();
    const auto& root_front = dp.front[0][dp.m - 1];
    const Entry* chosen = nullptr;
    for (const Entry& e : root_front) {
        bool certified = e.p <= static_cast<int>(s) && e.q <= 2 * static_cast<int>(s);
        if (!certified) continue;
        if (!chosen || e.p < chosen->p || (e.p == chosen->p && e.q < chosen->q)) chosen = &e;
    }
    if (!chosen) {
        // No Pareto point satisfies the certificate; surface the best one and
        // let the caller see the theory violation.
        chosen = &root_front.front();
    }

    BuiltForest out;
    out.root = dp.materialize(0, dp.m - 1, *chosen);
    out.depth = Depth{chosen->p, chosen->q};
    out.submonoid_size = s;

    Depth measured = measure_depth(*out.root);
    if (!(measured == out.depth))
        throw TheoryViolation("build_forest: materialized depth disagrees with the DP");
    if (measured.p > static_cast<int>(s) || measured.q > 2 * static_cast<int>(s))
        throw TheoryViolation(
            "build_forest: depth (" + std::to_string(measured.p) + "," +
            std::to_string(measured.q) + ") exceeds the certificate (|S|,2|S|) with |S|=" +
            std::to_string(s));
    return out;
}

Depth measure_depth(const ForestNode& node) {
    if (node.kind == ForestNode::Kind::Leaf) return {0, 0};
    Depth d{0, 0};
    for (const auto& c : node.children) {
        Depth cd = measure_depth(*c);
        d.p = std::max(d.p, cd.p);
        d.q = std::max(d.q, cd.q);
    }
    if (node.kind == ForestNode::Kind::Binary)
        ++d.q;
    else
        ++d.p;
    return d;
}

namespace {

std::optional<Violation> validate_node(const ForestNode& node, const DecompositionWord& w,
                                       const std::string& path) {
    auto fail = [&](const std::string& msg) { return Violation{path, msg}; };
    if (node.begin >= node.end) return fail("empty span");
    if (node.end > w.size()) return fail("span exceeds the word");

    switch (node.kind) {
        case ForestNode::Kind::Leaf: {
            if (!node.children.empty()) return fail("leaf with children");
            if (node.end - node.begin != 1) return fail("leaf spanning several letters");
            if (!(node.type == bag_type_of(bag_of_letter(w.letters[node.begin], w.k))))
                return fail("leaf type differs from the letter type");
            return std::nullopt;
        }
        case ForestNode::Kind::Binary: {
            if (node.children.size() != 2) return fail("binary node without two children");
            break;
        }
        case ForestNode::Kind::Idempotent: {
            if (node.children.size() < 2)
                return fail("idempotent node needs at least two children");
            if (!is_idempotent(node.type)) return fail("idempotent node type is not idempotent");
            for (std::size_t c = 0; c < node.children.size(); ++c)
                if (!(node.children[c]->type == node.type))
                    return fail("child " + std::to_string(c) +
                                " has a different type than the idempotent node");
            break;
        }
    }

    std::size_t pos = node.begin;
    for (std::size_t c = 0; c < node.children.size(); ++c) {
        const ForestNode& child = *node.children[c];
        if (child.begin != pos)
            return fail("child " + std::to_string(c) + " does not continue the span");
        pos = child.end;
        if (auto v = validate_node(child, w, path + "." + std::to_string(c))) return v;
    }
    if (pos != node.end) return fail("children do not cover the span");

    BagType folded = node.children[0]->type;
    for (std::size_t c = 1; c < node.children.size(); ++c)
        folded = type_product(folded, node.children[c]->type);
    if (!(folded == node.type)) return fail("cached type differs from the children fold");
    return std::nullopt;
}

}  // namespace

std::optional<Violation> validate_forest(const ForestNode& root,
                                         const DecompositionWord& w) {
    if (root.begin != 0 || root.end != w.size())
        return Violation{"root", "root span does not cover the word"};
    return validate_node(root, w, "root");
}

namespace {

struct VertexTypeHash {
    std::size_t operator()(const VertexType& t) const { return t.hash_value(); }
};

using TypeSet = std::unordered_set<VertexType, VertexTypeHash>;

struct Restrictor {
    const DecompositionWord& w;
    const TypeSet& target;
    std::uint32_t k;
    std::vector<AtomicBag> new_letters;

    bool member(const VertexType& a, const std::vector<Colour>& g,
                const std::vector<Colour>& h) const {
        return target.count(f_map(g, h, a)) != 0;
    }

    // Context (g, h): a vertex of the current bag with type a survives iff
    // f_{g,h}(a) lies in the target set.
    std::unique_ptr<ForestNode> restrict(const ForestNode& node,
                                         const std::vector<Colour>& g,
                                         const std::vector<Colour>& h) {
        switch (node.kind) {
            case ForestNode::Kind::Leaf: {
                AtomicBag l = w.letters[node.begin];
                if (l.has_vertex) {
                    VertexType vt;
                    vt.colour = l.colour;
                    vt.bvec = BitRow(k);
                    for (Colour c : l.in_set) vt.bvec.set(static_cast<std::size_t>(c), true);
                    if (!member(vt, g, h)) {
                        l.has_vertex = false;
                        l.vertex = 0;
                        l.colour = 0;
                        l.in_set.clear();
                    }
                }
                auto out = std::make_unique<ForestNode>();
                out->kind = ForestNode::Kind::Leaf;
                out->begin = node.begin;
                out->end = node.end;
                out->type = bag_type_of(bag_of_letter(l, w.k));
                new_letters[node.begin] = std::move(l);
                return out;
            }
            case ForestNode::Kind::Binary: {
                const ForestNode& left = *node.children[0];
                const ForestNode& right = *node.children[1];
                auto lc = compose(identity(), left_h(right.type.rho), g, h);
                auto rc = compose(left_g(left.type.rho), identity(), g, h);
                auto nl = restrict(left, lc.first, lc.second);
                auto nr = restrict(right, rc.first, rc.second);
                auto out = std::make_unique<ForestNode>();
                out->kind = ForestNode::Kind::Binary;
                out->begin = node.begin;
                out->end = node.end;
                out->type = type_product(nl->type, nr->type);
                out->children.push_back(std::move(nl));
                out->children.push_back(std::move(nr));
                return out;
            }
            case ForestNode::Kind::Idempotent:
                return restrict_idempotent(node, g, h);
        }
        throw std::logic_error("unreachable");
    }

    std::vector<Colour> identity() const {
        std::vector<Colour> id(k);
        for (std::uint32_t i = 0; i < k; ++i) id[i] = i;
        return id;
    }
    std::vector<Colour> left_g(const std::vector<Colour>& rho) const { return rho; }
    std::vector<Colour> left_h(const std::vector<Colour>& rho) const { return rho; }

    // Child context from the local pullback (g_loc, h_loc) composed with the
    // inherited (g, h); f_{g_loc,h_loc} applies first.
    std::pair<std::vector<Colour>, std::vector<Colour>> compose(
        const std::vector<Colour>& g_loc, const std::vector<Colour>& h_loc,
        const std::vector<Colour>& g, const std::vector<Colour>& h) const {
        std::vector<Colour> ng(k), nh(k);
        for (std::uint32_t i = 0; i < k; ++i) {
            ng[i] = g_loc[g[i]];
            nh[i] = h[h_loc[i]];
        }
        return {std::move(ng), std::move(nh)};
    }

    std::unique_ptr<ForestNode> restrict_idempotent(const ForestNode& node,
                                                    const std::vector<Colour>& g,
                                                    const std::vector<Colour>& h) {
        const BagType& e = node.type;
        std::size_t n = node.children.size();
        auto first_ctx = compose(identity(), e.rho, g, h);
        auto mid_ctx = compose(e.rho, e.rho, g, h);
        auto last_ctx = compose(e.rho, identity(), g, h);

        std::vector<std::unique_ptr<ForestNode>> restricted;
        for (std::size_t c = 0; c < n; ++c) {
            const auto& ctx = c == 0 ? first_ctx : (c + 1 == n ? last_ctx : mid_ctx);
            restricted.push_back(restrict(*node.children[c], ctx.first, ctx.second));
        }

        auto out = std::make_unique<ForestNode>();
        out->begin = node.begin;
        out->end = node.end;

        bool all_equal = true;
        for (std::size_t c = 1; c < n; ++c)
            all_equal &= restricted[c]->type == restricted[0]->type;
        if (all_equal && is_idempotent(restricted[0]->type)) {
            out->kind = ForestNode::Kind::Idempotent;
            out->type = restricted[0]->type;
            out->children = std::move(restricted);
            return out;
        }

        if (n == 2) {
            out->kind = ForestNode::Kind::Binary;
            out->type = type_product(restricted[0]->type, restricted[1]->type);
            out->children = std::move(restricted);
            return out;
        }

        // The restriction of every middle factor must land on one idempotent
        // type determined by e and the target alone.
        std::vector<VertexType> surviving;
        for (const VertexType& a : e.inhabited)
            if (member(a, mid_ctx.first, mid_ctx.second)) surviving.push_back(a);
        BagType tau = restrict_type(e, surviving);
        for (std::size_t c = 1; c + 1 < n; ++c)
            if (!(restricted[c]->type == tau))
                throw TheoryViolation(
                    "restrict_forest: middle factor " + std::to_string(c) +
                    " does not have the predicted restricted type");
        if (!is_idempotent(tau))
            throw TheoryViolation("restrict_forest: the restricted middle type is not idempotent");

        std::unique_ptr<ForestNode> mid;
        if (n == 3) {
            mid = std::move(restricted[1]);
        } else {
            mid = std::make_unique<ForestNode>();
            mid->kind = ForestNode::Kind::Idempotent;
            mid->begin = restricted[1]->begin;
            mid->end = restricted[n - 2]->end;
            mid->type = tau;
            for (std::size_t c = 1; c + 1 < n; ++c) mid->children.push_back(std::move(restricted[c]));
        }

        auto inner = std::make_unique<ForestNode>();
        inner->kind = ForestNode::Kind::Binary;
        inner->begin = mid->begin;
        inner->end = restricted[n - 1]->end;
        inner->type = type_product(mid->type, restricted[n - 1]->type);
        inner->children.push_back(std::move(mid));
        inner->children.push_back(std::move(restricted[n - 1]));

        out->kind = ForestNode::Kind::Binary;
        out->type = type_product(restricted[0]->type, inner->type);
        out->children.push_back(std::move(restricted[0]));
        out->children.push_back(std::move(inner));
        return out;
    }
};

}  // namespace

RestrictedForest restrict_forest(const ForestNode& root, const DecompositionWord& w,
                                 const std::vector<VertexType>& g_set) {
    if (root.begin != 0 || root.end != w.size())
        throw std::invalid_argument("restrict_forest: forest does not cover the word");
    if (w.k > kDenseOrderCap)
        throw std::invalid_argument("restrict_forest: order too large for the type machinery");

    Depth in = measure_depth(root);
    TypeSet target(g_set.begin(), g_set.end());
    Restrictor r{w, target, static_cast<std::uint32_t>(w.k), {}};
    r.new_letters.resize(w.size());

    RestrictedForest out;
    out.root = r.restrict(root, r.identity(), r.identity());
    out.word.k = w.k;
    for (auto& l : r.new_letters) out.word.push_letter(std::move(l));
    out.depth = measure_depth(*out.root);
    if (out.depth.p > in.p || out.depth.q > in.q + 2 * in.p)
        throw TheoryViolation("restrict_forest: depth (" + std::to_string(out.depth.p) + "," +
                              std::to_string(out.depth.q) + ") exceeds (p, q+2p) from (" +
                              std::to_string(in.p) + "," + std::to_string(in.q) + ")");
    return out;
}

namespace {

void split_walk(const ForestNode& node, int depth, std::vector<int>& s) {
    s[node.begin] = std::min(s[node.begin], depth);
    for (const auto& c : node.children) split_walk(*c, depth + 1, s);
}

}  // namespace

std::vector<int> split_encoding(const ForestNode& root) {
    std::vector<int> s(root.end - root.begin, std::numeric_limits<int>::max());
    split_walk(root, 0, s);
    return s;
}

namespace {

BagType range_type(const ForestNode& node, std::size_t i, std::size_t j) {
    if (node.begin == i && node.end == j + 1) return node.type;
    std::size_t a = 0;
    while (node.children[a]->end <= i) ++a;
    std::size_t b = node.children.size() - 1;
    while (node.children[b]->begin > j) --b;
    if (a == b) return range_type(*node.children[a], i, j);

    BagType acc = range_type(*node.children[a], i, node.children[a]->end - 1);
    if (b - a > 1) {
        if (node.kind == ForestNode::Kind::Idempotent) {
            // Fully covered middle children all carry the idempotent type.
            acc = type_product(acc, node.type);
        } else {
            for (std::size_t c = a + 1; c < b; ++c)
                acc = type_product(acc, node.children[c]->type);
        }
    }
    return type_product(acc, range_type(*node.children[b], node.children[b]->begin, j));
}

}  // namespace

BagType FactorIndex::query(std::size_t i, std::size_t j) const {
    if (i > j || i < root_->begin || j >= root_->end)
        throw std::invalid_argument("factor query out of range");
    return range_type(*root_, i, j);
}

namespace {

void dump_node(const ForestNode& node, int indent, std::ostringstream& os) {
    for (int i = 0; i < indent; ++i) os << "  ";
    switch (node.kind) {
        case ForestNode::Kind::Leaf: os << "leaf"; break;
        case ForestNode::Kind::Binary: os << "binary"; break;
        case ForestNode::Kind::Idempotent: os << "idempotent"; break;
    }
    os << " [" << node.begin + 1 << "," << node.end << "] " << canonical_text(node.type);
    if (indent == 0) {
        Depth d = measure_depth(node);
        os << " depth=(" << d.p << "," << d.q << ")";
    }
    os << "\n";
    for (const auto& c : node.children) dump_node(*c, indent + 1, os);
}

}  // namespace

std::string dump_forest(const ForestNode& root) {
    std::ostringstream os;
    dump_node(root, 0, os);
    return os.str();
}

}  // namespace tdecomp
