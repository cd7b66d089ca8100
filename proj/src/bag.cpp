#include "tdecomp/bag.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tdecomp/errors.hpp"

namespace tdecomp {

std::string order_to_string(OrderK k) {
    if (k == 0) return "0";
    std::string s;
    while (k > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(k % 10)));
        k /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

Colour SparseRho::operator()(Colour c) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), c,
                               [](const auto& e, Colour key) { return e.first < key; });
    if (it != entries.end() && it->first == c) return it->second;
    return c;
}

void SparseRho::set(Colour from, Colour to) {
    auto it = std::lower_bound(entries.begin(), entries.end(), from,
                               [](const auto& e, Colour key) { return e.first < key; });
    if (it != entries.end() && it->first == from) {
        if (from == to)
            entries.erase(it);
        else
            it->second = to;
        return;
    }
    if (from != to) entries.insert(it, {from, to});
}

void DecompositionWord::push_letter(AtomicBag letter) {
    if (letter.has_vertex) {
        auto [it, inserted] = vertex_index.try_emplace(letter.vertex, letters.size());
        if (!inserted)
            throw std::invalid_argument("word: duplicate vertex id " +
                                        std::to_string(letter.vertex));
    }
    letters.push_back(std::move(letter));
}

void DecompositionWord::check_well_formed() const {
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const AtomicBag& l = letters[i];
        if (l.has_vertex) {
            auto it = vertex_index.find(l.vertex);
            if (it == vertex_index.end() || it->second != i)
                throw std::invalid_argument("word: vertex index out of sync at letter " +
                                            std::to_string(i));
            if (OrderK{l.colour} >= k)
                throw std::invalid_argument("word: colour out of range at letter " +
                                            std::to_string(i));
            for (Colour c : l.in_set)
                if (OrderK{c} >= k)
                    throw std::invalid_argument("word: in-set colour out of range at letter " +
                                                std::to_string(i));
        }
        for (auto& [from, to] : l.rho.entries)
            if (OrderK{from} >= k || OrderK{to} >= k)
                throw std::invalid_argument("word: recolouring out of range at letter " +
                                            std::to_string(i));
    }
    if (vertex_index.size() !=
        static_cast<std::size_t>(std::count_if(letters.begin(), letters.end(),
                                               [](const AtomicBag& l) { return l.has_vertex; })))
        throw std::invalid_argument("word: vertex index out of sync");
}

Bag empty_bag(std::uint32_t k) {
    Bag b;
    b.k = k;
    b.boundary.assign(k, BitRow(0));
    b.rho.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) b.rho[i] = i;
    return b;
}

Bag bag_of_letter(const AtomicBag& letter, OrderK k) {
    if (k > kDenseOrderCap)
        throw std::invalid_argument("bag_of_letter: order is too large for dense bags");
    std::uint32_t kk = static_cast<std::uint32_t>(k);
    Bag b = empty_bag(kk);
    for (std::uint32_t i = 0; i < kk; ++i) {
        Colour to = letter.rho(i);
        if (to >= kk) throw std::invalid_argument("bag_of_letter: recolouring out of range");
        b.rho[i] = to;
    }
    if (letter.has_vertex) {
        if (letter.colour >= kk)
            throw std::invalid_argument("bag_of_letter: colour out of range");
        b.ids.push_back(letter.vertex);
        b.internal_adj.assign(1, BitRow(1));
        b.lambda.push_back(letter.colour);
        for (std::uint32_t c = 0; c < kk; ++c) {
            b.boundary[c] = BitRow(1);
            b.boundary[c].set(
                0, std::binary_search(letter.in_set.begin(), letter.in_set.end(), Colour{c}));
        }
    }
    return b;
}

Bag product(const Bag& a, const Bag& b) {
    if (a.k != b.k) throw std::invalid_argument("product: bag orders differ");
    const std::size_t na = a.vertices(), nb = b.vertices(), n = na + nb;
    Bag r;
    r.k = a.k;
    r.ids = a.ids;
    r.ids.insert(r.ids.end(), b.ids.begin(), b.ids.end());
    {
        std::vector<VertexId> sorted = r.ids;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("product: vertex id collision");
    }

    r.internal_adj.assign(n, BitRow(n));
    for (std::size_t x = 0; x < na; ++x)
        for (std::size_t y = 0; y < na; ++y)
            r.internal_adj[x].set(y, a.internal_adj[x].get(y));
    for (std::size_t x = 0; x < nb; ++x)
        for (std::size_t y = 0; y < nb; ++y)
            r.internal_adj[na + x].set(na + y, b.internal_adj[x].get(y));
    // Cross edges: x in V(a) of colour c meets y in V(b) as input c does.
    for (std::size_t x = 0; x < na; ++x) {
        Colour c = a.lambda[x];
        for (std::size_t y = 0; y < nb; ++y) {
            bool fwd = b.boundary[c].get(y);
            r.internal_adj[x].set(na + y, fwd);
            r.internal_adj[na + y].set(x, !fwd);
        }
    }

    r.boundary.assign(r.k, BitRow(n));
    for (std::uint32_t i = 0; i < r.k; ++i) {
        for (std::size_t x = 0; x < na; ++x) r.boundary[i].set(x, a.boundary[i].get(x));
        Colour ri = a.rho[i];
        for (std::size_t y = 0; y < nb; ++y) r.boundary[i].set(na + y, b.boundary[ri].get(y));
    }

    r.lambda.resize(n);
    for (std::size_t x = 0; x < na; ++x) r.lambda[x] = b.rho[a.lambda[x]];
    for (std::size_t y = 0; y < nb; ++y) r.lambda[na + y] = b.lambda[y];

    r.rho.resize(r.k);
    for (std::uint32_t i = 0; i < r.k; ++i) r.rho[i] = b.rho[a.rho[i]];
    return r;
}

Bag fold_word(const DecompositionWord& w) {
    if (w.k > kDenseOrderCap)
        throw std::invalid_argument("fold_word: order is too large for dense bags");
    Bag acc = empty_bag(static_cast<std::uint32_t>(w.k));
    for (const AtomicBag& l : w.letters) acc = product(acc, bag_of_letter(l, w.k));
    return acc;
}

std::size_t Decoded::local(VertexId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
        throw std::invalid_argument("decoded: unknown vertex id " + std::to_string(id));
    return static_cast<std::size_t>(it - ids.begin());
}

Decoded decode(const DecompositionWord& w) {
    w.check_well_formed();
    Decoded d;
    std::vector<Colour> colour;           // running colour per placed vertex
    std::vector<std::vector<bool>> out;   // out[i][j]: edge order[i] -> order[j]
    for (const AtomicBag& l : w.letters) {
        // Edges first, against the colours before this letter's recolouring;
        // the recolouring applies to previously placed vertices only.
        bool placed = false;
        std::vector<bool> row_new;
        if (l.has_vertex) {
            std::size_t m = d.order.size();
            row_new.assign(m + 1, false);
            for (std::size_t u = 0; u < m; ++u) {
                bool fwd =
                    std::binary_search(l.in_set.begin(), l.in_set.end(), colour[u]);
                out[u].push_back(fwd);
                row_new[u] = !fwd;
            }
            placed = true;
        }
        if (!l.rho.is_identity())
            for (Colour& c : colour) c = l.rho(c);
        if (placed) {
            out.push_back(std::move(row_new));
            d.order.push_back(l.vertex);
            colour.push_back(l.colour);
        }
    }

    d.ids = d.order;
    std::sort(d.ids.begin(), d.ids.end());
    std::size_t n = d.ids.size();
    d.graph = Tournament(static_cast<int>(n));
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = d.local(d.order[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) d.graph.adj[pos[i]].set(pos[j], out[i][j]);
    return d;
}

DecompositionWord encode_trivial(const Tournament& t, const Ordering& o) {
    if (static_cast<int>(o.size()) != t.n)
        throw std::invalid_argument("encode_trivial: ordering size does not match");
    DecompositionWord w;
    w.k = static_cast<OrderK>(std::max(t.n, 1));
    for (int i = 0; i < t.n; ++i) {
        AtomicBag l;
        l.has_vertex = true;
        l.vertex = o[i];
        l.colour = static_cast<Colour>(i);
        for (int j = 0; j < i; ++j)
            if (t.edge(o[j], o[i])) l.in_set.push_back(static_cast<Colour>(j));
        w.push_letter(std::move(l));
    }
    return w;
}

Bag restrict_bag(const Bag& b, const std::vector<VertexId>& keep) {
    std::vector<std::size_t> locals;
    for (VertexId id : keep) {
        auto it = std::find(b.ids.begin(), b.ids.end(), id);
        if (it == b.ids.end())
            throw std::invalid_argument("restrict_bag: vertex " + std::to_string(id) +
                                        " is not in the bag");
        locals.push_back(static_cast<std::size_t>(it - b.ids.begin()));
    }
    std::sort(locals.begin(), locals.end());
    locals.erase(std::unique(locals.begin(), locals.end()), locals.end());

    Bag r;
    r.k = b.k;
    r.rho = b.rho;
    std::size_t m = locals.size();
    r.internal_adj.assign(m, BitRow(m));
    r.boundary.assign(b.k, BitRow(m));
    for (std::size_t x = 0; x < m; ++x) {
        r.ids.push_back(b.ids[locals[x]]);
        r.lambda.push_back(b.lambda[locals[x]]);
        for (std::size_t y = 0; y < m; ++y)
            r.internal_adj[x].set(y, b.internal_adj[locals[x]].get(locals[y]));
    }
    for (std::uint32_t c = 0; c < b.k; ++c)
        for (std::size_t x = 0; x < m; ++x) r.boundary[c].set(x, b.boundary[c].get(locals[x]));
    return r;
}

namespace {

Colour parse_colour(const std::string& tok, OrderK k, int line, int col) {
    Colour c = 0;
    try {
        c = std::stoull(tok);
    } catch (const std::exception&) {
        throw ParseError("word: expected colour, got '" + tok + "'", line, col);
    }
    if (c < 1 || OrderK{c} > k)
        throw ParseError("word: colour " + tok + " outside [" + order_to_string(k) + "]", line,
                         col);
    return c - 1;  // 1-based in files
}

}  // namespace

DecompositionWord read_word(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("word: missing header line", 1, 1);
    std::istringstream head(line);
    unsigned long long k = 0;
    std::size_t m = 0;
    if (!(head >> k >> m) || k == 0)
        throw ParseError("word: header must be 'k m' with k >= 1", 1, 1);

    DecompositionWord w;
    w.k = k;
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(in, line))
            throw ParseError("word: expected " + std::to_string(m) + " letters",
                             static_cast<int>(i) + 2, 1);
        int lineno = static_cast<int>(i) + 2;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        AtomicBag l;
        if (kind == "V") {
            unsigned long long id;
            std::string ctok, bits;
            if (!(ls >> id >> ctok >> bits))
                throw ParseError("word: V line needs 'id c bits rho'", lineno, 1);
            l.has_vertex = true;
            l.vertex = static_cast<VertexId>(id);
            l.colour = parse_colour(ctok, w.k, lineno, 2);
            if (bits.size() != k)
                throw ParseError("word: in-set bitstring must have length " +
                                     std::to_string(k),
                                 lineno, 3);
            for (std::size_t c = 0; c < k; ++c) {
                if (bits[c] != '0' && bits[c] != '1')
                    throw ParseError("word: in-set bits must be 0/1", lineno,
                                     static_cast<int>(c) + 1);
                if (bits[c] == '1') l.in_set.push_back(c);
            }
        } else if (kind != "R") {
            throw ParseError("word: letter must start with R or V", lineno, 1);
        }
        for (std::size_t c = 0; c < k; ++c) {
            std::string tok;
            if (!(ls >> tok))
                throw ParseError("word: recolouring needs " + std::to_string(k) + " entries",
                                 lineno, 1);
            Colour to = parse_colour(tok, w.k, lineno, 1);
            if (to != c) l.rho.set(c, to);
        }
        std::string extra;
        if (ls >> extra) throw ParseError("word: trailing tokens", lineno, 1);
        try {
            w.push_letter(std::move(l));
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("word: ") + e.what(), lineno, 1);
        }
    }
    return w;
}

DecompositionWord rotating_witness_word(int n) {
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("rotating_witness_word: n must be odd and positive");
    DecompositionWord w;
    w.k = 2;
    int m = (n + 1) / 2;  // vertices 0..m-1 sit on the bottom row
    for (int i = 0; i < n; ++i) {
        bool bottom = i % 2 == 0;
        AtomicBag l;
        l.has_vertex = true;
        l.vertex = bottom ? static_cast<VertexId>(i / 2)
                          : static_cast<VertexId>(m + i / 2);
        l.colour = bottom ? 0 : 1;
        l.in_set = {l.colour};
        w.push_letter(std::move(l));
    }
    return w;
}

DecompositionWord inverted_path_witness_word(int n) {
    if (n < 1) throw std::invalid_argument("inverted_path_witness_word: n must be positive");
    DecompositionWord w;
    w.k = 2;
    for (int i = 0; i < n; ++i) {
        AtomicBag l;
        l.has_vertex = true;
        l.vertex = static_cast<VertexId>(i);
        l.colour = 0;
        l.in_set = {1};
        l.rho.set(0, 1);
        w.push_letter(std::move(l));
    }
    return w;
}

void write_word(std::ostream& out, const DecompositionWord& w) {
    if (w.k > 65536)
        throw std::invalid_argument(
            "write_word: order " + order_to_string(w.k) +
            " is too large for the dense text format");
    std::size_t k = static_cast<std::size_t>(w.k);
    out << k << " " << w.letters.size() << "\n";
    for (const AtomicBag& l : w.letters) {
        if (l.has_vertex) {
            std::string bits(k, '0');
            for (Colour c : l.in_set) bits[static_cast<std::size_t>(c)] = '1';
            out << "V " << l.vertex << " " << (l.colour + 1) << " " << bits;
        } else {
            out << "R";
        }
        for (std::size_t c = 0; c < k; ++c) out << " " << (l.rho(c) + 1);
        out << "\n";
    }
}

}  // namespace tdecomp
