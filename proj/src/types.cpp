#include "tdecomp/types.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "tdecomp/errors.hpp"

namespace tdecomp {

std::string VertexType::to_string() const {
    return std::to_string(colour) + "|" + bvec.to_string();
}

std::size_t BagType::hash_value() const {
    std::size_t h = 0x2545f4914f6cdd1dull;
    for (Colour c : rho) h = (h ^ c) * 0x100000001b3ull;
    for (const VertexType& t : inhabited) h = (h ^ t.hash_value()) * 0x100000001b3ull;
    for (HomDir d : hom) h = (h ^ static_cast<std::size_t>(d)) * 0x100000001b3ull;
    return h;
}

std::string canonical_text(const BagType& t) {
    std::ostringstream os;
    os << "rho=(";
    for (std::size_t i = 0; i < t.rho.size(); ++i) os << (i ? "," : "") << t.rho[i];
    os << "); inh=[";
    for (std::size_t i = 0; i < t.inhabited.size(); ++i)
        os << (i ? "," : "") << t.inhabited[i].to_string();
    os << "]; hom=[";
    bool first = true;
    for (std::size_t i = 0; i < t.inhabited.size(); ++i)
        for (std::size_t j = i + 1; j < t.inhabited.size(); ++j) {
            if (!first) os << ",";
            first = false;
            switch (t.hom_at(i, j)) {
                case HomDir::Fwd: os << "(" << i << ">" << j << ")"; break;
                case HomDir::Bwd: os << "(" << i << "<" << j << ")"; break;
                case HomDir::Mixed: os << "(" << i << "~" << j << ")"; break;
            }
        }
    os << "]";
    return os.str();
}

BagType identity_type(std::uint32_t k) {
    BagType t;
    t.rho.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) t.rho[i] = i;
    return t;
}

VertexType vertex_type_of(const Bag& b, VertexId v) {
    auto it = std::find(b.ids.begin(), b.ids.end(), v);
    if (it == b.ids.end())
        throw std::invalid_argument("vertex_type_of: vertex " + std::to_string(v) +
                                    " is not in the bag");
    std::size_t l = static_cast<std::size_t>(it - b.ids.begin());
    VertexType t;
    t.colour = b.lambda[l];
    t.bvec = BitRow(b.k);
    for (std::uint32_t c = 0; c < b.k; ++c) t.bvec.set(c, b.boundary[c].get(l));
    return t;
}

VertexType f_map(const std::vector<Colour>& g, const std::vector<Colour>& h,
                 const VertexType& a) {
    VertexType r;
    r.colour = h[a.colour];
    r.bvec = BitRow(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) r.bvec.set(i, a.bvec.get(g[i]));
    return r;
}

namespace {

struct DirAccum {
    bool fwd = false, bwd = false, mixed = false;

    void add(HomDir d, bool flip) {
        if (d == HomDir::Mixed)
            mixed = true;
        else if ((d == HomDir::Fwd) != flip)
            fwd = true;
        else
            bwd = true;
    }
    void add_dir(bool forward) { (forward ? fwd : bwd) = true; }
    HomDir result() const {
        if (mixed || (fwd && bwd)) return HomDir::Mixed;
        return fwd ? HomDir::Fwd : HomDir::Bwd;
    }
};

}  // namespace

BagType bag_type_of(const Bag& b) {
    BagType t;
    t.rho = b.rho;
    std::map<VertexType, std::vector<std::size_t>> classes;
    for (std::size_t l = 0; l < b.vertices(); ++l)
        classes[vertex_type_of(b, b.ids[l])].push_back(l);
    for (auto& [vt, members] : classes) t.inhabited.push_back(vt);

    std::size_t m = t.inhabited.size();
    t.hom.assign(m * (m - 1) / 2, HomDir::Mixed);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& ci = classes[t.inhabited[i]];
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& cj = classes[t.inhabited[j]];
            DirAccum acc;
            for (std::size_t x : ci)
                for (std::size_t y : cj) acc.add_dir(b.internal_adj[x].get(y));
            t.hom[t.pair_index(i, j)] = acc.result();
        }
    }
    return t;
}

BagType type_product(const BagType& s, const BagType& t) {
    if (s.order() != t.order())
        throw std::invalid_argument("type_product: orders differ");
    std::uint32_t k = s.order();

    BagType r;
    r.rho.resize(k);
    bool s_id = true, t_id = true;
    for (std::uint32_t i = 0; i < k; ++i) {
        r.rho[i] = t.rho[s.rho[i]];
        s_id &= s.rho[i] == i;
        t_id &= t.rho[i] == i;
    }

    // Left types recoloured by the right rho, right types with boundary
    // pulled back through the left rho. Identity recolourings keep the
    // types as they are, which is the common case in closures.
    std::vector<VertexType> img1, img2;
    if (t_id) {
        img1 = s.inhabited;
    } else {
        std::vector<Colour> id(k);
        for (std::uint32_t i = 0; i < k; ++i) id[i] = i;
        img1.reserve(s.inhabited.size());
        for (const VertexType& a : s.inhabited) img1.push_back(f_map(id, t.rho, a));
    }
    if (s_id) {
        img2 = t.inhabited;
    } else {
        std::vector<Colour> id(k);
        for (std::uint32_t i = 0; i < k; ++i) id[i] = i;
        img2.reserve(t.inhabited.size());
        for (const VertexType& b : t.inhabited) img2.push_back(f_map(s.rho, id, b));
    }

    r.inhabited.reserve(img1.size() + img2.size());
    if (t_id && s_id) {
        // Both images stay sorted; merge instead of re-sorting.
        std::merge(img1.begin(), img1.end(), img2.begin(), img2.end(),
                   std::back_inserter(r.inhabited));
    } else {
        r.inhabited = img1;
        r.inhabited.insert(r.inhabited.end(), img2.begin(), img2.end());
        std::sort(r.inhabited.begin(), r.inhabited.end());
    }
    r.inhabited.erase(std::unique(r.inhabited.begin(), r.inhabited.end()),
                      r.inhabited.end());

    std::size_t m = r.inhabited.size();
    auto index_of = [&](const VertexType& vt) {
        return static_cast<std::size_t>(
            std::lower_bound(r.inhabited.begin(), r.inhabited.end(), vt) -
            r.inhabited.begin());
    };
    std::vector<std::size_t> to1(img1.size()), to2(img2.size());
    for (std::size_t i = 0; i < img1.size(); ++i) to1[i] = index_of(img1[i]);
    for (std::size_t j = 0; j < img2.size(); ++j) to2[j] = index_of(img2[j]);

    std::vector<DirAccum> acc(m * (m - 1) / 2);
    auto at = [&](std::size_t x, std::size_t y) -> std::pair<DirAccum&, bool> {
        // Returns the accumulator of the unordered pair plus whether (x, y)
        // is flipped relative to the canonical order.
        if (x < y) return {acc[r.pair_index(x, y)], false};
        return {acc[r.pair_index(y, x)], true};
    };

    // Pairs inside the left factor.
    for (std::size_t i = 0; i < img1.size(); ++i)
        for (std::size_t j = i + 1; j < img1.size(); ++j) {
            if (to1[i] == to1[j]) continue;
            auto [a, flip] = at(to1[i], to1[j]);
            a.add(s.hom_at(i, j), flip);
        }
    // Pairs inside the right factor.
    for (std::size_t i = 0; i < img2.size(); ++i)
        for (std::size_t j = i + 1; j < img2.size(); ++j) {
            if (to2[i] == to2[j]) continue;
            auto [a, flip] = at(to2[i], to2[j]);
            a.add(t.hom_at(i, j), flip);
        }
    // Cross pairs: the edge between a left vertex of pre-type a and a right
    // vertex of pre-type b is left -> right exactly when b's boundary sends
    // a's colour forward.
    for (std::size_t i = 0; i < img1.size(); ++i)
        for (std::size_t j = 0; j < img2.size(); ++j) {
            if (to1[i] == to2[j]) continue;
            bool left_to_right =
                t.inhabited[j].bvec.get(static_cast<std::size_t>(s.inhabited[i].colour));
            auto [a, flip] = at(to1[i], to2[j]);
            a.add_dir(left_to_right != flip);
        }

    r.hom.resize(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            r.hom[r.pair_index(i, j)] = acc[r.pair_index(i, j)].result();
    return r;
}

bool is_idempotent(const BagType& t) { return type_product(t, t) == t; }

std::vector<VertexType> all_vertex_types(std::uint32_t k) {
    if (k > 16)
        throw std::invalid_argument("all_vertex_types: order too large to enumerate");
    std::vector<VertexType> out;
    for (Colour c = 0; c < k; ++c)
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
            VertexType t;
            t.colour = c;
            t.bvec = BitRow(k);
            for (std::uint32_t i = 0; i < k; ++i) t.bvec.set(i, (bits >> i) & 1);
            out.push_back(std::move(t));
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexType> gamma_pullback(const std::vector<VertexType>& g_set,
                                       const std::vector<Colour>& g,
                                       const std::vector<Colour>& h, std::uint32_t k) {
    std::vector<VertexType> sorted = g_set;
    std::sort(sorted.begin(), sorted.end());
    std::vector<VertexType> out;
    for (const VertexType& a : all_vertex_types(k))
        if (std::binary_search(sorted.begin(), sorted.end(), f_map(g, h, a)))
            out.push_back(a);
    return out;
}

BagType restrict_type(const BagType& t, const std::vector<VertexType>& g_set) {
    std::vector<VertexType> sorted = g_set;
    std::sort(sorted.begin(), sorted.end());
    BagType r;
    r.rho = t.rho;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < t.inhabited.size(); ++i)
        if (std::binary_search(sorted.begin(), sorted.end(), t.inhabited[i])) {
            kept.push_back(i);
            r.inhabited.push_back(t.inhabited[i]);
        }
    std::size_t m = r.inhabited.size();
    r.hom.resize(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            r.hom[r.pair_index(i, j)] = t.hom_at(kept[i], kept[j]);
    return r;
}

TypeMonoid submonoid_closure(const std::vector<BagType>& gens, std::size_t cap) {
    if (cap == 0) throw std::invalid_argument("submonoid_closure: cap must be positive");
    std::uint32_t k = gens.empty() ? 0 : gens[0].order();
    for (const BagType& g : gens)
        if (g.order() != k)
            throw std::invalid_argument("submonoid_closure: generator orders differ");

    TypeMonoid mon;
    std::unordered_map<BagType, std::size_t, BagTypeHash> index;
    auto intern = [&](const BagType& t) -> std::pair<std::size_t, bool> {
        auto it = index.find(t);
        if (it != index.end()) return {it->second, false};
        if (mon.elements.size() >= cap)
            throw CapExceeded("submonoid too large: cap " + std::to_string(cap) +
                              " exceeded");
        std::size_t id = mon.elements.size();
        mon.elements.push_back(t);
        index.emplace(t, id);
        return {id, true};
    };

    mon.identity_index = intern(identity_type(k)).first;
    std::deque<std::size_t> work;
    for (const BagType& g : gens) {
        auto [id, fresh] = intern(g);
        mon.generator_indices.push_back(id);
        if (fresh) work.push_back(id);
    }
    // Every product of generators is reachable by right-multiplication, so
    // the worklist only needs element * generator steps.
    while (!work.empty()) {
        std::size_t cur = work.front();
        work.pop_front();
        for (std::size_t g : mon.generator_indices) {
            BagType p = type_product(mon.elements[cur], mon.elements[g]);
            auto [id, fresh] = intern(p);
            if (fresh) work.push_back(id);
        }
    }
    return mon;
}

}  // namespace tdecomp
