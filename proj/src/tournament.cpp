#include "tdecomp/tournament.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tdecomp/errors.hpp"

namespace tdecomp {

bool Tournament::check_invariants(std::pair<int, int>* bad) const {
    for (int u = 0; u < n; ++u) {
        if (adj[u].get(u)) {
            if (bad) *bad = {u, u};
            return false;
        }
        for (int v = u + 1; v < n; ++v) {
            if (adj[u].get(v) == adj[v].get(u)) {
                if (bad) *bad = {u, v};
                return false;
            }
        }
    }
    return true;
}

CutReport cut_rank(const Tournament& t, const Ordering& o) {
    if (static_cast<int>(o.size()) != t.n)
        throw std::invalid_argument("cut_rank: ordering size does not match tournament");
    std::vector<bool> seen(t.n, false);
    for (VertexId v : o) {
        if (v >= static_cast<VertexId>(t.n) || seen[v])
            throw std::invalid_argument("cut_rank: ordering is not a permutation");
        seen[v] = true;
    }

    CutReport report;
    int n = t.n;
    for (int i = 1; i < n; ++i) {
        // Row of each prefix vertex restricted to suffix columns.
        std::vector<BitRow> rows;
        rows.reserve(i);
        for (int a = 0; a < i; ++a) {
            BitRow row(n - i);
            for (int b = i; b < n; ++b) row.set(b - i, t.edge(o[a], o[b]));
            rows.push_back(std::move(row));
        }
        std::set<BitRow> distinct(rows.begin(), rows.end());
        report.ranks.push_back(rank_gf2(rows));
        report.class_counts.push_back(static_cast<int>(distinct.size()));
    }
    for (int r : report.ranks) report.cut_rank = std::max(report.cut_rank, r);
    for (int c : report.class_counts) report.max_classes = std::max(report.max_classes, c);
    return report;
}

Homogeneity is_homogeneous(const Tournament& t, const std::vector<VertexId>& a,
                           const std::vector<VertexId>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("is_homogeneous: empty side");
    std::set<VertexId> sa(a.begin(), a.end());
    for (VertexId v : b)
        if (sa.count(v)) throw std::invalid_argument("is_homogeneous: sides overlap");

    bool fwd = false, bwd = false;
    for (VertexId u : a)
        for (VertexId v : b)
            (t.edge(u, v) ? fwd : bwd) = true;
    if (fwd && bwd) return Homogeneity::Mixed;
    return fwd ? Homogeneity::AllForward : Homogeneity::AllBackward;
}

Tournament inverted_path(int n) {
    if (n < 1) throw std::invalid_argument("inverted_path: n must be positive");
    Tournament t(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1)
                t.set_edge(j, i);
            else
                t.set_edge(i, j);
        }
    return t;
}

Tournament rotating(int n) {
    if (n < 1) throw std::invalid_argument("rotating: n must be positive");
    if (n % 2 == 0) throw std::invalid_argument("rotating: n must be odd");
    Tournament t(n);
    int half = (n - 1) / 2;
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= half; ++d) t.set_edge(i, (i + d) % n);
    return t;
}

Tournament lex_triangle_power(int d) {
    if (d < 1) throw std::invalid_argument("lex_triangle_power: d must be positive");
    int n = 1;
    for (int i = 0; i < d; ++i) n *= 3;
    Tournament t(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            // Most significant differing base-3 digit decides, oriented as the
            // directed triangle 0 -> 1 -> 2 -> 0.
            int pu = u, pv = v, du = 0, dv = 0;
            for (int m = n / 3; m >= 1; m /= 3) {
                du = pu / m;
                dv = pv / m;
                if (du != dv) break;
                pu %= m;
                pv %= m;
            }
            if ((dv - du + 3) % 3 == 1)
                t.set_edge(u, v);
            else
                t.set_edge(v, u);
        }
    return t;
}

Tournament random_tournament(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_tournament: n must be positive");
    Tournament t(n);
    std::mt19937_64 rng(seed);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (rng() & 1)
                t.set_edge(u, v);
            else
                t.set_edge(v, u);
        }
    return t;
}

std::pair<int, Ordering> min_cutrank_bruteforce(const Tournament& t, int cap) {
    if (t.n > cap)
        throw CapExceeded("min_cutrank_bruteforce: n=" + std::to_string(t.n) +
                          " exceeds cap " + std::to_string(cap));
    Ordering perm(t.n);
    for (int i = 0; i < t.n; ++i) perm[i] = i;
    int best = t.n + 1;
    Ordering witness = perm;
    do {
        int r = cut_rank(t, perm).cut_rank;
        if (r < best) {
            best = r;
            witness = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (t.n == 0) best = 0;
    return {best == t.n + 1 ? 0 : best, witness};
}

Tournament read_tournament(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("tournament: missing size line", 1, 1);
    int n = 0;
    try {
        std::size_t pos = 0;
        n = std::stoi(line, &pos);
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos != line.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ParseError("tournament: size line must be a single integer", 1, 1);
    }
    if (n < 0) throw ParseError("tournament: negative size", 1, 1);

    Tournament t(n);
    for (int u = 0; u < n; ++u) {
        if (!std::getline(in, line))
            throw ParseError("tournament: expected " + std::to_string(n) + " rows", u + 2, 1);
        if (static_cast<int>(line.size()) != n)
            throw ParseError("tournament: row has length " + std::to_string(line.size()) +
                                 ", expected " + std::to_string(n),
                             u + 2, static_cast<int>(line.size()) + 1);
        for (int v = 0; v < n; ++v) {
            char c = line[v];
            if (c != '0' && c != '1')
                throw ParseError(std::string("tournament: invalid character '") + c + "'",
                                 u + 2, v + 1);
            t.adj[u].set(v, c == '1');
        }
    }
    std::pair<int, int> bad;
    if (!t.check_invariants(&bad)) {
        if (bad.first == bad.second)
            throw ParseError("tournament: nonzero diagonal at vertex " +
                                 std::to_string(bad.first),
                             bad.first + 2, bad.first + 1);
        throw ParseError("tournament: edge between " + std::to_string(bad.first) + " and " +
                             std::to_string(bad.second) + " is not oriented exactly once",
                         bad.first + 2, bad.second + 1);
    }
    return t;
}

void write_tournament(std::ostream& out, const Tournament& t) {
    out << t.n << "\n";
    for (int u = 0; u < t.n; ++u) out << t.adj[u].to_string() << "\n";
}

}  // namespace tdecomp
