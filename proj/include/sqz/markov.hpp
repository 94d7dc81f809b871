#ifndef SQZ_MARKOV_HPP
#define SQZ_MARKOV_HPP

// Markov triples a^2 + b^2 + c^2 = 3abc: mutation tree and the fast branch.

#include "sqz/bigrat.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <vector>

namespace sqz {

inline bool is_markov(const Int& a, const Int& b, const Int& c) {
    if (a < 1 || b < 1 || c < 1) throw domain_error("is_markov: entries must be positive");
    return a * a + b * b + c * c == 3 * a * b * c;
}

// Markov triple stored sorted ascending.
struct MarkovTriple {
    std::array<Int, 3> v;

    MarkovTriple(Int a, Int b, Int c) : v{std::move(a), std::move(b), std::move(c)} {
        std::sort(v.begin(), v.end());
        if (!is_markov(v[0], v[1], v[2]))
            throw domain_error("not a Markov triple: (" + v[0].get_str() + "," +
                               v[1].get_str() + "," + v[2].get_str() + ")");
    }

    const Int& a() const { return v[0]; }
    const Int& b() const { return v[1]; }
    const Int& c() const { return v[2]; }

    friend bool operator==(const MarkovTriple& s, const MarkovTriple& t) { return s.v == t.v; }
    friend bool operator<(const MarkovTriple& s, const MarkovTriple& t) { return s.v < t.v; }
};

// Replaces the entry at `slot` of the sorted triple by 3*(product of the
// other two) - entry; the result is again sorted.
inline MarkovTriple mutate(const MarkovTriple& t, int slot) {
    if (slot < 0 || slot > 2) throw domain_error("mutate: slot must be 0, 1 or 2");
    std::array<Int, 3> w = t.v;
    Int others = t.v[(slot + 1) % 3] * t.v[(slot + 2) % 3];
    w[slot] = 3 * others - t.v[slot];
    return {w[0], w[1], w[2]};
}

// Breadth-first closure of (1,1,1) under mutation, restricted to c <= max_entry.
inline std::vector<MarkovTriple> enumerate_tree(const Int& max_entry) {
    if (max_entry < 1) throw domain_error("enumerate_tree: max_entry must be >= 1");
    std::set<MarkovTriple> seen;
    std::deque<MarkovTriple> queue;
    MarkovTriple root(1, 1, 1);
    if (root.c() <= max_entry) {
        seen.insert(root);
        queue.push_back(root);
    }
    while (!queue.empty()) {
        MarkovTriple t = queue.front();
        queue.pop_front();
        for (int slot = 0; slot < 3; ++slot) {
            MarkovTriple m = mutate(t, slot);
            if (m.c() <= max_entry && seen.insert(m).second) queue.push_back(m);
        }
    }
    return {seen.begin(), seen.end()};
}

// m_0 = m_1 = m_2 = 1, m_{k+2} = 3 m_{k+1} m_k - m_{k-1}; returns m_0..m_n.
inline std::vector<Int> branch_sequence(int n) {
    if (n < 0) throw domain_error("branch_sequence: n must be >= 0");
    std::vector<Int> m{1, 1, 1};
    for (int k = 1; (int)m.size() <= n; ++k) m.push_back(3 * m[k + 1] * m[k] - m[k - 1]);
    m.resize(n + 1);
    return m;
}

} // namespace sqz

#endif
