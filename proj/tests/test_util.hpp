#pragma once

// Shared helpers for the test suites: small random elections and committee
// enumeration used by the brute-force oracles.

#include <vector>

#include "delib/rng.hpp"
#include "delib/rules.hpp"

namespace delib::testutil {

// Random approval sets: each voter approves a uniform nonempty subset.
inline std::vector<std::vector<int>> random_ballots(int n, int m, Rng& rng) {
    std::vector<std::vector<int>> sets(static_cast<size_t>(n));
    for (auto& s : sets) {
        while (s.empty()) {
            for (int c = 0; c < m; ++c)
                if (rng.below(2)) s.push_back(c);
        }
    }
    return sets;
}

inline void enumerate_committees_rec(int m, int k, int start, std::vector<int>& cur,
                                     std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int c = start; c <= m - (k - static_cast<int>(cur.size())); ++c) {
        cur.push_back(c);
        enumerate_committees_rec(m, k, c + 1, cur, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<int>> all_committees(int m, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    enumerate_committees_rec(m, k, 0, cur, out);
    return out;
}

// True iff members(a) precedes members(b) lexicographically after mapping
// candidates through the tie-breaker priority.
inline bool priority_lex_less(const std::vector<int>& a, const std::vector<int>& b,
                              const TieBreaker& tie) {
    std::vector<int> ra, rb;
    for (int c : a) ra.push_back(tie.rank[static_cast<size_t>(c)]);
    for (int c : b) rb.push_back(tie.rank[static_cast<size_t>(c)]);
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    return ra < rb;
}

}  // namespace delib::testutil
