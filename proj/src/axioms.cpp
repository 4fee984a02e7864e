#include "delib/axioms.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace delib {

bool is_t_cohesive(const ApprovalProfile& p, const std::vector<int>& voters, int t, int k) {
    if (t < 1) throw std::invalid_argument("is_t_cohesive: t must be >= 1");
    if (voters.empty()) throw std::invalid_argument("is_t_cohesive: empty voter set");
    for (int v : voters)
        if (v < 0 || v >= p.n) throw std::invalid_argument("is_t_cohesive: voter id out of range");
    if (static_cast<int64_t>(voters.size()) * k < static_cast<int64_t>(t) * p.n) return false;
    Bitset common = p.ballots[static_cast<size_t>(voters.front())];
    for (int v : voters) common &= p.ballots[static_cast<size_t>(v)];
    return common.count() >= t;
}

namespace {

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

void check_committee(const ApprovalProfile& p, const Committee& w, int k) {
    if (static_cast<int>(w.members.size()) != k)
        throw std::invalid_argument("axioms: committee size must equal k");
    for (int c : w.members)
        if (c < 0 || c >= p.m) throw std::invalid_argument("axioms: candidate id out of range");
}

// Finds a size-t candidate set approved in common by >= need voters drawn
// from `eligible`. Pool is pre-filtered to candidates with enough eligible
// support and searched in decreasing-support order with intersection-count
// pruning, which keeps the worst case far from C(m, t) in practice.
struct CohesiveSearch {
    const ApprovalProfile& p;
    int t, need;
    std::vector<int> pool;
    std::vector<int> chosen;
    std::vector<Bitset> inter;  // inter[d]: eligible voters approving chosen[0..d)

    bool found = false;
    std::vector<int> candidates_out;
    std::vector<int> voters_out;

    CohesiveSearch(const ApprovalProfile& prof, const Bitset& eligible, int tt, int nd)
        : p(prof), t(tt), need(nd) {
        std::vector<int> support(static_cast<size_t>(p.m));
        for (int c = 0; c < p.m; ++c)
            support[static_cast<size_t>(c)] =
                Bitset::and_count(p.supporters[static_cast<size_t>(c)], eligible);
        for (int c = 0; c < p.m; ++c)
            if (support[static_cast<size_t>(c)] >= need) pool.push_back(c);
        std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
            return support[static_cast<size_t>(a)] > support[static_cast<size_t>(b)];
        });
        inter.assign(static_cast<size_t>(t) + 1, Bitset(p.n));
        inter[0] = eligible;
        chosen.reserve(static_cast<size_t>(t));
    }

    bool run() {
        dfs(0, 0);
        return found;
    }

    void dfs(size_t idx, int depth) {
        if (depth == t) {
            found = true;
            candidates_out = chosen;
            std::sort(candidates_out.begin(), candidates_out.end());
            voters_out = inter[static_cast<size_t>(depth)].to_indices();
            return;
        }
        const size_t want = static_cast<size_t>(t - depth);
        for (size_t j = idx; j + want <= pool.size(); ++j) {
            const int c = pool[j];
            inter[static_cast<size_t>(depth) + 1] =
                inter[static_cast<size_t>(depth)] & p.supporters[static_cast<size_t>(c)];
            if (inter[static_cast<size_t>(depth) + 1].count() < need) continue;
            chosen.push_back(c);
            dfs(j + 1, depth + 1);
            chosen.pop_back();
            if (found) return;
        }
    }
};

}  // namespace

AxiomVerdict satisfies_ejr(const ApprovalProfile& p, const Committee& w, int k) {
    check_committee(p, w, k);
    if (p.n == 0) return {};
    Bitset wmask(p.m);
    for (int c : w.members) wmask.set(c);
    for (int t = 1; t <= k; ++t) {
        const int need = static_cast<int>(ceil_div(static_cast<int64_t>(t) * p.n, k));
        Bitset deprived(p.n);
        int deprived_count = 0;
        for (int i = 0; i < p.n; ++i) {
            if (Bitset::and_count(p.ballots[static_cast<size_t>(i)], wmask) < t) {
                deprived.set(i);
                ++deprived_count;
            }
        }
        if (deprived_count < need) continue;
        CohesiveSearch search(p, deprived, t, need);
        if (search.run()) {
            AxiomVerdict v;
            v.satisfied = false;
            v.witness = CohesivenessWitness{t, search.candidates_out, search.voters_out};
            return v;
        }
    }
    return {};
}

AxiomVerdict satisfies_pjr(const ApprovalProfile& p, const Committee& w, int k) {
    check_committee(p, w, k);
    if (p.n == 0) return {};
    if (k > 25) throw std::invalid_argument("satisfies_pjr: k too large for subset enumeration");
    Bitset wmask(p.m);
    for (int c : w.members) wmask.set(c);
    // A violation is a t-cohesive group whose ballots meet W only inside
    // some W' of size <= t-1: enumerate W', collect the voters confined to
    // it, then search for t common candidates among them.
    for (int t = 1; t <= k; ++t) {
        const int need = static_cast<int>(ceil_div(static_cast<int64_t>(t) * p.n, k));
        for (uint32_t sub = 0; sub < (1u << k); ++sub) {
            if (std::popcount(sub) > t - 1) continue;
            Bitset wprime(p.m);
            for (int b = 0; b < k; ++b)
                if (sub >> b & 1) wprime.set(w.members[static_cast<size_t>(b)]);
            Bitset eligible(p.n);
            int count = 0;
            for (int i = 0; i < p.n; ++i) {
                const Bitset in_w = p.ballots[static_cast<size_t>(i)] & wmask;
                if (in_w.is_subset_of(wprime)) {
                    eligible.set(i);
                    ++count;
                }
            }
            if (count < need) continue;
            CohesiveSearch search(p, eligible, t, need);
            if (search.run()) {
                AxiomVerdict v;
                v.satisfied = false;
                v.witness = CohesivenessWitness{t, search.candidates_out, search.voters_out};
                return v;
            }
        }
    }
    return {};
}

}  // namespace delib
