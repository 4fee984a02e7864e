#include "delib/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace delib {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

void check_k(int k, int m) {
    if (k < 1 || k > m) throw std::invalid_argument("committee size must be in [1, m]");
}

}  // namespace

ApprovalProfile::ApprovalProfile(int m_candidates, const std::vector<std::vector<int>>& sets) {
    if (m_candidates < 1) throw std::invalid_argument("profile: need at least one candidate");
    m = m_candidates;
    n = static_cast<int>(sets.size());
    ballots.assign(static_cast<size_t>(n), Bitset(m));
    for (int i = 0; i < n; ++i) {
        const auto& s = sets[static_cast<size_t>(i)];
        if (s.empty()) throw std::invalid_argument("profile: ballots must be nonempty");
        for (int c : s) {
            if (c < 0 || c >= m) throw std::invalid_argument("profile: candidate id out of range");
            ballots[static_cast<size_t>(i)].set(c);
        }
    }
    supporters.assign(static_cast<size_t>(m), Bitset(n));
    approvals.assign(static_cast<size_t>(m), 0);
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i)
            if (ballots[static_cast<size_t>(i)].test(c)) supporters[static_cast<size_t>(c)].set(i);
        approvals[static_cast<size_t>(c)] = supporters[static_cast<size_t>(c)].count();
    }
}

ApprovalProfile profile_from_population(const Population& pop, int m_candidates) {
    std::vector<std::vector<int>> sets;
    sets.reserve(pop.agents.size());
    for (const Agent& a : pop.agents) sets.push_back(derive_ballot(a));
    return {m_candidates, sets};
}

bool Committee::contains(int c) const {
    return std::binary_search(members.begin(), members.end(), c);
}

TieBreaker TieBreaker::identity(int m) {
    TieBreaker t;
    t.order.resize(static_cast<size_t>(m));
    std::iota(t.order.begin(), t.order.end(), 0);
    t.rank = t.order;
    return t;
}

TieBreaker TieBreaker::random_priority(int m, Rng& rng) {
    TieBreaker t;
    t.order.resize(static_cast<size_t>(m));
    std::iota(t.order.begin(), t.order.end(), 0);
    rng.shuffle(t.order);
    t.rank.resize(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) t.rank[static_cast<size_t>(t.order[static_cast<size_t>(r)])] = r;
    return t;
}

int64_t av_score(const ApprovalProfile& profile, const Committee& w) {
    int64_t s = 0;
    for (int c : w.members) s += profile.approvals[static_cast<size_t>(c)];
    return s;
}

int coverage_score(const ApprovalProfile& profile, const Committee& w) {
    Bitset covered(profile.n);
    for (int c : w.members) covered |= profile.supporters[static_cast<size_t>(c)];
    return covered.count();
}

double pav_score(const ApprovalProfile& profile, const Committee& w) {
    const int kmax = static_cast<int>(w.members.size());
    std::vector<double> h(static_cast<size_t>(kmax) + 1, 0.0);
    for (int t = 1; t <= kmax; ++t) h[static_cast<size_t>(t)] = h[static_cast<size_t>(t) - 1] + 1.0 / t;
    Bitset wmask(profile.m);
    for (int c : w.members) wmask.set(c);
    double s = 0.0;
    for (const Bitset& ballot : profile.ballots) s += h[static_cast<size_t>(Bitset::and_count(ballot, wmask))];
    return s;
}

RuleOutcome av_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie) {
    check_k(k, profile.m);
    std::vector<int> cands(static_cast<size_t>(profile.m));
    std::iota(cands.begin(), cands.end(), 0);
    std::sort(cands.begin(), cands.end(), [&](int a, int b) {
        if (profile.approvals[static_cast<size_t>(a)] != profile.approvals[static_cast<size_t>(b)])
            return profile.approvals[static_cast<size_t>(a)] > profile.approvals[static_cast<size_t>(b)];
        return tie.rank[static_cast<size_t>(a)] < tie.rank[static_cast<size_t>(b)];
    });
    RuleOutcome out;
    out.committee.members.assign(cands.begin(), cands.begin() + k);
    std::sort(out.committee.members.begin(), out.committee.members.end());
    out.score = static_cast<double>(av_score(profile, out.committee));
    return out;
}

namespace {

// Exact max coverage in two phases. Phase 1 finds the optimal coverage with
// a gain-ordered search: children sorted by residual gain make the greedy
// incumbent tight almost immediately, so the admissible top-r bound prunes
// hard. Phase 2 re-searches in tie-breaker priority order and stops at the
// first committee attaining the known optimum; visiting order is the
// lexicographic order of committees under the priority mapping, so that
// committee is the lexicographically first optimum.
struct CcSolver {
    const ApprovalProfile& p;
    int k;
    const std::vector<int>& cand;  // candidates in priority order

    std::vector<Bitset> covered;  // covered[d]: voters covered at depth d
    int64_t opt_cov = -1;

    std::vector<int> chosen;
    std::vector<int> best;
    bool done = false;

    CcSolver(const ApprovalProfile& profile, int kk, const std::vector<int>& order)
        : p(profile), k(kk), cand(order) {
        covered.assign(static_cast<size_t>(k) + 1, Bitset(p.n));
        chosen.reserve(static_cast<size_t>(k));
    }

    void run() {
        greedy_seed();
        std::vector<int> all(cand.begin(), cand.end());
        value_dfs(all, 0, 0);
        covered.assign(static_cast<size_t>(k) + 1, Bitset(p.n));
        lex_dfs(0, 0, 0);
    }

    // Greedy max-residual-gain committee seeds the incumbent.
    void greedy_seed() {
        Bitset cov(p.n);
        std::vector<char> used(static_cast<size_t>(p.m), 0);
        int64_t total = 0;
        for (int step = 0; step < k; ++step) {
            int best_c = -1;
            int64_t best_gain = -1;
            for (int c : cand) {
                if (used[static_cast<size_t>(c)]) continue;
                const int64_t gain = Bitset::andnot_count(p.supporters[static_cast<size_t>(c)], cov);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            used[static_cast<size_t>(best_c)] = 1;
            cov |= p.supporters[static_cast<size_t>(best_c)];
            total += best_gain;
        }
        opt_cov = total;
    }

    struct Item {
        int c;
        int64_t gain;
    };

    void value_dfs(const std::vector<int>& remaining, int depth, int64_t cur_cov) {
        const int r = k - depth;
        std::vector<Item> items;
        items.reserve(remaining.size());
        for (int c : remaining)
            items.push_back({c, Bitset::andnot_count(p.supporters[static_cast<size_t>(c)],
                                                     covered[static_cast<size_t>(depth)])});
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
            if (a.gain != b.gain) return a.gain > b.gain;
            return a.c < b.c;
        });

        // prefix[j] = sum of the j largest residual gains.
        std::vector<int64_t> prefix(items.size() + 1, 0);
        for (size_t j = 0; j < items.size(); ++j) prefix[j + 1] = prefix[j] + items[j].gain;

        std::vector<int> child;
        for (size_t j = 0; j + static_cast<size_t>(r) <= items.size(); ++j) {
            // Subtree bound: this child's gain plus the r-1 next largest.
            const int64_t ub = cur_cov + prefix[j + static_cast<size_t>(r)] - prefix[j];
            if (ub <= opt_cov) break;  // gains sorted, later children only worse
            const Item& it = items[j];
            if (r == 1) {
                opt_cov = std::max(opt_cov, cur_cov + it.gain);
                continue;
            }
            covered[static_cast<size_t>(depth) + 1] = covered[static_cast<size_t>(depth)];
            covered[static_cast<size_t>(depth) + 1] |= p.supporters[static_cast<size_t>(it.c)];
            child.clear();
            for (size_t t = j + 1; t < items.size(); ++t) child.push_back(items[t].c);
            value_dfs(child, depth + 1, cur_cov + it.gain);
        }
    }

    void lex_dfs(int idx, int depth, int64_t cur_cov) {
        if (done) return;
        if (depth == k) {
            if (cur_cov == opt_cov) {
                best = chosen;
                done = true;
            }
            return;
        }
        const int r = k - depth;
        const int last = p.m - r;  // last candidate index usable at this depth
        if (idx > last) return;

        // Admissible bound against the known optimum: sum of the r largest
        // individual residual gains among the suffix.
        std::vector<int64_t> gains;
        gains.reserve(static_cast<size_t>(p.m - idx));
        for (int j = idx; j < p.m; ++j) {
            const int c = cand[static_cast<size_t>(j)];
            gains.push_back(Bitset::andnot_count(p.supporters[static_cast<size_t>(c)],
                                                 covered[static_cast<size_t>(depth)]));
        }
        std::vector<int64_t> top = gains;
        std::nth_element(top.begin(), top.begin() + (r - 1), top.end(), std::greater<>());
        int64_t ub_cov = cur_cov;
        for (int t = 0; t < r; ++t) ub_cov += top[static_cast<size_t>(t)];
        if (ub_cov < opt_cov) return;

        for (int j = idx; j <= last && !done; ++j) {
            const int c = cand[static_cast<size_t>(j)];
            covered[static_cast<size_t>(depth) + 1] = covered[static_cast<size_t>(depth)];
            covered[static_cast<size_t>(depth) + 1] |= p.supporters[static_cast<size_t>(c)];
            chosen.push_back(c);
            lex_dfs(j + 1, depth + 1, cur_cov + gains[static_cast<size_t>(j - idx)]);
            chosen.pop_back();
        }
    }
};

struct PavSolver {
    const ApprovalProfile& p;
    int k;
    const std::vector<int>& cand;
    std::vector<int64_t> weight;          // weight[t] = L / t, t in 1..k
    std::vector<std::vector<int>> supp;   // supporter indices per candidate

    std::vector<int> cnt;  // |A_i ∩ partial| per voter
    std::vector<int> chosen;
    int64_t opt_score = -1;
    std::vector<int> best;
    bool done = false;

    PavSolver(const ApprovalProfile& profile, int kk, const std::vector<int>& order)
        : p(profile), k(kk), cand(order) {
        int64_t lcm = 1;
        for (int t = 2; t <= k; ++t) lcm = std::lcm(lcm, static_cast<int64_t>(t));
        // Guard the exact integer scoring against overflow: total <= n * L * h(k).
        long double max_total = 0.0L;
        for (int t = 1; t <= k; ++t) max_total += static_cast<long double>(lcm) / t;
        max_total *= p.n;
        if (max_total > 4.0e18L)
            throw std::invalid_argument("pav: exact integer scoring overflows for this (n, k)");
        weight.assign(static_cast<size_t>(k) + 1, 0);
        for (int t = 1; t <= k; ++t) weight[static_cast<size_t>(t)] = lcm / t;
        supp.reserve(static_cast<size_t>(p.m));
        for (int c = 0; c < p.m; ++c) supp.push_back(p.supporters[static_cast<size_t>(c)].to_indices());
        cnt.assign(static_cast<size_t>(p.n), 0);
        chosen.reserve(static_cast<size_t>(k));
    }

    int64_t marginal_gain(int c) const {
        int64_t g = 0;
        for (int i : supp[static_cast<size_t>(c)]) g += weight[static_cast<size_t>(cnt[static_cast<size_t>(i)]) + 1];
        return g;
    }

    // Two phases, mirroring CcSolver: a gain-ordered search for the optimal
    // score, then a priority-order search that stops at the first committee
    // attaining it (the lexicographically first optimum). Marginal gains only
    // shrink as the committee grows, so the sum of the r largest current
    // gains is an admissible upper bound in both phases.
    void run() {
        greedy_seed();
        std::vector<int> all(cand.begin(), cand.end());
        value_dfs(all, 0, 0);
        lex_dfs(0, 0, 0);
    }

    void greedy_seed() {
        std::vector<char> used(static_cast<size_t>(p.m), 0);
        int64_t total = 0;
        for (int step = 0; step < k; ++step) {
            int best_c = -1;
            int64_t best_gain = -1;
            for (int c : cand) {
                if (used[static_cast<size_t>(c)]) continue;
                const int64_t g = marginal_gain(c);
                if (g > best_gain) {
                    best_gain = g;
                    best_c = c;
                }
            }
            used[static_cast<size_t>(best_c)] = 1;
            for (int i : supp[static_cast<size_t>(best_c)]) ++cnt[static_cast<size_t>(i)];
            total += best_gain;
        }
        std::fill(cnt.begin(), cnt.end(), 0);
        opt_score = total;
    }

    struct Item {
        int c;
        int64_t gain;
    };

    void value_dfs(const std::vector<int>& remaining, int depth, int64_t score) {
        const int r = k - depth;
        std::vector<Item> items;
        items.reserve(remaining.size());
        for (int c : remaining) items.push_back({c, marginal_gain(c)});
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
            if (a.gain != b.gain) return a.gain > b.gain;
            return a.c < b.c;
        });
        std::vector<int64_t> prefix(items.size() + 1, 0);
        for (size_t j = 0; j < items.size(); ++j) prefix[j + 1] = prefix[j] + items[j].gain;

        std::vector<int> child;
        for (size_t j = 0; j + static_cast<size_t>(r) <= items.size(); ++j) {
            const int64_t ub = score + prefix[j + static_cast<size_t>(r)] - prefix[j];
            if (ub <= opt_score) break;  // gains sorted, later children only worse
            const Item& it = items[j];
            if (r == 1) {
                opt_score = std::max(opt_score, score + it.gain);
                continue;
            }
            for (int i : supp[static_cast<size_t>(it.c)]) ++cnt[static_cast<size_t>(i)];
            child.clear();
            for (size_t t = j + 1; t < items.size(); ++t) child.push_back(items[t].c);
            value_dfs(child, depth + 1, score + it.gain);
            for (int i : supp[static_cast<size_t>(it.c)]) --cnt[static_cast<size_t>(i)];
        }
    }

    void lex_dfs(int idx, int depth, int64_t score) {
        if (done) return;
        if (depth == k) {
            if (score == opt_score) {
                best = chosen;
                done = true;
            }
            return;
        }
        const int r = k - depth;
        const int last = p.m - r;
        if (idx > last) return;

        std::vector<int64_t> gains;
        gains.reserve(static_cast<size_t>(p.m - idx));
        for (int j = idx; j < p.m; ++j) gains.push_back(marginal_gain(cand[static_cast<size_t>(j)]));
        std::vector<int64_t> top = gains;
        std::nth_element(top.begin(), top.begin() + (r - 1), top.end(), std::greater<>());
        int64_t ub = score;
        for (int t = 0; t < r; ++t) ub += top[static_cast<size_t>(t)];
        if (ub < opt_score) return;

        for (int j = idx; j <= last && !done; ++j) {
            const int c = cand[static_cast<size_t>(j)];
            for (int i : supp[static_cast<size_t>(c)]) ++cnt[static_cast<size_t>(i)];
            chosen.push_back(c);
            lex_dfs(j + 1, depth + 1, score + gains[static_cast<size_t>(j - idx)]);
            chosen.pop_back();
            for (int i : supp[static_cast<size_t>(c)]) --cnt[static_cast<size_t>(i)];
        }
    }
};

}  // namespace

RuleOutcome cc_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie) {
    check_k(k, profile.m);
    CcSolver solver(profile, k, tie.order);
    solver.run();
    RuleOutcome out;
    out.committee.members = solver.best;
    std::sort(out.committee.members.begin(), out.committee.members.end());
    out.score = static_cast<double>(solver.opt_cov);
    return out;
}

RuleOutcome pav_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie) {
    check_k(k, profile.m);
    PavSolver solver(profile, k, tie.order);
    solver.run();
    RuleOutcome out;
    out.committee.members = solver.best;
    std::sort(out.committee.members.begin(), out.committee.members.end());
    out.score = pav_score(profile, out.committee);
    return out;
}

RuleOutcome mes_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie,
                          MesCompletion completion) {
    check_k(k, profile.m);
    const int n = profile.n;
    if (n < 1) throw std::invalid_argument("mes: need at least one voter");

    // Budgets are exact rationals num[i] / den with a shared denominator.
    // b_i(0) = k/n, candidate cost 1 = den/den.
    i128 den = n;
    std::vector<i128> num(static_cast<size_t>(n), k);
    std::vector<std::vector<int>> supp;
    supp.reserve(static_cast<size_t>(profile.m));
    for (int c = 0; c < profile.m; ++c) supp.push_back(profile.supporters[static_cast<size_t>(c)].to_indices());

    RuleOutcome out;
    std::vector<char> selected(static_cast<size_t>(profile.m), 0);
    std::vector<i128> sorted_budgets;

    while (static_cast<int>(out.committee.members.size()) < k) {
        // For each candidate, the minimal q >= 0 with sum_i min(q, b_i) = 1
        // is a/(r*den): r supporters pay q, the rest are exhausted.
        bool has = false;
        i128 best_a = 0;
        int best_r = 0, best_c = -1;
        for (int c = 0; c < profile.m; ++c) {
            if (selected[static_cast<size_t>(c)] || supp[static_cast<size_t>(c)].empty()) continue;
            sorted_budgets.clear();
            i128 total = 0;
            for (int i : supp[static_cast<size_t>(c)]) {
                sorted_budgets.push_back(num[static_cast<size_t>(i)]);
                total += num[static_cast<size_t>(i)];
            }
            if (total < den) continue;  // not affordable at any q
            std::sort(sorted_budgets.begin(), sorted_budgets.end());
            const int s = static_cast<int>(sorted_budgets.size());
            i128 prefix = 0;
            i128 a = 0;
            int r = 0;
            for (int t = 0; t < s; ++t) {
                const i128 rem = den - prefix;
                if (rem <= sorted_budgets[static_cast<size_t>(t)] * (s - t)) {
                    a = rem;
                    r = s - t;
                    break;
                }
                prefix += sorted_budgets[static_cast<size_t>(t)];
            }
            // q_c = a/(r*den) vs incumbent best_a/(best_r*den)
            if (!has || a * best_r < best_a * r ||
                (a * best_r == best_a * r &&
                 tie.rank[static_cast<size_t>(c)] < tie.rank[static_cast<size_t>(best_c)])) {
                has = true;
                best_a = a;
                best_r = r;
                best_c = c;
            }
        }
        if (!has) break;  // phase 1 stalled

        out.mes.prices.push_back(static_cast<double>(static_cast<long double>(best_a) /
                                                     (static_cast<long double>(best_r) *
                                                      static_cast<long double>(den))));
        // Re-denominate to den*r and charge min(q, b_i) to each supporter.
        for (i128& x : num) x *= best_r;
        den *= best_r;
        for (int i : supp[static_cast<size_t>(best_c)])
            num[static_cast<size_t>(i)] -= std::min(num[static_cast<size_t>(i)], best_a);
        selected[static_cast<size_t>(best_c)] = 1;
        out.committee.members.push_back(best_c);

        i128 g = den;
        for (const i128& x : num) g = gcd128(g, x);
        if (g > 1) {
            den /= g;
            for (i128& x : num) x /= g;
        }
        if (den > (static_cast<i128>(1) << 100))
            throw std::overflow_error("mes: exact budget arithmetic overflow");
    }

    // Completion: phase 1 can stall with seats left; EJR already holds for
    // the phase-1 seats, so any deterministic filler is acceptable.
    const int needed = k - static_cast<int>(out.committee.members.size());
    if (needed > 0) {
        std::vector<int> rest;
        for (int c = 0; c < profile.m; ++c)
            if (!selected[static_cast<size_t>(c)]) rest.push_back(c);
        if (completion == MesCompletion::Av) {
            std::sort(rest.begin(), rest.end(), [&](int a, int b) {
                if (profile.approvals[static_cast<size_t>(a)] != profile.approvals[static_cast<size_t>(b)])
                    return profile.approvals[static_cast<size_t>(a)] >
                           profile.approvals[static_cast<size_t>(b)];
                return tie.rank[static_cast<size_t>(a)] < tie.rank[static_cast<size_t>(b)];
            });
        } else {
            std::sort(rest.begin(), rest.end(), [&](int a, int b) {
                return tie.rank[static_cast<size_t>(a)] < tie.rank[static_cast<size_t>(b)];
            });
        }
        out.committee.members.insert(out.committee.members.end(), rest.begin(), rest.begin() + needed);
        out.mes.completion_seats = needed;
    }

    std::sort(out.committee.members.begin(), out.committee.members.end());
    out.score = static_cast<double>(av_score(profile, out.committee));
    return out;
}

double social_welfare(const std::vector<UtilityVector>& utilities, const Committee& w) {
    double s = 0.0;
    for (const UtilityVector& u : utilities)
        for (int c : w.members) s += u[static_cast<size_t>(c)];
    return s;
}

RuleOutcome optimal_welfare_committee(const std::vector<UtilityVector>& utilities, int k) {
    if (utilities.empty()) throw std::invalid_argument("optimal_welfare_committee: no agents");
    const int m = static_cast<int>(utilities.front().size());
    check_k(k, m);
    std::vector<double> col(static_cast<size_t>(m), 0.0);
    for (const UtilityVector& u : utilities) {
        if (static_cast<int>(u.size()) != m)
            throw std::invalid_argument("optimal_welfare_committee: ragged utilities");
        for (int c = 0; c < m; ++c) col[static_cast<size_t>(c)] += u[static_cast<size_t>(c)];
    }
    std::vector<int> cands(static_cast<size_t>(m));
    std::iota(cands.begin(), cands.end(), 0);
    std::sort(cands.begin(), cands.end(), [&](int a, int b) {
        if (col[static_cast<size_t>(a)] != col[static_cast<size_t>(b)])
            return col[static_cast<size_t>(a)] > col[static_cast<size_t>(b)];
        return a < b;
    });
    RuleOutcome out;
    out.committee.members.assign(cands.begin(), cands.begin() + k);
    std::sort(out.committee.members.begin(), out.committee.members.end());
    for (int c : out.committee.members) out.score += col[static_cast<size_t>(c)];
    return out;
}

}  // namespace delib
