#pragma once

#include <cstdint>
#include <vector>

#include "delib/bitset.hpp"
#include "delib/population.hpp"
#include "delib/rng.hpp"

namespace delib {

// Approval profile over n voters and m candidates, with per-candidate
// supporter sets N(c) and approval scores V(c) cached at construction.
struct ApprovalProfile {
    int n = 0;
    int m = 0;
    std::vector<Bitset> ballots;     // ballots[i]: candidate set A_i, m bits
    std::vector<Bitset> supporters;  // supporters[c]: voter set N(c), n bits
    std::vector<int> approvals;      // approvals[c] = V(c) = |N(c)|

    ApprovalProfile() = default;
    // Throws std::invalid_argument on empty ballots or out-of-range ids.
    ApprovalProfile(int m_candidates, const std::vector<std::vector<int>>& approval_sets);
};

// Builds the profile from each agent's current top-ballot_size candidates.
ApprovalProfile profile_from_population(const Population& pop, int m_candidates);

struct Committee {
    std::vector<int> members;  // sorted ascending, no duplicates

    bool contains(int c) const;
};

// Seeded random candidate priority used to resolve all rule ties. Lower
// rank means higher priority; committees tie-break by comparing their
// member lists lexicographically after mapping through rank.
struct TieBreaker {
    std::vector<int> order;  // order[r] = candidate with priority r
    std::vector<int> rank;   // rank[c] = r

    static TieBreaker identity(int m);
    static TieBreaker random_priority(int m, Rng& rng);
};

struct MesDiagnostics {
    std::vector<double> prices;  // per phase-1 seat, in election order
    int completion_seats = 0;    // seats filled after phase 1 stalled
};

struct RuleOutcome {
    Committee committee;
    double score = 0.0;  // the rule's objective on committee (MES: its AV score)
    MesDiagnostics mes;  // populated by mes_committee only
};

enum class MesCompletion {
    Av,          // fill stalled seats by approval score over remaining candidates
    SeqPriority  // fill stalled seats by tie-breaker priority
};

int64_t av_score(const ApprovalProfile& profile, const Committee& w);
int coverage_score(const ApprovalProfile& profile, const Committee& w);
double pav_score(const ApprovalProfile& profile, const Committee& w);

// Top-k candidates by V(c); equal scores resolved by higher priority.
RuleOutcome av_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie);

// Exact coverage maximizer (branch and bound). Among co-optimal committees
// the lexicographically first under the tie-breaker priority wins, like the
// other rules; a welfare-favoring secondary level would bias the committee
// composition far from what random tie-breaking among co-winners produces.
RuleOutcome cc_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie);

// Exact PAV maximizer (branch and bound over integer-scaled scores, so tie
// detection is exact). Ties go to the lexicographically first committee
// under the tie-breaker priority. Supports k <= 42.
RuleOutcome pav_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie);

// Method of Equal Shares with exact rational budget arithmetic. Each voter
// starts with budget k/n; each round elects the candidate affordable at the
// smallest per-voter price q (ties by priority); if nobody is affordable the
// remaining seats are filled by the completion rule.
RuleOutcome mes_committee(const ApprovalProfile& profile, int k, const TieBreaker& tie,
                          MesCompletion completion = MesCompletion::Av);

double social_welfare(const std::vector<UtilityVector>& utilities, const Committee& w);

// Welfare is additive over candidates, so the optimum is the k candidates
// with the largest utility column sums (ties by lower candidate id).
RuleOutcome optimal_welfare_committee(const std::vector<UtilityVector>& utilities, int k);

}  // namespace delib
