#pragma once

#include <optional>
#include <vector>

#include "delib/rules.hpp"

namespace delib {

// Certificate of an EJR/PJR violation: a group of >= t*n/k voters who all
// approve the t candidates in common_candidates yet are underrepresented.
struct CohesivenessWitness {
    int t = 0;
    std::vector<int> common_candidates;  // size t, sorted ascending
    std::vector<int> voters;             // sorted ascending
};

struct AxiomVerdict {
    bool satisfied = true;
    std::optional<CohesivenessWitness> witness;  // present iff violated
};

// True iff the voters share at least t commonly approved candidates and the
// group is large enough: |voters| >= t*n/k, compared exactly as
// |voters|*k >= t*n. Throws std::invalid_argument for empty voter sets,
// bad ids or t < 1.
bool is_t_cohesive(const ApprovalProfile& profile, const std::vector<int>& voters, int t, int k);

// Extended Justified Representation: no t-cohesive group may consist
// entirely of voters with fewer than t approved committee members.
AxiomVerdict satisfies_ejr(const ApprovalProfile& profile, const Committee& w, int k);

// Proportional Justified Representation: every t-cohesive group's ballot
// union must cover at least t committee members. Exponential in k (subsets
// of W are enumerated); intended for small committees.
AxiomVerdict satisfies_pjr(const ApprovalProfile& profile, const Committee& w, int k);

}  // namespace delib
