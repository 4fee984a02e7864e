#include "delib/axioms.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "delib/rng.hpp"
#include "delib/rules.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace delib;
using namespace delib::testutil;

namespace {

ApprovalProfile four_voter_profile() {
    return ApprovalProfile(4, {{0, 1}, {0, 1}, {2}, {2, 3}});
}

struct BruteVerdicts {
    bool ejr = true;
    bool pjr = true;
};

// Checks both axioms by enumerating every voter subset and every group size.
BruteVerdicts brute_force(int n, int m, int k, const std::vector<std::vector<int>>& sets,
                          const std::vector<int>& w) {
    BruteVerdicts out;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<char> common(static_cast<size_t>(m), 1);
        std::vector<char> union_w(static_cast<size_t>(w.size()), 0);
        int size = 0;
        int max_repr = 0;
        for (int i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            ++size;
            std::vector<char> has(static_cast<size_t>(m), 0);
            for (int c : sets[static_cast<size_t>(i)]) has[static_cast<size_t>(c)] = 1;
            int repr = 0;
            for (size_t j = 0; j < w.size(); ++j) {
                if (has[static_cast<size_t>(w[j])]) {
                    ++repr;
                    union_w[j] = 1;
                }
            }
            max_repr = std::max(max_repr, repr);
            for (int c = 0; c < m; ++c)
                if (!has[static_cast<size_t>(c)]) common[static_cast<size_t>(c)] = 0;
        }
        int n_common = 0;
        for (char c : common) n_common += c;
        int n_union = 0;
        for (char c : union_w) n_union += c;
        for (int t = 1; t <= k; ++t) {
            if (n_common < t) break;
            if (static_cast<int64_t>(size) * k < static_cast<int64_t>(t) * n) continue;
            if (max_repr < t) out.ejr = false;
            if (n_union < t) out.pjr = false;
        }
    }
    return out;
}

// Re-verifies a violation witness directly against the definitions.
void verify_witness(const ApprovalProfile& p, const Committee& w, int k,
                    const CohesivenessWitness& wit, bool for_ejr) {
    REQUIRE(wit.t >= 1);
    REQUIRE(wit.t <= k);
    REQUIRE(static_cast<int>(wit.common_candidates.size()) >= wit.t);
    REQUIRE(static_cast<int64_t>(wit.voters.size()) * k >= static_cast<int64_t>(wit.t) * p.n);
    REQUIRE(is_t_cohesive(p, wit.voters, wit.t, k));

    Bitset wmask(p.m);
    for (int c : w.members) wmask.set(c);
    Bitset union_in_w(p.m);
    for (int v : wit.voters) {
        const Bitset& ballot = p.ballots[static_cast<size_t>(v)];
        for (int c : wit.common_candidates) REQUIRE(ballot.test(c));
        if (for_ejr) REQUIRE(Bitset::and_count(ballot, wmask) < wit.t);
        union_in_w |= ballot & wmask;
    }
    if (!for_ejr) REQUIRE(union_in_w.count() <= wit.t - 1);
}

}  // namespace

TEST_CASE("cohesiveness needs common candidates and enough voters") {
    const ApprovalProfile p = four_voter_profile();
    const int k = 2;
    CHECK(is_t_cohesive(p, {0, 1}, 1, k));        // share {a, b}, 2 >= 1*4/2
    CHECK_FALSE(is_t_cohesive(p, {0, 1}, 2, k));  // 2 common but 2 < 2*4/2
    CHECK(is_t_cohesive(p, {2, 3}, 1, k));        // share {c}
    CHECK_FALSE(is_t_cohesive(p, {0, 2}, 1, k));  // no common candidate
    CHECK_FALSE(is_t_cohesive(p, {2}, 1, k));     // 1 < 1*4/2

    // The size threshold t*n/k compares exactly: 1*3/2 needs 2 voters.
    const ApprovalProfile q(2, {{0}, {0}, {1}});
    CHECK_FALSE(is_t_cohesive(q, {0}, 1, 2));
    CHECK(is_t_cohesive(q, {0, 1}, 1, 2));

    CHECK_THROWS_AS(is_t_cohesive(p, {}, 1, k), std::invalid_argument);
    CHECK_THROWS_AS(is_t_cohesive(p, {0}, 0, k), std::invalid_argument);
    CHECK_THROWS_AS(is_t_cohesive(p, {4}, 1, k), std::invalid_argument);
}

TEST_CASE("ejr flags the unrepresented c-supporters on the four-voter election") {
    const ApprovalProfile p = four_voter_profile();

    const AxiomVerdict bad = satisfies_ejr(p, Committee{{0, 1}}, 2);
    CHECK_FALSE(bad.satisfied);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->t == 1);
    CHECK(bad.witness->common_candidates == std::vector<int>{2});
    CHECK(bad.witness->voters == std::vector<int>{2, 3});
    verify_witness(p, Committee{{0, 1}}, 2, *bad.witness, true);

    const AxiomVerdict good = satisfies_ejr(p, Committee{{0, 2}}, 2);
    CHECK(good.satisfied);
    CHECK_FALSE(good.witness.has_value());

    // Everyone's ballot equals the committee: trivially satisfied.
    const ApprovalProfile same(3, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(satisfies_ejr(same, Committee{{0, 1}}, 2).satisfied);

    CHECK_THROWS_AS(satisfies_ejr(p, Committee{{0}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(satisfies_ejr(p, Committee{{0, 4}}, 2), std::invalid_argument);
}

TEST_CASE("pjr flags the same violation and accepts the covering committee") {
    const ApprovalProfile p = four_voter_profile();

    const AxiomVerdict bad = satisfies_pjr(p, Committee{{0, 1}}, 2);
    CHECK_FALSE(bad.satisfied);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->t == 1);
    CHECK(bad.witness->common_candidates == std::vector<int>{2});
    CHECK(bad.witness->voters == std::vector<int>{2, 3});
    verify_witness(p, Committee{{0, 1}}, 2, *bad.witness, false);

    CHECK(satisfies_pjr(p, Committee{{0, 2}}, 2).satisfied);

    // Pairwise-disjoint ballots admit no cohesive group at all.
    const ApprovalProfile disjoint(4, {{0}, {1}, {2}, {3}});
    CHECK(satisfies_ejr(disjoint, Committee{{0, 1}}, 2).satisfied);
    CHECK(satisfies_pjr(disjoint, Committee{{0, 1}}, 2).satisfied);

    // Subset enumeration is exponential in k; oversized committees are refused.
    std::vector<std::vector<int>> single(1, std::vector<int>{0});
    const ApprovalProfile wide(26, single);
    std::vector<int> all26(26);
    for (int c = 0; c < 26; ++c) all26[static_cast<size_t>(c)] = c;
    CHECK_THROWS_AS(satisfies_pjr(wide, Committee{all26}, 26), std::invalid_argument);
}

TEST_CASE("axiom verdicts match brute force over all voter subsets") {
    Rng rng(161803);
    for (int it = 0; it < 800; ++it) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const int m = 1 + static_cast<int>(rng.below(6));
        const int k = 1 + static_cast<int>(rng.below(std::min(3u, static_cast<unsigned>(m))));
        const auto sets = random_ballots(n, m, rng);
        const ApprovalProfile p(m, sets);

        // Random committee of size k.
        std::vector<int> pool(static_cast<size_t>(m));
        for (int c = 0; c < m; ++c) pool[static_cast<size_t>(c)] = c;
        rng.shuffle(pool);
        std::vector<int> members(pool.begin(), pool.begin() + k);
        std::sort(members.begin(), members.end());
        const Committee w{members};

        const BruteVerdicts want = brute_force(n, m, k, sets, members);
        const AxiomVerdict ejr = satisfies_ejr(p, w, k);
        const AxiomVerdict pjr = satisfies_pjr(p, w, k);
        REQUIRE(ejr.satisfied == want.ejr);
        REQUIRE(pjr.satisfied == want.pjr);
        if (!ejr.satisfied) verify_witness(p, w, k, *ejr.witness, true);
        if (!pjr.satisfied) verify_witness(p, w, k, *pjr.witness, false);

        // EJR is the stronger axiom.
        if (ejr.satisfied) REQUIRE(pjr.satisfied);
    }
}

TEST_CASE("pav and mes committees always satisfy ejr") {
    Rng rng(271828);
    for (int it = 0; it < 250; ++it) {
        const int n = 2 + static_cast<int>(rng.below(30));
        const int m = 2 + static_cast<int>(rng.below(11));
        const int k = 1 + static_cast<int>(rng.below(std::min(5u, static_cast<unsigned>(m))));
        const ApprovalProfile p(m, random_ballots(n, m, rng));
        const TieBreaker tie = TieBreaker::random_priority(m, rng);

        const RuleOutcome pav = pav_committee(p, k, tie);
        CHECK(satisfies_ejr(p, pav.committee, k).satisfied);

        const MesCompletion mode = rng.below(2) ? MesCompletion::Av : MesCompletion::SeqPriority;
        const RuleOutcome mes = mes_committee(p, k, tie, mode);
        CHECK(satisfies_ejr(p, mes.committee, k).satisfied);

        // av and cc may or may not violate; when they do, witnesses check out
        // and ejr implies pjr throughout.
        for (const RuleOutcome& o : {av_committee(p, k, tie), cc_committee(p, k, tie)}) {
            const AxiomVerdict e = satisfies_ejr(p, o.committee, k);
            const AxiomVerdict j = satisfies_pjr(p, o.committee, k);
            if (e.satisfied) CHECK(j.satisfied);
            if (!e.satisfied) verify_witness(p, o.committee, k, *e.witness, true);
            if (!j.satisfied) verify_witness(p, o.committee, k, *j.witness, false);
        }
    }
}

TEST_CASE("rule outcomes on the four-voter election behave as expected") {
    const ApprovalProfile p = four_voter_profile();
    const TieBreaker tie = TieBreaker::identity(4);
    const int k = 2;

    // av ignores the c-supporters entirely; the other rules cover them.
    CHECK_FALSE(satisfies_ejr(p, av_committee(p, k, tie).committee, k).satisfied);
    CHECK(satisfies_ejr(p, cc_committee(p, k, tie).committee, k).satisfied);
    CHECK(satisfies_ejr(p, pav_committee(p, k, tie).committee, k).satisfied);
    CHECK(satisfies_ejr(p, mes_committee(p, k, tie).committee, k).satisfied);
}
