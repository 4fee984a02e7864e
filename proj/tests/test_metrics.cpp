#include "delib/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "delib/rng.hpp"
#include "doctest.h"

using namespace delib;

namespace {

ApprovalProfile four_voter_profile() {
    return ApprovalProfile(4, {{0, 1}, {0, 1}, {2}, {2, 3}});
}

Committee comm(std::vector<int> members) {
    return Committee{std::move(members)};
}

Population population_from_utilities(const std::vector<UtilityVector>& us) {
    Population pop;
    for (size_t i = 0; i < us.size(); ++i) {
        Agent a;
        a.id = static_cast<int>(i);
        a.utilities = us[i];
        pop.agents.push_back(std::move(a));
    }
    return pop;
}

// Average ranks of |d|, doubled so they are integers; independent of the
// implementation under test.
std::vector<int> doubled_ranks(const std::vector<double>& nz) {
    const int n = static_cast<int>(nz.size());
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return std::fabs(nz[static_cast<size_t>(i)]) < std::fabs(nz[static_cast<size_t>(j)]); });
    std::vector<int> r2(static_cast<size_t>(n));
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && std::fabs(nz[static_cast<size_t>(idx[static_cast<size_t>(j)])]) ==
                            std::fabs(nz[static_cast<size_t>(idx[static_cast<size_t>(i)])]))
            ++j;
        for (int t = i; t < j; ++t) r2[static_cast<size_t>(idx[static_cast<size_t>(t)])] = i + 1 + j;
        i = j;
    }
    return r2;
}

}  // namespace

TEST_CASE("utilitarian ratio compares welfare against the optimum") {
    const std::vector<UtilityVector> us = {{0.9, 0.1, 0.5}, {0.8, 0.2, 0.4}};
    CHECK(utilitarian_ratio(us, comm({0, 1}), 2) == doctest::Approx(2.0 / 2.6).epsilon(1e-12));
    CHECK(utilitarian_ratio(us, comm({0, 2}), 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(utilitarian_ratio_given_max(us, comm({0, 1}), 2.6) ==
          doctest::Approx(2.0 / 2.6).epsilon(1e-12));

    const std::vector<UtilityVector> zeros = {{0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(utilitarian_ratio(zeros, comm({0}), 1), std::domain_error);
}

TEST_CASE("representation ratio compares coverage against the exact maximum") {
    const ApprovalProfile p = four_voter_profile();
    CHECK(representation_ratio(p, comm({0, 1}), 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(representation_ratio(p, comm({0, 2}), 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(representation_ratio_given_max(p, comm({0, 1}), 4) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(uragg(0.8, 0.5) == doctest::Approx(0.4).epsilon(1e-12));

    const ApprovalProfile q(3, {{0}});
    CHECK_THROWS_AS(representation_ratio_given_max(q, comm({1}), 0), std::domain_error);
}

TEST_CASE("voter satisfaction averages approved members per voter") {
    const ApprovalProfile p = four_voter_profile();
    CHECK(voter_satisfaction(p, comm({0, 2})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(voter_satisfaction(p, comm({2, 3})) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(voter_satisfaction(p, comm({0, 1})) == doctest::Approx(1.0).epsilon(1e-12));

    const ApprovalProfile empty(3, {});
    CHECK_THROWS_AS(voter_satisfaction(empty, comm({0})), std::invalid_argument);
}

TEST_CASE("utility variance is the population variance averaged over candidates") {
    const Population two = population_from_utilities({{0.2}, {0.8}});
    CHECK(utility_variance(two) == doctest::Approx(0.09).epsilon(1e-12));

    const Population mixed = population_from_utilities({{0.2, 0.5}, {0.8, 0.5}});
    CHECK(utility_variance(mixed) == doctest::Approx(0.045).epsilon(1e-12));

    const Population consensus = population_from_utilities({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}});
    CHECK(utility_variance(consensus) == doctest::Approx(0.0));

    const Population none;
    CHECK_THROWS_AS(utility_variance(none), std::invalid_argument);
}

TEST_CASE("intergroup disagreement averages normalized ballot overlap") {
    // One pair: |{b}| / min(2, 2) -> 1 - 1/2.
    const ApprovalProfile p(3, {{0, 1}, {1, 2}});
    const std::vector<Bloc> blocs = {Bloc::Minority, Bloc::Majority};
    CHECK(intergroup_disagreement(p, blocs) == doctest::Approx(0.5).epsilon(1e-12));

    // Identical ballots agree perfectly; disjoint ones disagree fully.
    const ApprovalProfile same(3, {{0, 1}, {0, 1}});
    CHECK(intergroup_disagreement(same, blocs) == doctest::Approx(0.0));
    const ApprovalProfile disjoint(4, {{0, 1}, {2, 3}});
    CHECK(intergroup_disagreement(disjoint, blocs) == doctest::Approx(1.0));

    // Normalization uses the smaller ballot: |{0}| / min(1, 3) = 1.
    const ApprovalProfile nested(3, {{0}, {0, 1, 2}});
    CHECK(intergroup_disagreement(nested, blocs) == doctest::Approx(0.0));

    // Two minority x two majority voters: mean of the four pair scores.
    const ApprovalProfile quad(4, {{0, 1}, {2, 3}, {0, 1}, {0, 3}});
    const std::vector<Bloc> blocs4 = {Bloc::Minority, Bloc::Minority, Bloc::Majority, Bloc::Majority};
    // pairs: (0,2)->0, (0,3)->0.5, (1,2)->1, (1,3)->0.5
    CHECK(intergroup_disagreement(quad, blocs4) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(intergroup_disagreement(p, {Bloc::Minority}), std::invalid_argument);
    const std::vector<Bloc> onebloc = {Bloc::Majority, Bloc::Majority};
    CHECK_THROWS_AS(intergroup_disagreement(p, onebloc), std::invalid_argument);
}

TEST_CASE("minority supported candidates use exact fraction comparisons") {
    const ApprovalProfile p = four_voter_profile();
    const std::vector<Bloc> blocs = {Bloc::Majority, Bloc::Majority, Bloc::Minority, Bloc::Minority};
    CHECK(minority_supported_candidates(p, blocs) == std::vector<int>{2, 3});
    CHECK(minority_supported_candidates(p, blocs, MinorityRule::GreaterEqual) ==
          std::vector<int>{2, 3});

    // Equal support fractions: excluded under Strict, included under >=.
    const ApprovalProfile even(2, {{0}, {0, 1}});
    const std::vector<Bloc> one_each = {Bloc::Minority, Bloc::Majority};
    CHECK(minority_supported_candidates(even, one_each) == std::vector<int>{});
    CHECK(minority_supported_candidates(even, one_each, MinorityRule::GreaterEqual) ==
          std::vector<int>{0});

    CHECK(minority_preservation({2, 3}, comm({0, 2})) == 1);
    CHECK(minority_preservation({2, 3}, comm({2, 3})) == 2);
    CHECK(minority_preservation({}, comm({0, 1})) == 0);

    CHECK_THROWS_AS(minority_supported_candidates(p, {Bloc::Minority}), std::invalid_argument);
}

TEST_CASE("committee approval profile sorts member support counts") {
    const ApprovalProfile p = four_voter_profile();
    CHECK(committee_approval_profile(p, comm({0, 2})) == std::vector<int>{2, 2});

    const ApprovalProfile v(3, {{0, 1, 2}, {0, 2}, {0, 2}, {0}, {0}});
    CHECK(committee_approval_profile(v, comm({0, 1, 2})) == std::vector<int>{1, 3, 5});

    const ApprovalProfile all(2, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(committee_approval_profile(all, comm({0, 1})) == std::vector<int>{3, 3});
}

TEST_CASE("incomplete beta matches reference values") {
    // Frozen from an independent reference implementation.
    CHECK(incomplete_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-12));
    CHECK(incomplete_beta(5.0, 0.5, 0.9) == doctest::Approx(0.31664291502001218).epsilon(1e-12));
    CHECK(incomplete_beta(4.5, 0.5, 0.99) == doctest::Approx(0.76987499989213659).epsilon(1e-12));
    CHECK(incomplete_beta(12.5, 0.5, 0.5) ==
          doctest::Approx(3.7271074814453958e-05).epsilon(1e-12));
    CHECK(incomplete_beta(2.0, 3.0, 0.25) == doctest::Approx(0.26171875).epsilon(1e-12));
    CHECK(incomplete_beta(6.0, 6.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.1), std::invalid_argument);

    // Complement identity on a grid.
    for (double x : {0.05, 0.2, 0.4, 0.6, 0.85}) {
        CHECK(incomplete_beta(3.5, 1.25, x) ==
              doctest::Approx(1.0 - incomplete_beta(1.25, 3.5, 1.0 - x)).epsilon(1e-12));
    }
}

TEST_CASE("student t two-sided p-values match reference values") {
    CHECK(students_t_two_sided_pvalue(2.0251582216668416, 9) ==
          doctest::Approx(0.073507134116736386).epsilon(1e-12));
    CHECK(students_t_two_sided_pvalue(1.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(students_t_two_sided_pvalue(2.5, 30) ==
          doctest::Approx(0.018115649068066682).epsilon(1e-12));
    CHECK(students_t_two_sided_pvalue(0.0, 5) == doctest::Approx(1.0));
    CHECK(students_t_two_sided_pvalue(10.0, 3) ==
          doctest::Approx(0.0021283990584141503).epsilon(1e-12));
    CHECK(students_t_two_sided_pvalue(-10.0, 3) ==
          doctest::Approx(0.0021283990584141503).epsilon(1e-12));
    CHECK(students_t_two_sided_pvalue(std::numeric_limits<double>::infinity(), 4) == 0.0);
    CHECK_THROWS_AS(students_t_two_sided_pvalue(1.0, 0), std::invalid_argument);

    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(normal_cdf(-8.0) < 1e-14);
}

TEST_CASE("paired tests reproduce reference statistics and p-values") {
    // All expectations frozen from an independent reference implementation
    // (two-sided, no continuity correction, zero differences dropped, exact
    // signed-rank distribution up to 25 nonzero differences).
    struct Case {
        std::vector<double> a, b;
        double t_stat, t_p, w_stat, w_p;
        bool w_exact;  // exact p-values are dyadic rationals: compare bitwise
    };
    const std::vector<Case> cases = {
        {{0.83, 0.91, 0.88, 0.79, 0.95, 0.87, 0.90, 0.84, 0.89, 0.93},
         {0.85, 0.89, 0.91, 0.80, 0.94, 0.90, 0.92, 0.83, 0.92, 0.95},
         -2.0251582216668416, 0.073507134116736358, 10.0, 0.083984375, true},
        {{1.2, 3.4, 2.2, 5.6, 0.4, 8.1, 2.3, 4.4, 5.0, 1.1, 2.2, 3.3},
         {1.0, 3.0, 2.5, 5.0, 0.9, 7.0, 2.0, 4.9, 4.2, 1.3, 2.0, 3.8},
         0.85545819991904393, 0.41054389775613609, 30.0, 0.5185546875, true},
        {{0.752441, 0.772789, 0.542336, 0.272959, 0.212323, 0.416175, 0.697096, 0.796807,
          0.623636, 0.336794, 0.200003, 0.339028, 0.62605,  0.797182, 0.695086, 0.413629,
          0.211581, 0.274704, 0.544963, 0.773884, 0.750997, 0.497345, 0.246134, 0.228326,
          0.460294},
         {0.655076, 0.415963, 0.272502, 0.356589, 0.590916, 0.760043, 0.708476, 0.483625,
          0.292217, 0.310232, 0.521106, 0.730963, 0.746862, 0.554184, 0.330078, 0.280585,
          0.451209, 0.685079, 0.767176, 0.622021, 0.383068, 0.27001,  0.386792, 0.626045,
          0.767801},
         -0.34399483681099785, 0.73384587048706162, 147.0, 0.69151884317398071, true},
        {{0.12, 0.47, 0.31, 0.89, 0.55, 0.23, 0.71, 0.64, 0.92, 0.38},
         {0.18, 0.42, 0.30, 0.70, 0.58, 0.35, 0.68, 0.50, 0.78, 0.45},
         0.86291249977677387, 0.41059008591117629, 20.5, 0.556640625, true},
        {{0.5, 0.4, 0.3, 0.2, 0.1, 0.15, 0.25, 0.35, 0.45, 0.55, 0.6, 0.7},
         {0.5, 0.4, 0.41, 0.13, 0.04, 0.31, 0.20, 0.10, 0.32, 0.62, 0.49, 0.81},
         0.53820319287666163, 0.60115706722951279, 24.5, 0.845703125, true},
    };
    for (size_t ci = 0; ci < cases.size(); ++ci) {
        INFO("case ", ci);
        const PairedTestResult r = paired_tests(cases[ci].a, cases[ci].b);
        CHECK_FALSE(r.t_degenerate);
        CHECK_FALSE(r.wilcoxon_degenerate);
        CHECK(r.t_statistic == doctest::Approx(cases[ci].t_stat).epsilon(1e-9));
        CHECK(r.t_pvalue == doctest::Approx(cases[ci].t_p).epsilon(1e-9));
        CHECK(r.wilcoxon_statistic == cases[ci].w_stat);
        if (cases[ci].w_exact) CHECK(r.wilcoxon_pvalue == cases[ci].w_p);
    }
}

TEST_CASE("paired tests use the normal approximation beyond 25 differences") {
    const std::vector<double> a7 = {
        0.076308, 0.779919, 0.438409, 0.723465, 0.97799,  0.538496, 0.50112,  0.072051,
        0.268439, 0.499883, 0.67923,  0.803739, 0.380941, 0.065936, 0.288146, 0.909594,
        0.213385, 0.452124, 0.931206, 0.024899, 0.600549, 0.95013,  0.230303, 0.54849,
        0.909128, 0.133169, 0.523413, 0.75041,  0.669013, 0.467753, 0.204849, 0.490766,
        0.372385, 0.477401, 0.36589,  0.837918, 0.768648, 0.313995, 0.572625, 0.276049};
    const std::vector<double> b7 = {
        -0.130778, 0.727081, 0.325945, 0.904282, 1.192268, 0.52226,  0.613601, 0.072252,
        0.350926,  0.437071, 0.511313, 0.625398, 0.443084, 0.333171, 0.337781, 0.871887,
        0.443707,  0.498227, 0.962364, 0.072683, 0.605988, 0.936088, 0.092457, 0.623669,
        0.918703,  0.284408, 0.502843, 0.560709, 0.678056, 0.674702, 0.182672, 0.412882,
        0.26109,   0.381899, 0.352869, 0.72812,  0.953388, 0.302905, 0.604576, 0.454255};
    const PairedTestResult r7 = paired_tests(a7, b7);
    CHECK(r7.t_statistic == doctest::Approx(-0.69512797895257661).epsilon(1e-9));
    CHECK(r7.t_pvalue == doctest::Approx(0.49109628425457397).epsilon(1e-9));
    CHECK(r7.wilcoxon_statistic == 375.0);
    CHECK(r7.wilcoxon_pvalue == doctest::Approx(0.6380368304050229).epsilon(1e-9));

    // Heavily tied differences exercise the tie-corrected variance.
    const std::vector<double> a8 = {0.46, 0.78, 0.89, 0.67, 0.8,  0.94, 0.04, 0.88, 0.28, 0.48,
                                    0.8,  0.72, 0.15, 0.66, 0.07, 0.36, 0.81, 0.43, 0.6,  0.73,
                                    0.82, 0.76, 0.01, 0.42, 0.46, 0.06, 0.54, 0.61, 0.83, 0.94,
                                    0.13, 0.23, 0.66, 0.13, 0.22, 0.57, 0.17, 0.78, 0.86, 0.03};
    const std::vector<double> b8 = {0.5,  0.74, 0.85, 0.75, 0.76, 0.86, -0.04, 0.84, 0.24, 0.44,
                                    0.88, 0.76, 0.07, 0.7,  0.11, 0.48, 0.85,  0.51, 0.72, 0.65,
                                    0.78, 0.88, -0.03, 0.54, 0.54, 0.1, 0.66,  0.57, 0.75, 0.98,
                                    0.25, 0.15, 0.58, 0.25, 0.18, 0.49, 0.21,  0.7,  0.94, -0.05};
    const PairedTestResult r8 = paired_tests(a8, b8);
    CHECK(r8.t_statistic == doctest::Approx(-0.75383530962809964).epsilon(1e-9));
    CHECK(r8.t_pvalue == doctest::Approx(0.45547552433824956).epsilon(1e-9));
    CHECK(r8.wilcoxon_statistic == 375.5);
    CHECK(r8.wilcoxon_pvalue == doctest::Approx(0.64212993335185065).epsilon(1e-9));
}

TEST_CASE("degenerate difference vectors are flagged instead of crashing") {
    // Identical samples: no signal at all.
    const std::vector<double> same(12, 0.4);
    const PairedTestResult r0 = paired_tests(same, same);
    CHECK(r0.t_degenerate);
    CHECK(r0.t_statistic == 0.0);
    CHECK(r0.t_pvalue == 1.0);
    CHECK(r0.wilcoxon_degenerate);
    CHECK(r0.wilcoxon_pvalue == 1.0);

    // Constant nonzero difference: t blows up, signed-rank stays exact.
    const std::vector<double> hi(10, 1.5), lo(10, 1.0);
    const PairedTestResult r1 = paired_tests(hi, lo);
    CHECK(r1.t_degenerate);
    CHECK(r1.t_statistic == std::numeric_limits<double>::infinity());
    CHECK(r1.t_pvalue == 0.0);
    CHECK_FALSE(r1.wilcoxon_degenerate);
    CHECK(r1.wilcoxon_statistic == 0.0);
    CHECK(r1.wilcoxon_pvalue == 0.001953125);

    const PairedTestResult r2 = paired_tests(lo, hi);
    CHECK(r2.t_statistic == -std::numeric_limits<double>::infinity());
    CHECK(r2.t_pvalue == 0.0);

    CHECK_THROWS_AS(paired_tests({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
    const std::vector<double> ten(10, 0.0), eleven(11, 0.0);
    CHECK_THROWS_AS(paired_tests(ten, eleven), std::invalid_argument);
}

TEST_CASE("exact signed-rank p-values match full sign-flip enumeration") {
    Rng rng(5551212);
    for (int it = 0; it < 200; ++it) {
        // Differences on a 1/8 grid force exact ties and zeros.
        const int n = 12;
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n), 0.0);
        for (double& x : a) x = 0.125 * (static_cast<double>(rng.below(9)) - 4.0);

        std::vector<double> nz;
        for (double x : a)
            if (x != 0.0) nz.push_back(x);
        const int nr = static_cast<int>(nz.size());
        if (nr == 0) continue;

        const PairedTestResult r = paired_tests(a, b);

        const std::vector<int> r2 = doubled_ranks(nz);
        double w_plus2 = 0.0;
        for (int i = 0; i < nr; ++i)
            if (nz[static_cast<size_t>(i)] > 0.0) w_plus2 += r2[static_cast<size_t>(i)];
        const double total2 = static_cast<double>(nr) * (nr + 1);
        CHECK(r.wilcoxon_statistic == std::min(w_plus2, total2 - w_plus2) / 2.0);

        // Enumerate all sign assignments of the untied ranks 1..nr; the tied
        // statistic is rounded toward the nearer tail (ceil for the lower,
        // floor for the upper).
        const double w_plus = w_plus2 / 2.0;
        const int k_lo = static_cast<int>(std::ceil(w_plus));
        const int k_hi = static_cast<int>(std::floor(w_plus));
        int64_t cdf = 0, sf = 0;
        for (uint32_t mask = 0; mask < (1u << nr); ++mask) {
            int w = 0;
            for (int i = 0; i < nr; ++i)
                if (mask >> i & 1) w += i + 1;
            if (w <= k_lo) ++cdf;
            if (w >= k_hi) ++sf;
        }
        const double want = std::min(
            1.0, 2.0 * static_cast<double>(std::min(cdf, sf)) / std::pow(2.0, nr));
        CHECK(r.wilcoxon_pvalue == want);
    }
}

TEST_CASE("t-test p-values are uniform under the null hypothesis") {
    Rng rng(987654321);
    const int trials = 1000, n = 30;
    std::vector<double> pvals;
    pvals.reserve(trials);
    double mean_p = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n), 0.0);
        for (double& x : a) x = rng.normal(0.0, 1.0);
        const double p = paired_tests(a, b).t_pvalue;
        pvals.push_back(p);
        mean_p += p;
    }
    mean_p /= trials;
    CHECK(mean_p == doctest::Approx(0.5).epsilon(0.075));

    std::sort(pvals.begin(), pvals.end());
    double ks = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double u = pvals[static_cast<size_t>(i)];
        ks = std::max(ks, std::fabs(u - static_cast<double>(i) / trials));
        ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / trials - u));
    }
    // 1% critical value at this sample size is ~0.0515.
    CHECK(ks < 0.05);
}
