#pragma once

#include <vector>

#include "delib/population.hpp"
#include "delib/rules.hpp"

namespace delib {

// Achieved social welfare over the optimum for the same utilities; the
// _given_max variant takes a precomputed optimum instead of solving for it.
// Throws std::domain_error if optimal welfare is zero.
double utilitarian_ratio(const std::vector<UtilityVector>& utilities, const Committee& w, int k);
double utilitarian_ratio_given_max(const std::vector<UtilityVector>& utilities, const Committee& w,
                                   double max_welfare);

// Achieved coverage over the exact maximum coverage; the _given_max variant
// takes a precomputed maximum instead of solving CC.
double representation_ratio(const ApprovalProfile& profile, const Committee& w, int k);
double representation_ratio_given_max(const ApprovalProfile& profile, const Committee& w,
                                      int max_coverage);

double uragg(double ur, double rr);

// Mean number of approved committee members per voter.
double voter_satisfaction(const ApprovalProfile& profile, const Committee& w);

// Mean over candidates of the population variance (divide by N) of the
// agents' utilities for that candidate.
double utility_variance(const Population& pop);

// Mean over all (minority, majority) voter pairs of
// 1 - |A_min ∩ A_maj| / min(|A_min|, |A_maj|).
double intergroup_disagreement(const ApprovalProfile& profile, const std::vector<Bloc>& blocs);

enum class MinorityRule {
    Strict,       // V_min(c)/n_min > V_maj(c)/n_maj
    GreaterEqual  // >= instead, still requiring V_min(c) > 0
};

// Candidates better supported (fraction-wise) by the minority bloc on the
// pre-deliberation profile; comparisons are exact cross-multiplications.
std::vector<int> minority_supported_candidates(const ApprovalProfile& initial_profile,
                                               const std::vector<Bloc>& blocs,
                                               MinorityRule rule = MinorityRule::Strict);

int minority_preservation(const std::vector<int>& minority_set, const Committee& w);

// Members' approval counts sorted ascending.
std::vector<int> committee_approval_profile(const ApprovalProfile& profile, const Committee& w);

struct PairedTestResult {
    double t_statistic = 0.0;
    double t_pvalue = 1.0;
    double wilcoxon_statistic = 0.0;
    double wilcoxon_pvalue = 1.0;
    bool t_degenerate = false;         // zero-variance differences
    bool wilcoxon_degenerate = false;  // all differences zero
};

// Two-sided paired t-test and Wilcoxon signed-rank test (zero differences
// dropped; exact signed-rank null distribution when at most 25 nonzero
// differences remain, with tied statistics rounded conservatively toward the
// nearer tail, else normal approximation with tie correction).
// Requires equal lengths >= 10.
PairedTestResult paired_tests(const std::vector<double>& a, const std::vector<double>& b);

// Exposed for testing against reference implementations.
double incomplete_beta(double a, double b, double x);          // regularized I_x(a, b)
double students_t_two_sided_pvalue(double t, int df);
double normal_cdf(double z);

}  // namespace delib
