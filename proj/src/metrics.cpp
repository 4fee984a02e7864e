#include "delib/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace delib {

double utilitarian_ratio(const std::vector<UtilityVector>& utilities, const Committee& w, int k) {
    return utilitarian_ratio_given_max(utilities, w, optimal_welfare_committee(utilities, k).score);
}

double utilitarian_ratio_given_max(const std::vector<UtilityVector>& utilities, const Committee& w,
                                   double max_welfare) {
    if (max_welfare <= 0.0) throw std::domain_error("utilitarian_ratio: zero optimal welfare");
    return social_welfare(utilities, w) / max_welfare;
}

double representation_ratio(const ApprovalProfile& profile, const Committee& w, int k) {
    const RuleOutcome cc = cc_committee(profile, k, TieBreaker::identity(profile.m));
    return representation_ratio_given_max(profile, w, static_cast<int>(cc.score));
}

double representation_ratio_given_max(const ApprovalProfile& profile, const Committee& w,
                                      int max_coverage) {
    if (max_coverage <= 0) throw std::domain_error("representation_ratio: zero max coverage");
    return static_cast<double>(coverage_score(profile, w)) / max_coverage;
}

double uragg(double ur, double rr) { return ur * rr; }

double voter_satisfaction(const ApprovalProfile& profile, const Committee& w) {
    if (profile.n == 0) throw std::invalid_argument("voter_satisfaction: empty profile");
    Bitset wmask(profile.m);
    for (int c : w.members) wmask.set(c);
    int64_t total = 0;
    for (const Bitset& ballot : profile.ballots) total += Bitset::and_count(ballot, wmask);
    return static_cast<double>(total) / profile.n;
}

double utility_variance(const Population& pop) {
    const size_t n = pop.agents.size();
    if (n == 0) throw std::invalid_argument("utility_variance: empty population");
    const size_t m = pop.agents.front().utilities.size();
    double total = 0.0;
    for (size_t c = 0; c < m; ++c) {
        double sum = 0.0, sum2 = 0.0;
        for (const Agent& a : pop.agents) {
            const double u = a.utilities[c];
            sum += u;
            sum2 += u * u;
        }
        const double mean = sum / static_cast<double>(n);
        total += std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
    }
    return total / static_cast<double>(m);
}

double intergroup_disagreement(const ApprovalProfile& profile, const std::vector<Bloc>& blocs) {
    if (static_cast<int>(blocs.size()) != profile.n)
        throw std::invalid_argument("intergroup_disagreement: bloc assignment size mismatch");
    std::vector<int> min_ids, maj_ids;
    for (int i = 0; i < profile.n; ++i)
        (blocs[static_cast<size_t>(i)] == Bloc::Minority ? min_ids : maj_ids).push_back(i);
    if (min_ids.empty() || maj_ids.empty())
        throw std::invalid_argument("intergroup_disagreement: both blocs must be nonempty");
    double total = 0.0;
    for (int i : min_ids) {
        const Bitset& bi = profile.ballots[static_cast<size_t>(i)];
        const int ci = bi.count();
        for (int j : maj_ids) {
            const Bitset& bj = profile.ballots[static_cast<size_t>(j)];
            const int common = Bitset::and_count(bi, bj);
            total += 1.0 - static_cast<double>(common) / std::min(ci, bj.count());
        }
    }
    return total / (static_cast<double>(min_ids.size()) * static_cast<double>(maj_ids.size()));
}

std::vector<int> minority_supported_candidates(const ApprovalProfile& profile,
                                               const std::vector<Bloc>& blocs, MinorityRule rule) {
    if (static_cast<int>(blocs.size()) != profile.n)
        throw std::invalid_argument("minority_supported_candidates: bloc assignment size mismatch");
    int64_t n_min = 0, n_maj = 0;
    for (Bloc b : blocs) (b == Bloc::Minority ? n_min : n_maj) += 1;
    if (n_min == 0 || n_maj == 0)
        throw std::invalid_argument("minority_supported_candidates: both blocs must be nonempty");
    std::vector<int> out;
    for (int c = 0; c < profile.m; ++c) {
        int64_t v_min = 0, v_maj = 0;
        const Bitset& sup = profile.supporters[static_cast<size_t>(c)];
        for (int i = 0; i < profile.n; ++i)
            if (sup.test(i)) (blocs[static_cast<size_t>(i)] == Bloc::Minority ? v_min : v_maj) += 1;
        // V_min/n_min vs V_maj/n_maj, cross-multiplied to avoid rounding.
        const bool in = (rule == MinorityRule::Strict)
                            ? v_min * n_maj > v_maj * n_min
                            : (v_min > 0 && v_min * n_maj >= v_maj * n_min);
        if (in) out.push_back(c);
    }
    return out;
}

int minority_preservation(const std::vector<int>& minority_set, const Committee& w) {
    int count = 0;
    for (int c : minority_set)
        if (w.contains(c)) ++count;
    return count;
}

std::vector<int> committee_approval_profile(const ApprovalProfile& profile, const Committee& w) {
    std::vector<int> out;
    out.reserve(w.members.size());
    for (int c : w.members) out.push_back(profile.approvals[static_cast<size_t>(c)]);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Continued-fraction evaluation of the regularized incomplete beta
// (Lentz's method, as in Numerical Recipes' betacf).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3.0e-16;
    constexpr double kFpMin = 1.0e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                         b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double students_t_two_sided_pvalue(double t, int df) {
    if (df < 1) throw std::invalid_argument("students_t_two_sided_pvalue: df must be >= 1");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

PairedTestResult paired_tests(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_tests: unequal sample sizes");
    const int n = static_cast<int>(a.size());
    if (n < 10) throw std::invalid_argument("paired_tests: need at least 10 pairs");

    std::vector<double> d(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)];

    PairedTestResult out;

    // Paired t-test.
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double var = ss / (n - 1);
    if (var <= 0.0) {
        out.t_degenerate = true;
        if (mean == 0.0) {
            out.t_statistic = 0.0;
            out.t_pvalue = 1.0;
        } else {
            out.t_statistic = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
            out.t_pvalue = 0.0;
        }
    } else {
        out.t_statistic = mean / std::sqrt(var / n);
        out.t_pvalue = students_t_two_sided_pvalue(out.t_statistic, n - 1);
    }

    // Wilcoxon signed-rank: drop zero differences, rank |d| with average
    // ranks for ties, T = min(W+, W-).
    std::vector<double> nz;
    for (double x : d)
        if (x != 0.0) nz.push_back(x);
    const int nr = static_cast<int>(nz.size());
    if (nr == 0) {
        out.wilcoxon_degenerate = true;
        out.wilcoxon_statistic = 0.0;
        out.wilcoxon_pvalue = 1.0;
        return out;
    }
    std::vector<int> idx(static_cast<size_t>(nr));
    for (int i = 0; i < nr; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return std::fabs(nz[static_cast<size_t>(i)]) < std::fabs(nz[static_cast<size_t>(j)]); });
    std::vector<double> rank(static_cast<size_t>(nr));
    double tie_correction = 0.0;  // sum over tie groups of (t^3 - t)
    for (int i = 0; i < nr;) {
        int j = i;
        while (j < nr && std::fabs(nz[static_cast<size_t>(idx[static_cast<size_t>(j)])]) ==
                             std::fabs(nz[static_cast<size_t>(idx[static_cast<size_t>(i)])]))
            ++j;
        const double avg = (i + 1 + j) / 2.0;  // mean of ranks i+1 .. j
        for (int t = i; t < j; ++t) rank[static_cast<size_t>(idx[static_cast<size_t>(t)])] = avg;
        if (j - i > 1) {
            const double g = j - i;
            tie_correction += g * g * g - g;
        }
        i = j;
    }
    double w_plus = 0.0;
    for (int i = 0; i < nr; ++i)
        if (nz[static_cast<size_t>(i)] > 0.0) w_plus += rank[static_cast<size_t>(i)];
    const double total_rank = static_cast<double>(nr) * (nr + 1) / 2.0;
    const double w_minus = total_rank - w_plus;
    const double t_stat = std::min(w_plus, w_minus);
    out.wilcoxon_statistic = t_stat;

    if (nr <= 25) {
        // Exact null distribution of W+ under random sign flips of the untied
        // ranks 1..nr. Ties make the observed statistic half-integral while
        // the null support stays integral, so round conservatively: ceil for
        // the lower tail, floor for the upper.
        const int max_sum = nr * (nr + 1) / 2;
        std::vector<int64_t> ways(static_cast<size_t>(max_sum) + 1, 0);
        ways[0] = 1;
        for (int r = 1; r <= nr; ++r)
            for (int s = max_sum; s >= r; --s)
                ways[static_cast<size_t>(s)] += ways[static_cast<size_t>(s - r)];
        const int k_lo = static_cast<int>(std::ceil(w_plus));
        const int k_hi = static_cast<int>(std::floor(w_plus));
        int64_t cdf = 0, sf = 0;
        for (int s = 0; s <= std::min(k_lo, max_sum); ++s) cdf += ways[static_cast<size_t>(s)];
        for (int s = std::max(k_hi, 0); s <= max_sum; ++s) sf += ways[static_cast<size_t>(s)];
        const double tail = static_cast<double>(std::min(cdf, sf));
        out.wilcoxon_pvalue = std::min(1.0, 2.0 * tail / std::pow(2.0, nr));
    } else {
        const double mn = static_cast<double>(nr) * (nr + 1) / 4.0;
        const double var_w =
            static_cast<double>(nr) * (nr + 1) * (2 * nr + 1) / 24.0 - tie_correction / 48.0;
        if (var_w <= 0.0) {
            out.wilcoxon_degenerate = true;
            out.wilcoxon_pvalue = 1.0;
        } else {
            const double z = (t_stat - mn) / std::sqrt(var_w);
            out.wilcoxon_pvalue = std::min(1.0, 2.0 * normal_cdf(z));
        }
    }
    return out;
}

}  // namespace delib
