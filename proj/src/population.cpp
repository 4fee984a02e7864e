#include "delib/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace delib {

void PopulationConfig::validate() const {
    if (n_minority <= 0 || n_majority <= n_minority)
        throw std::invalid_argument("population config: need n_majority > n_minority > 0");
    if (candidates < 1) throw std::invalid_argument("population config: need at least one candidate");
    if (committee_size < 1 || committee_size > candidates)
        throw std::invalid_argument("population config: committee_size must be in [1, candidates]");
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::invalid_argument("population config: phi must be in [0, 1]");
}

namespace {

void check_permutation(const Ranking& r, const char* what) {
    std::vector<char> seen(r.size(), 0);
    for (int c : r) {
        if (c < 0 || static_cast<size_t>(c) >= r.size() || seen[static_cast<size_t>(c)])
            throw std::invalid_argument(std::string(what) + ": not a permutation of [0, m)");
        seen[static_cast<size_t>(c)] = 1;
    }
}

}  // namespace

int kendall_tau(const Ranking& r1, const Ranking& r2) {
    if (r1.size() != r2.size()) throw std::invalid_argument("kendall_tau: rankings differ in length");
    check_permutation(r1, "kendall_tau");
    check_permutation(r2, "kendall_tau");
    const int m = static_cast<int>(r1.size());
    std::vector<int> pos2(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) pos2[static_cast<size_t>(r2[static_cast<size_t>(i)])] = i;
    int discordant = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (pos2[static_cast<size_t>(r1[static_cast<size_t>(i)])] >
                pos2[static_cast<size_t>(r1[static_cast<size_t>(j)])])
                ++discordant;
    return discordant;
}

Ranking sample_mallows(const Ranking& reference, double phi, Rng& rng) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("sample_mallows: phi must be in [0, 1]");
    const size_t m = reference.size();
    Ranking out;
    out.reserve(m);
    // Step s inserts reference[s] at position p <= s with weight phi^(s-p);
    // p = s keeps the reference order, each slot closer to the front adds
    // one discordant pair.
    double z = 0.0;        // sum_{t=0..s} phi^t, updated incrementally
    double phi_pow = 1.0;  // phi^s
    for (size_t s = 0; s < m; ++s) {
        z += phi_pow;
        double u = rng.next_double() * z;
        // Walk p = s, s-1, ... with weights 1, phi, phi^2, ...
        size_t p = s;
        double w = 1.0;
        while (p > 0) {
            if (u < w) break;
            u -= w;
            w *= phi;
            --p;
        }
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(p), reference[s]);
        phi_pow *= phi;
    }
    return out;
}

UtilityVector generate_utilities(const Ranking& ranking, Rng& rng) {
    const size_t m = ranking.size();
    std::vector<double> draws(m);
    for (double& d : draws) d = rng.next_double();
    std::sort(draws.begin(), draws.end(), std::greater<>());
    UtilityVector u(m, 0.0);
    for (size_t i = 0; i < m; ++i) u[static_cast<size_t>(ranking[i])] = draws[i];
    return u;
}

int sample_ballot_size(int k, int m, Rng& rng) {
    const double x = rng.normal(2.0 * k, 1.0);
    const long long r = std::llround(x);
    return static_cast<int>(std::clamp<long long>(r, 1, m));
}

std::vector<int> derive_ballot(const Agent& agent) {
    const size_t b = static_cast<size_t>(agent.ballot_size);
    return {agent.ranking.begin(), agent.ranking.begin() + static_cast<std::ptrdiff_t>(b)};
}

Ranking rerank_from_utilities(const Agent& agent) {
    Ranking out = agent.ranking;
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
        return agent.utilities[static_cast<size_t>(a)] > agent.utilities[static_cast<size_t>(b)];
    });
    return out;
}

double inverse_normal_cdf(double p) {
    // Wichura's algorithm AS241 (PPND16), accurate to ~1e-16.
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must be in (0, 1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                             1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                             4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                               3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                             4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                               6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                             2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                               2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                             5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                               1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                             5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Inverse-CDF truncated normal; consumes exactly one uniform per draw so
// the stream layout does not depend on rejection counts.
double truncated_normal(double mean, double sd, double lo, double hi, Rng& rng) {
    const double flo = normal_cdf((lo - mean) / sd);
    const double fhi = normal_cdf((hi - mean) / sd);
    const double u = rng.next_double();
    if (fhi <= flo) return lo;
    double p = flo + u * (fhi - flo);
    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    return std::clamp(mean + sd * inverse_normal_cdf(p), lo, hi);
}

Ranking random_permutation(int m, Rng& rng) {
    Ranking r(static_cast<size_t>(m));
    std::iota(r.begin(), r.end(), 0);
    rng.shuffle(r);
    return r;
}

}  // namespace

Population init_population(const PopulationConfig& cfg, Rng& rng) {
    cfg.validate();
    Population pop;
    pop.reference_majority = random_permutation(cfg.candidates, rng);
    pop.reference_minority = random_permutation(cfg.candidates, rng);

    const int n = cfg.n();
    pop.agents.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.bloc = (i < cfg.n_majority) ? Bloc::Majority : Bloc::Minority;
        const Ranking& ref =
            (a.bloc == Bloc::Majority) ? pop.reference_majority : pop.reference_minority;
        a.ranking = sample_mallows(ref, cfg.phi, rng);
        a.utilities = generate_utilities(a.ranking, rng);
        if (cfg.param_sampling == ParamSampling::Uniform) {
            a.delta = rng.next_double();
            a.alpha = rng.next_double();
            a.beta = a.alpha * rng.next_double();  // Uniform(0, alpha)
        } else {
            a.delta = truncated_normal(0.5, 0.15, 0.0, 1.0, rng);
            a.alpha = truncated_normal(0.5, 0.15, 0.0, 1.0, rng);
            a.beta = truncated_normal(0.5, 0.15, 0.0, a.alpha, rng);
        }
        a.ballot_size = sample_ballot_size(cfg.committee_size, cfg.candidates, rng);
        pop.agents.push_back(std::move(a));
    }
    return pop;
}

}  // namespace delib
