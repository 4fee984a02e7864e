#pragma once

#include <vector>

#include "delib/rng.hpp"

namespace delib {

enum class Bloc { Majority, Minority };

// Permutation of candidate ids, most preferred first.
using Ranking = std::vector<int>;
// utilities[c] in [0,1] for candidate c.
using UtilityVector = std::vector<double>;

struct Agent {
    int id = 0;
    Bloc bloc = Bloc::Majority;
    Ranking ranking;
    UtilityVector utilities;
    double delta = 0.0;  // confidence bound
    double alpha = 0.0;  // same-bloc influence weight
    double beta = 0.0;   // cross-bloc influence weight, beta <= alpha
    int ballot_size = 1;
};

enum class ParamSampling { Uniform, Normal };

struct PopulationConfig {
    int n_majority = 80;
    int n_minority = 20;
    int candidates = 50;
    double phi = 0.2;
    int committee_size = 5;
    ParamSampling param_sampling = ParamSampling::Uniform;

    int n() const { return n_majority + n_minority; }
    void validate() const;  // throws std::invalid_argument
};

struct Population {
    std::vector<Agent> agents;
    Ranking reference_majority;
    Ranking reference_minority;
};

// Number of discordant pairs between two rankings over the same candidates.
int kendall_tau(const Ranking& r1, const Ranking& r2);

// Repeated-insertion sampler for the Mallows distribution phi^d(r, reference)/Z.
Ranking sample_mallows(const Ranking& reference, double phi, Rng& rng);

// m iid Uniform(0,1) draws sorted descending and mapped onto the ranking,
// so the top-ranked candidate gets the largest utility.
UtilityVector generate_utilities(const Ranking& ranking, Rng& rng);

// round(Normal(2k, 1)) clamped to [1, m].
int sample_ballot_size(int k, int m, Rng& rng);

// The agent's ballot_size most-preferred candidates (prefix of its ranking).
std::vector<int> derive_ballot(const Agent& agent);

// Candidates sorted by utility descending; exact ties keep the agent's
// current ranking order (stable), so the result is seed-reproducible.
Ranking rerank_from_utilities(const Agent& agent);

Population init_population(const PopulationConfig& cfg, Rng& rng);

// Inverse standard normal CDF (Wichura's AS241), exposed for the truncated
// normal parameter sampling and for tests.
double inverse_normal_cdf(double p);

}  // namespace delib
