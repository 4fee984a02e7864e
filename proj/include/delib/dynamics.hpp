#pragma once

#include <vector>

#include "delib/grouping.hpp"
#include "delib/population.hpp"
#include "delib/rng.hpp"

namespace delib {

// Whether a speaker reports its live utilities (updated by earlier speeches
// in the same round) or a snapshot taken at the start of the round. The
// process is turn-taking, so Immediate is the default reading.
enum class UpdateMode { Immediate, Snapshot };

UpdateMode parse_update_mode(std::string_view name);  // "immediate" | "snapshot"
std::string_view update_mode_name(UpdateMode mode);

struct DeliberationTrace {
    // Population utility variance per round; index 0 is pre-deliberation.
    std::vector<double> variance;
};

// alpha of the listener when both share a bloc, beta otherwise. Throws
// std::invalid_argument when listener and speaker are the same agent.
double influence_weight(const Agent& listener, const Agent& speaker);

// Per-candidate bounded-confidence update: coordinates within delta of the
// speaker move to (1-w)*own + w*speaker, others are untouched.
UtilityVector bc_update(const Agent& listener, const UtilityVector& speaker_utilities, double w,
                        double delta);

// One deliberation round inside a single group: speakers take turns in a
// uniformly random order; after each speech every other member updates.
// Throws std::invalid_argument on empty groups, bad ids or duplicates.
void run_group_round(const std::vector<int>& group, std::vector<Agent>& agents, Rng& rng,
                     UpdateMode mode = UpdateMode::Immediate);

// Full deliberation for one strategy: iterative strategies rebuild groups
// every round for `rounds` rounds and update meeting counts; single-round
// strategies run at most one round. rounds = 0 is a no-op.
DeliberationTrace run_deliberation(Population& pop, Strategy strategy, int g, int rounds, Rng& rng,
                                   UpdateMode mode = UpdateMode::Immediate);

}  // namespace delib
