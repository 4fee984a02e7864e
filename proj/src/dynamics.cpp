#include "delib/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "delib/metrics.hpp"

namespace delib {

UpdateMode parse_update_mode(std::string_view name) {
    if (name == "immediate") return UpdateMode::Immediate;
    if (name == "snapshot") return UpdateMode::Snapshot;
    throw std::invalid_argument("unknown update mode: " + std::string(name));
}

std::string_view update_mode_name(UpdateMode mode) {
    return mode == UpdateMode::Immediate ? "immediate" : "snapshot";
}

double influence_weight(const Agent& listener, const Agent& speaker) {
    if (listener.id == speaker.id)
        throw std::invalid_argument("influence_weight: listener and speaker must differ");
    return listener.bloc == speaker.bloc ? listener.alpha : listener.beta;
}

namespace {

// In-place form of bc_update; the public operation wraps it.
void apply_update(UtilityVector& own, const UtilityVector& speaker, double w, double delta) {
    for (size_t j = 0; j < own.size(); ++j) {
        // Equal coordinates are a fixed point of the convex combination;
        // skipping them keeps that exact in floating point.
        if (own[j] == speaker[j]) continue;
        if (std::fabs(own[j] - speaker[j]) <= delta) {
            // Clamp: the convex combination can exceed the bounds by one
            // rounding step in floating point.
            own[j] = std::clamp((1.0 - w) * own[j] + w * speaker[j], 0.0, 1.0);
        }
    }
}

}  // namespace

UtilityVector bc_update(const Agent& listener, const UtilityVector& speaker_utilities, double w,
                        double delta) {
    if (listener.utilities.size() != speaker_utilities.size())
        throw std::invalid_argument("bc_update: utility vector length mismatch");
    UtilityVector out = listener.utilities;
    apply_update(out, speaker_utilities, w, delta);
    return out;
}

void run_group_round(const std::vector<int>& group, std::vector<Agent>& agents, Rng& rng,
                     UpdateMode mode) {
    if (group.empty()) throw std::invalid_argument("run_group_round: empty group");
    std::vector<char> seen(agents.size(), 0);
    for (int id : group) {
        if (id < 0 || id >= static_cast<int>(agents.size()))
            throw std::invalid_argument("run_group_round: agent id out of range");
        if (seen[static_cast<size_t>(id)])
            throw std::invalid_argument("run_group_round: duplicate agent id");
        seen[static_cast<size_t>(id)] = 1;
    }

    std::vector<int> order = group;
    rng.shuffle(order);

    std::vector<UtilityVector> snapshot;
    if (mode == UpdateMode::Snapshot) {
        snapshot.resize(agents.size());
        for (int id : group) snapshot[static_cast<size_t>(id)] = agents[static_cast<size_t>(id)].utilities;
    }

    for (int s : order) {
        const Agent& speaker = agents[static_cast<size_t>(s)];
        const UtilityVector& reported =
            (mode == UpdateMode::Snapshot) ? snapshot[static_cast<size_t>(s)] : speaker.utilities;
        for (int l : group) {
            if (l == s) continue;
            Agent& listener = agents[static_cast<size_t>(l)];
            const double w = influence_weight(listener, speaker);
            apply_update(listener.utilities, reported, w, listener.delta);
        }
    }
}

DeliberationTrace run_deliberation(Population& pop, Strategy strategy, int g, int rounds, Rng& rng,
                                   UpdateMode mode) {
    if (rounds < 0) throw std::invalid_argument("run_deliberation: rounds must be >= 0");
    const int effective = is_iterative(strategy) ? rounds : std::min(rounds, 1);

    DeliberationTrace trace;
    trace.variance.push_back(utility_variance(pop));
    if (effective == 0) return trace;

    MeetingCounts counts(static_cast<int>(pop.agents.size()));
    for (int r = 0; r < effective; ++r) {
        const GroupPlan plan = make_groups(strategy, pop, g, counts, rng);
        for (const auto& group : plan.groups) run_group_round(group, pop.agents, rng, mode);
        if (is_iterative(strategy)) update_meetings(counts, plan);
        trace.variance.push_back(utility_variance(pop));
    }
    return trace;
}

}  // namespace delib
