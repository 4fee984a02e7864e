#include "delib/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace delib {

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Homogeneous: return "homogeneous";
        case Strategy::Heterogeneous: return "heterogeneous";
        case Strategy::Random: return "random";
        case Strategy::Large: return "large";
        case Strategy::IterRandom: return "iter_random";
        case Strategy::IterGolfer: return "iter_golfer";
    }
    throw std::invalid_argument("strategy_name: bad enum value");
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : kAllStrategies)
        if (name == strategy_name(s)) return s;
    throw std::invalid_argument("unknown strategy: " + std::string(name));
}

bool is_iterative(Strategy s) { return s == Strategy::IterRandom || s == Strategy::IterGolfer; }

void GroupPlan::validate(int n) const {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    int total = 0;
    for (const auto& group : groups) {
        if (group.empty()) throw std::logic_error("group plan: empty group");
        for (int a : group) {
            if (a < 0 || a >= n) throw std::logic_error("group plan: agent id out of range");
            if (seen[static_cast<size_t>(a)]) throw std::logic_error("group plan: duplicate agent");
            seen[static_cast<size_t>(a)] = 1;
            ++total;
        }
    }
    if (total != n) throw std::logic_error("group plan: does not cover the population");
}

namespace {

// Balanced sizes: the first n%g groups take one extra agent.
std::vector<int> balanced_sizes(int n, int g) {
    std::vector<int> sizes(static_cast<size_t>(g), n / g);
    for (int i = 0; i < n % g; ++i) ++sizes[static_cast<size_t>(i)];
    return sizes;
}

std::vector<int> shuffled_ids(const std::vector<int>& ids, Rng& rng) {
    std::vector<int> out = ids;
    rng.shuffle(out);
    return out;
}

GroupPlan sliced_plan(const std::vector<int>& order, const std::vector<int>& sizes) {
    GroupPlan plan;
    size_t pos = 0;
    for (int sz : sizes) {
        plan.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                 order.begin() + static_cast<std::ptrdiff_t>(pos) + sz);
        pos += static_cast<size_t>(sz);
    }
    return plan;
}

GroupPlan random_plan(int n, int g, Rng& rng) {
    std::vector<int> ids(static_cast<size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    return sliced_plan(ids, balanced_sizes(n, g));
}

GroupPlan homogeneous_plan(const Population& pop, int g, Rng& rng) {
    if (g < 2) throw std::invalid_argument("homogeneous grouping needs g >= 2");
    std::vector<int> maj, min;
    for (const Agent& a : pop.agents)
        (a.bloc == Bloc::Majority ? maj : min).push_back(a.id);
    const int n = static_cast<int>(pop.agents.size());
    const int n_maj = static_cast<int>(maj.size());
    // Allocate groups to blocs proportionally, at least one each.
    int g_maj = static_cast<int>(std::llround(static_cast<double>(g) * n_maj / n));
    g_maj = std::clamp(g_maj, 1, g - 1);
    const int g_min = g - g_maj;
    if (g_maj > n_maj || g_min > static_cast<int>(min.size()))
        throw std::invalid_argument("homogeneous grouping infeasible: more groups than bloc members");

    const std::vector<int> maj_order = shuffled_ids(maj, rng);
    const std::vector<int> min_order = shuffled_ids(min, rng);
    GroupPlan plan = sliced_plan(maj_order, balanced_sizes(n_maj, g_maj));
    GroupPlan min_plan = sliced_plan(min_order, balanced_sizes(static_cast<int>(min.size()), g_min));
    plan.groups.insert(plan.groups.end(), min_plan.groups.begin(), min_plan.groups.end());
    return plan;
}

GroupPlan heterogeneous_plan(const Population& pop, int g, Rng& rng) {
    std::vector<int> maj, min;
    for (const Agent& a : pop.agents)
        (a.bloc == Bloc::Majority ? maj : min).push_back(a.id);
    const int n = static_cast<int>(pop.agents.size());
    const std::vector<int> sizes = balanced_sizes(n, g);

    // Deal shuffled minority agents round-robin over a random group order,
    // skipping full groups, so per-group minority counts stay within one of
    // the proportional target.
    const std::vector<int> min_order = shuffled_ids(min, rng);
    std::vector<int> visit(static_cast<size_t>(g));
    std::iota(visit.begin(), visit.end(), 0);
    rng.shuffle(visit);
    GroupPlan plan;
    plan.groups.resize(static_cast<size_t>(g));
    size_t cursor = 0;
    for (int id : min_order) {
        while (static_cast<int>(plan.groups[static_cast<size_t>(visit[cursor % visit.size()])].size()) >=
               sizes[static_cast<size_t>(visit[cursor % visit.size()])])
            ++cursor;
        plan.groups[static_cast<size_t>(visit[cursor % visit.size()])].push_back(id);
        ++cursor;
    }
    // Fill the remaining capacity with shuffled majority agents.
    const std::vector<int> maj_order = shuffled_ids(maj, rng);
    size_t next = 0;
    for (int gi = 0; gi < g; ++gi) {
        auto& group = plan.groups[static_cast<size_t>(gi)];
        while (static_cast<int>(group.size()) < sizes[static_cast<size_t>(gi)]) group.push_back(maj_order[next++]);
    }
    return plan;
}

}  // namespace

GroupPlan make_groups(Strategy strategy, const Population& pop, int g, const MeetingCounts& counts,
                      Rng& rng) {
    const int n = static_cast<int>(pop.agents.size());
    if (strategy == Strategy::Large) g = 1;
    if (g < 1 || g > n) throw std::invalid_argument("grouping: need 1 <= g <= n");
    switch (strategy) {
        case Strategy::Large: {
            GroupPlan plan;
            plan.groups.emplace_back(static_cast<size_t>(n));
            std::iota(plan.groups.front().begin(), plan.groups.front().end(), 0);
            return plan;
        }
        case Strategy::Random:
        case Strategy::IterRandom:
            return random_plan(n, g, rng);
        case Strategy::IterGolfer:
            return make_golfer_plan(pop, g, counts, rng);
        case Strategy::Homogeneous:
            return homogeneous_plan(pop, g, rng);
        case Strategy::Heterogeneous:
            return heterogeneous_plan(pop, g, rng);
    }
    throw std::invalid_argument("make_groups: bad strategy enum");
}

int64_t golfer_cost(const GroupPlan& plan, const MeetingCounts& counts) {
    int64_t total = 0;
    for (const auto& group : plan.groups)
        for (size_t i = 0; i < group.size(); ++i)
            for (size_t j = i + 1; j < group.size(); ++j) {
                const int64_t f = counts.f(group[i], group[j]);
                total += f * f;
            }
    return total;
}

void update_meetings(MeetingCounts& counts, const GroupPlan& plan) {
    for (const auto& group : plan.groups)
        for (size_t i = 0; i < group.size(); ++i)
            for (size_t j = i + 1; j < group.size(); ++j) counts.add(group[i], group[j]);
}

GroupPlan make_golfer_plan(const Population& pop, int g, const MeetingCounts& counts, Rng& rng) {
    const int n = static_cast<int>(pop.agents.size());
    if (g < 1 || g > n) throw std::invalid_argument("grouping: need 1 <= g <= n");
    const std::vector<int> caps = balanced_sizes(n, g);
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    GroupPlan plan;
    plan.groups.resize(static_cast<size_t>(g));
    std::vector<int> ties;
    for (int a : order) {
        int64_t best = -1;
        ties.clear();
        for (int gi = 0; gi < g; ++gi) {
            const auto& group = plan.groups[static_cast<size_t>(gi)];
            if (static_cast<int>(group.size()) >= caps[static_cast<size_t>(gi)]) continue;
            int64_t cost = 0;
            for (int b : group) {
                const int64_t f = counts.f(a, b);
                cost += f * f;
            }
            if (best < 0 || cost < best) {
                best = cost;
                ties.assign(1, gi);
            } else if (cost == best) {
                ties.push_back(gi);
            }
        }
        const int pick = ties[static_cast<size_t>(rng.below(ties.size()))];
        plan.groups[static_cast<size_t>(pick)].push_back(a);
    }
    return plan;
}

}  // namespace delib
