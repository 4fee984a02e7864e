#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "delib/population.hpp"
#include "delib/rng.hpp"

namespace delib {

enum class Strategy { Homogeneous, Heterogeneous, Random, Large, IterRandom, IterGolfer };

inline constexpr std::array<Strategy, 6> kAllStrategies = {
    Strategy::Homogeneous, Strategy::Heterogeneous, Strategy::Random,
    Strategy::Large,       Strategy::IterRandom,    Strategy::IterGolfer,
};

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);  // throws std::invalid_argument

// Iterative strategies rebuild groups every round; the others deliberate in
// fixed groups for a single round.
bool is_iterative(Strategy s);

struct GroupPlan {
    std::vector<std::vector<int>> groups;

    // Asserts the plan partitions [0, n): disjoint and covering.
    void validate(int n) const;  // throws std::logic_error
};

// Symmetric pair-meeting counts f(a, b) used by the golfer heuristic.
class MeetingCounts {
  public:
    MeetingCounts() = default;
    explicit MeetingCounts(int n) : n_(n), mat_(static_cast<size_t>(n) * static_cast<size_t>(n), 0) {}

    int n() const { return n_; }
    int f(int a, int b) const { return mat_[static_cast<size_t>(a) * static_cast<size_t>(n_) + static_cast<size_t>(b)]; }
    void add(int a, int b) {
        ++mat_[static_cast<size_t>(a) * static_cast<size_t>(n_) + static_cast<size_t>(b)];
        ++mat_[static_cast<size_t>(b) * static_cast<size_t>(n_) + static_cast<size_t>(a)];
    }

  private:
    int n_ = 0;
    std::vector<int> mat_;
};

// Builds a plan for the strategy. Large forces g = 1. Throws
// std::invalid_argument when g is out of range or a bloc cannot get the
// groups the strategy requires.
GroupPlan make_groups(Strategy strategy, const Population& pop, int g, const MeetingCounts& counts,
                      Rng& rng);

// Sum over groups, over unordered member pairs, of f(a,b)^2.
int64_t golfer_cost(const GroupPlan& plan, const MeetingCounts& counts);

// Increments f(a,b) for every co-grouped pair of the plan.
void update_meetings(MeetingCounts& counts, const GroupPlan& plan);

// Greedy golfer construction: agents in a uniformly random order, each
// assigned to a non-full group with minimal incremental squared-count cost,
// ties broken uniformly at random. Group capacities are balanced.
GroupPlan make_golfer_plan(const Population& pop, int g, const MeetingCounts& counts, Rng& rng);

}  // namespace delib
