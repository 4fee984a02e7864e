#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delib/dynamics.hpp"
#include "delib/grouping.hpp"
#include "delib/metrics.hpp"
#include "delib/population.hpp"
#include "delib/rules.hpp"

namespace delib {

enum class Rule { Av, Cc, Pav, Mes };

inline constexpr std::array<Rule, 4> kAllRules = {Rule::Av, Rule::Cc, Rule::Pav, Rule::Mes};

std::string_view rule_name(Rule r);
Rule parse_rule(std::string_view name);  // throws std::invalid_argument

struct ExperimentConfig {
    PopulationConfig population;
    int groups = 10;
    int rounds = 5;
    std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<Rule> rules{kAllRules.begin(), kAllRules.end()};
    int replications = 100;
    uint64_t master_seed = 42;
    double eligibility_threshold = 0.9;
    int eligibility_cap = 1000;
    MesCompletion mes_completion = MesCompletion::Av;
    MinorityRule minority_rule = MinorityRule::Strict;
    UpdateMode update_mode = UpdateMode::Immediate;
    std::string out_dir;  // empty means "out"

    void validate() const;  // throws std::invalid_argument
};

// Parses the experiment config format: `key = value` lines, `#` comments,
// quoted strings, [bracketed, arrays], and one optional [population] section.
// Unknown keys or sections are rejected.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::string& path);  // throws on I/O failure

// One row per (replication x strategy x rule); the pre-deliberation baseline
// is stored under strategy = "initial".
struct RunRecord {
    int replication = 0;
    std::string strategy;
    std::string rule;
    double ur = 0.0;
    double rr = 0.0;
    double uragg = 0.0;
    double vs = 0.0;
    bool ejr = false;
    bool pjr = false;
    int minority_preserved = 0;
    double variance = 0.0;
    double disagreement = 0.0;
    int attempts = 0;  // eligibility resamples consumed by the replication
    double ms = 0.0;   // measured wall time; serialized to the JSONL twin only

    // Diagnostics, carried in the JSONL twin.
    std::vector<int> committee;
    std::vector<int> approvals;  // committee approval profile, ascending
    std::vector<double> mes_prices;
    int mes_completion_seats = 0;
};

class EligibilityError : public std::runtime_error {
  public:
    explicit EligibilityError(const std::string& what) : std::runtime_error(what) {}
};

struct EligibleInstance {
    Population population;
    ApprovalProfile profile;
    TieBreaker tie;
    int attempts = 0;
};

// Resamples whole populations until RR(AV committee) and UR(CC committee) on
// the initial profile both fall below the eligibility threshold. Throws
// EligibilityError once cfg.eligibility_cap attempts are exhausted.
EligibleInstance generate_eligible_instance(const ExperimentConfig& cfg, int replication);

// Baseline records for every rule on the initial profile, then one
// deliberation per strategy from a pristine clone of the population followed
// by records for every rule on the post-deliberation ballots. Deterministic
// in (cfg, replication).
std::vector<RunRecord> run_replication(const ExperimentConfig& cfg, int replication);

struct Stat {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    int count = 0;
};

struct AggregateCell {
    std::string strategy;
    std::string rule;
    // Parallel to AggregateReport::objectives.
    std::vector<Stat> stats;
};

struct SignificanceEntry {
    std::string rule;
    std::string objective;
    std::string a;
    std::string b;
    bool insufficient = false;  // fewer than 10 paired replications
    PairedTestResult tests;
};

struct AggregateReport {
    int replications = 0;
    std::vector<std::string> strategies;  // "initial" first, then config order
    std::vector<std::string> rules;
    std::vector<std::string> objectives;
    std::vector<AggregateCell> cells;  // strategy-major, rule-minor
    std::vector<SignificanceEntry> significance;

    const Stat& stat(std::string_view strategy, std::string_view rule,
                     std::string_view objective) const;  // throws std::out_of_range
};

// Objective columns of the raw records, in CSV order.
const std::vector<std::string>& objective_names();
double objective_value(const RunRecord& r, std::string_view objective);

// Means, standard errors, and the pairwise significance matrix (paired t and
// Wilcoxon per rule x objective x strategy pair, "initial" included).
AggregateReport aggregate_records(const std::vector<RunRecord>& records);

// Runs all replications (worker threads claim replication indices; the output
// is byte-identical for any thread count), aggregates, and persists raw
// records plus the report under cfg.out_dir.
AggregateReport run_experiment(const ExperimentConfig& cfg, int threads = 1);

// CSV of the flat columns plus a JSONL twin with per-record diagnostics.
void persist_records(const std::vector<RunRecord>& records, const std::string& csv_path,
                     const std::string& jsonl_path);
// Rejects files whose header differs from the current schema. Lines equal to
// the header are skipped, so concatenated record files load cleanly.
std::vector<RunRecord> load_records(const std::string& csv_path);

std::string report_text(const AggregateReport& report);
std::string report_json(const AggregateReport& report);

}  // namespace delib
