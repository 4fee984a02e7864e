#include "delib/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "delib/axioms.hpp"
#include "json.hpp"

namespace delib {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form, deterministic across platforms.
std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double_strict(std::string_view s, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": bad real '" + std::string(s) + "'");
    return v;
}

int64_t parse_int_strict(std::string_view s, const char* what) {
    int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": bad integer '" + std::string(s) + "'");
    return v;
}

uint64_t parse_uint_strict(std::string_view s, const char* what) {
    uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": bad integer '" + std::string(s) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string_view unquote(std::string_view s, const char* what) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    if (!s.empty() && (s.front() == '"' || s.back() == '"'))
        throw std::invalid_argument(std::string(what) + ": unbalanced quotes in '" + std::string(s) + "'");
    return s;
}

std::vector<std::string> parse_array(std::string_view s, const char* what) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument(std::string(what) + ": expected [array]");
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            const std::string_view item = trim(s.substr(start, i - start));
            if (!item.empty()) out.emplace_back(unquote(item, what));
            start = i + 1;
        }
    }
    return out;
}

MesCompletion parse_mes_completion(std::string_view name) {
    if (name == "av") return MesCompletion::Av;
    if (name == "seq_priority") return MesCompletion::SeqPriority;
    throw std::invalid_argument("config: mes_completion must be 'av' or 'seq_priority'");
}

MinorityRule parse_minority_rule(std::string_view name) {
    if (name == "strict") return MinorityRule::Strict;
    if (name == "greater_equal") return MinorityRule::GreaterEqual;
    throw std::invalid_argument("config: minority_rule must be 'strict' or 'greater_equal'");
}

ParamSampling parse_param_sampling(std::string_view name) {
    if (name == "uniform") return ParamSampling::Uniform;
    if (name == "normal") return ParamSampling::Normal;
    throw std::invalid_argument("config: param_sampling must be 'uniform' or 'normal'");
}

constexpr std::string_view kCsvHeader =
    "replication,strategy,rule,ur,rr,uragg,vs,ejr,pjr,minority_preserved,variance,disagreement,"
    "attempts,ms";

std::vector<UtilityVector> utilities_of(const Population& pop) {
    std::vector<UtilityVector> out;
    out.reserve(pop.agents.size());
    for (const Agent& a : pop.agents) out.push_back(a.utilities);
    return out;
}

RuleOutcome solve_rule(Rule rule, const ApprovalProfile& profile, int k, const TieBreaker& tie,
                       MesCompletion completion) {
    switch (rule) {
        case Rule::Av: return av_committee(profile, k, tie);
        case Rule::Cc: return cc_committee(profile, k, tie);
        case Rule::Pav: return pav_committee(profile, k, tie);
        case Rule::Mes: return mes_committee(profile, k, tie, completion);
    }
    throw std::invalid_argument("solve_rule: bad enum value");
}

}  // namespace

std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::Av: return "av";
        case Rule::Cc: return "cc";
        case Rule::Pav: return "pav";
        case Rule::Mes: return "mes";
    }
    throw std::invalid_argument("rule_name: bad enum value");
}

Rule parse_rule(std::string_view name) {
    for (Rule r : kAllRules)
        if (name == rule_name(r)) return r;
    throw std::invalid_argument("unknown rule: " + std::string(name));
}

void ExperimentConfig::validate() const {
    population.validate();
    if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
    if (groups < 1) throw std::invalid_argument("config: groups must be >= 1");
    if (rounds < 0) throw std::invalid_argument("config: rounds must be >= 0");
    if (!(eligibility_threshold > 0.0 && eligibility_threshold <= 1.0))
        throw std::invalid_argument("config: eligibility_threshold must be in (0, 1]");
    if (eligibility_cap < 1) throw std::invalid_argument("config: eligibility_cap must be >= 1");
    if (rules.empty()) throw std::invalid_argument("config: need at least one rule");
    std::unordered_set<std::string_view> seen;
    for (Rule r : rules)
        if (!seen.insert(rule_name(r)).second)
            throw std::invalid_argument("config: duplicate rule");
    seen.clear();
    for (Strategy s : strategies)
        if (!seen.insert(strategy_name(s)).second)
            throw std::invalid_argument("config: duplicate strategy");
}

ExperimentConfig parse_config_text(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        const size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;

        // Strip comments; '#' inside a quoted string does not count.
        bool in_quote = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            if (line[i] == '#' && !in_quote) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = "config line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument(where + ": unterminated section");
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name != "population")
                throw std::invalid_argument(where + ": unknown section '" + std::string(name) + "'");
            section = name;
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument(where + ": expected 'key = value'");
        const char* what = where.c_str();

        if (section == "population") {
            PopulationConfig& p = cfg.population;
            if (key == "n_majority") p.n_majority = static_cast<int>(parse_int_strict(value, what));
            else if (key == "n_minority") p.n_minority = static_cast<int>(parse_int_strict(value, what));
            else if (key == "candidates") p.candidates = static_cast<int>(parse_int_strict(value, what));
            else if (key == "phi") p.phi = parse_double_strict(value, what);
            else if (key == "committee_size") p.committee_size = static_cast<int>(parse_int_strict(value, what));
            else if (key == "param_sampling") p.param_sampling = parse_param_sampling(unquote(value, what));
            else throw std::invalid_argument(where + ": unknown population key '" + key + "'");
            continue;
        }

        if (key == "replications") cfg.replications = static_cast<int>(parse_int_strict(value, what));
        else if (key == "master_seed") cfg.master_seed = parse_uint_strict(value, what);
        else if (key == "k") cfg.population.committee_size = static_cast<int>(parse_int_strict(value, what));
        else if (key == "groups" || key == "g") cfg.groups = static_cast<int>(parse_int_strict(value, what));
        else if (key == "rounds" || key == "R") cfg.rounds = static_cast<int>(parse_int_strict(value, what));
        else if (key == "eligibility_threshold") cfg.eligibility_threshold = parse_double_strict(value, what);
        else if (key == "eligibility_cap") cfg.eligibility_cap = static_cast<int>(parse_int_strict(value, what));
        else if (key == "mes_completion") cfg.mes_completion = parse_mes_completion(unquote(value, what));
        else if (key == "minority_rule") cfg.minority_rule = parse_minority_rule(unquote(value, what));
        else if (key == "update_mode") cfg.update_mode = parse_update_mode(unquote(value, what));
        else if (key == "out_dir") cfg.out_dir = std::string(unquote(value, what));
        else if (key == "strategies") {
            cfg.strategies.clear();
            for (const std::string& name : parse_array(value, what))
                cfg.strategies.push_back(parse_strategy(name));
        } else if (key == "rules") {
            cfg.rules.clear();
            for (const std::string& name : parse_array(value, what))
                cfg.rules.push_back(parse_rule(name));
        } else {
            throw std::invalid_argument(where + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

EligibleInstance generate_eligible_instance(const ExperimentConfig& cfg, int replication) {
    const int k = cfg.population.committee_size;
    const int m = cfg.population.candidates;
    Rng tie_rng = make_stream(cfg.master_seed, static_cast<uint64_t>(replication), "tiebreak");
    TieBreaker tie = TieBreaker::random_priority(m, tie_rng);

    for (int attempt = 1; attempt <= cfg.eligibility_cap; ++attempt) {
        Rng pop_rng = make_stream(cfg.master_seed, static_cast<uint64_t>(replication),
                                  "population:" + std::to_string(attempt));
        Population pop = init_population(cfg.population, pop_rng);
        ApprovalProfile profile = profile_from_population(pop, m);

        const RuleOutcome av = av_committee(profile, k, tie);
        const RuleOutcome cc = cc_committee(profile, k, tie);
        const double rr_av =
            representation_ratio_given_max(profile, av.committee, static_cast<int>(cc.score));
        const double ur_cc = utilitarian_ratio(utilities_of(pop), cc.committee, k);
        if (rr_av < cfg.eligibility_threshold && ur_cc < cfg.eligibility_threshold)
            return {std::move(pop), std::move(profile), std::move(tie), attempt};
    }
    throw EligibilityError("eligibility filter exhausted " + std::to_string(cfg.eligibility_cap) +
                           " attempts (replication " + std::to_string(replication) +
                           "); the config looks degenerate");
}

std::vector<RunRecord> run_replication(const ExperimentConfig& cfg, int replication) {
    cfg.validate();
    const int k = cfg.population.committee_size;
    const int m = cfg.population.candidates;
    EligibleInstance inst = generate_eligible_instance(cfg, replication);

    std::vector<Bloc> blocs;
    blocs.reserve(inst.population.agents.size());
    for (const Agent& a : inst.population.agents) blocs.push_back(a.bloc);
    const std::vector<int> minority_set =
        minority_supported_candidates(inst.profile, blocs, cfg.minority_rule);

    std::vector<RunRecord> out;
    out.reserve((1 + cfg.strategies.size()) * cfg.rules.size());

    const auto emit = [&](const std::string& label, const Population& pop,
                          const ApprovalProfile& profile) {
        const std::vector<UtilityVector> utils = utilities_of(pop);
        const double variance = utility_variance(pop);
        const double disagreement = intergroup_disagreement(profile, blocs);
        const RuleOutcome cc = cc_committee(profile, k, inst.tie);
        const int max_coverage = static_cast<int>(cc.score);
        const double max_welfare = optimal_welfare_committee(utils, k).score;

        for (Rule rule : cfg.rules) {
            const auto t0 = std::chrono::steady_clock::now();
            const RuleOutcome oc =
                rule == Rule::Cc ? cc : solve_rule(rule, profile, k, inst.tie, cfg.mes_completion);
            RunRecord r;
            r.replication = replication;
            r.strategy = label;
            r.rule = std::string(rule_name(rule));
            r.ur = utilitarian_ratio_given_max(utils, oc.committee, max_welfare);
            r.rr = representation_ratio_given_max(profile, oc.committee, max_coverage);
            r.uragg = uragg(r.ur, r.rr);
            r.vs = voter_satisfaction(profile, oc.committee);
            r.ejr = satisfies_ejr(profile, oc.committee, k).satisfied;
            r.pjr = satisfies_pjr(profile, oc.committee, k).satisfied;
            r.minority_preserved = minority_preservation(minority_set, oc.committee);
            r.variance = variance;
            r.disagreement = disagreement;
            r.attempts = inst.attempts;
            r.committee = oc.committee.members;
            r.approvals = committee_approval_profile(profile, oc.committee);
            if (rule == Rule::Mes) {
                r.mes_prices = oc.mes.prices;
                r.mes_completion_seats = oc.mes.completion_seats;
            }
            r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
            out.push_back(std::move(r));
        }
    };

    emit("initial", inst.population, inst.profile);

    for (Strategy s : cfg.strategies) {
        Population pop = inst.population;  // pristine clone per strategy
        Rng rng = make_stream(cfg.master_seed, static_cast<uint64_t>(replication),
                              "delib:" + std::string(strategy_name(s)));
        run_deliberation(pop, s, cfg.groups, cfg.rounds, rng, cfg.update_mode);
        for (Agent& a : pop.agents) a.ranking = rerank_from_utilities(a);
        const ApprovalProfile post = profile_from_population(pop, m);
        emit(std::string(strategy_name(s)), pop, post);
    }
    return out;
}

const std::vector<std::string>& objective_names() {
    static const std::vector<std::string> names = {
        "ur", "rr", "uragg", "vs", "ejr", "pjr", "minority_preserved", "variance", "disagreement"};
    return names;
}

double objective_value(const RunRecord& r, std::string_view objective) {
    if (objective == "ur") return r.ur;
    if (objective == "rr") return r.rr;
    if (objective == "uragg") return r.uragg;
    if (objective == "vs") return r.vs;
    if (objective == "ejr") return r.ejr ? 1.0 : 0.0;
    if (objective == "pjr") return r.pjr ? 1.0 : 0.0;
    if (objective == "minority_preserved") return r.minority_preserved;
    if (objective == "variance") return r.variance;
    if (objective == "disagreement") return r.disagreement;
    throw std::invalid_argument("unknown objective: " + std::string(objective));
}

const Stat& AggregateReport::stat(std::string_view strategy, std::string_view rule,
                                  std::string_view objective) const {
    const auto oit = std::find(objectives.begin(), objectives.end(), objective);
    if (oit == objectives.end()) throw std::out_of_range("report: unknown objective");
    for (const AggregateCell& cell : cells)
        if (cell.strategy == strategy && cell.rule == rule)
            return cell.stats[static_cast<size_t>(oit - objectives.begin())];
    throw std::out_of_range("report: no cell for (" + std::string(strategy) + ", " +
                            std::string(rule) + ")");
}

AggregateReport aggregate_records(const std::vector<RunRecord>& records) {
    AggregateReport report;
    report.objectives = objective_names();

    const auto first_seen = [](std::vector<std::string>& order, const std::string& v) {
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    };
    std::unordered_set<int> reps;
    for (const RunRecord& r : records) {
        first_seen(report.strategies, r.strategy);
        first_seen(report.rules, r.rule);
        reps.insert(r.replication);
    }
    report.replications = static_cast<int>(reps.size());

    // Per (strategy, rule): one (replication, value) series per objective.
    using Series = std::vector<std::pair<int, double>>;
    const size_t n_obj = report.objectives.size();
    const size_t n_rules = report.rules.size();
    const auto cell_index = [&](const std::string& strategy, const std::string& rule) {
        const size_t si = static_cast<size_t>(
            std::find(report.strategies.begin(), report.strategies.end(), strategy) -
            report.strategies.begin());
        const size_t ri = static_cast<size_t>(
            std::find(report.rules.begin(), report.rules.end(), rule) - report.rules.begin());
        return si * n_rules + ri;
    };
    std::vector<std::vector<Series>> series(report.strategies.size() * n_rules,
                                            std::vector<Series>(n_obj));
    for (const RunRecord& r : records) {
        auto& cell = series[cell_index(r.strategy, r.rule)];
        for (size_t o = 0; o < n_obj; ++o)
            cell[o].emplace_back(r.replication, objective_value(r, report.objectives[o]));
    }
    for (auto& cell : series)
        for (Series& s : cell)
            std::sort(s.begin(), s.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const std::string& strategy : report.strategies) {
        for (const std::string& rule : report.rules) {
            AggregateCell cell;
            cell.strategy = strategy;
            cell.rule = rule;
            const auto& cs = series[cell_index(strategy, rule)];
            for (size_t o = 0; o < n_obj; ++o) {
                Stat st;
                st.count = static_cast<int>(cs[o].size());
                if (st.count > 0) {
                    double sum = 0.0;
                    for (const auto& [rep, v] : cs[o]) sum += v;
                    st.mean = sum / st.count;
                    if (st.count > 1) {
                        double ss = 0.0;
                        for (const auto& [rep, v] : cs[o]) ss += (v - st.mean) * (v - st.mean);
                        st.se = std::sqrt(ss / (st.count - 1)) / std::sqrt(st.count);
                    }
                }
                cell.stats.push_back(st);
            }
            report.cells.push_back(std::move(cell));
        }
    }

    // Pairwise strategy significance per rule x objective; binary axiom
    // columns are excluded (paired t / signed-rank assume interval data).
    static const std::vector<std::string> continuous = {
        "ur", "rr", "uragg", "vs", "minority_preserved", "variance", "disagreement"};
    for (const std::string& rule : report.rules) {
        for (const std::string& objective : continuous) {
            const size_t o = static_cast<size_t>(
                std::find(report.objectives.begin(), report.objectives.end(), objective) -
                report.objectives.begin());
            for (size_t i = 0; i < report.strategies.size(); ++i) {
                for (size_t j = i + 1; j < report.strategies.size(); ++j) {
                    SignificanceEntry e;
                    e.rule = rule;
                    e.objective = objective;
                    e.a = report.strategies[i];
                    e.b = report.strategies[j];
                    const Series& sa = series[cell_index(e.a, rule)][o];
                    const Series& sb = series[cell_index(e.b, rule)][o];
                    bool aligned = sa.size() == sb.size() && sa.size() >= 10;
                    for (size_t t = 0; aligned && t < sa.size(); ++t)
                        aligned = sa[t].first == sb[t].first;
                    if (!aligned) {
                        e.insufficient = true;
                    } else {
                        std::vector<double> va, vb;
                        va.reserve(sa.size());
                        vb.reserve(sb.size());
                        for (const auto& [rep, v] : sa) va.push_back(v);
                        for (const auto& [rep, v] : sb) vb.push_back(v);
                        e.tests = paired_tests(va, vb);
                    }
                    report.significance.push_back(std::move(e));
                }
            }
        }
    }
    return report;
}

void persist_records(const std::vector<RunRecord>& records, const std::string& csv_path,
                     const std::string& jsonl_path) {
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << kCsvHeader << '\n';
    for (const RunRecord& r : records) {
        csv << r.replication << ',' << r.strategy << ',' << r.rule << ',' << fmt_double(r.ur)
            << ',' << fmt_double(r.rr) << ',' << fmt_double(r.uragg) << ',' << fmt_double(r.vs)
            << ',' << (r.ejr ? 1 : 0) << ',' << (r.pjr ? 1 : 0) << ',' << r.minority_preserved
            << ',' << fmt_double(r.variance) << ',' << fmt_double(r.disagreement) << ','
            << r.attempts << ",0\n";  // ms is wall-clock noise; the CSV stays byte-reproducible
    }
    if (!csv.flush()) throw std::runtime_error("write failed: " + csv_path);

    std::ofstream jsonl(jsonl_path, std::ios::binary | std::ios::trunc);
    if (!jsonl) throw std::runtime_error("cannot write " + jsonl_path);
    for (const RunRecord& r : records) {
        json j;
        j["replication"] = r.replication;
        j["strategy"] = r.strategy;
        j["rule"] = r.rule;
        j["committee"] = r.committee;
        j["approvals"] = r.approvals;
        j["mes_prices"] = r.mes_prices;
        j["mes_completion_seats"] = r.mes_completion_seats;
        j["ms"] = r.ms;
        jsonl << j.dump() << '\n';
    }
    if (!jsonl.flush()) throw std::runtime_error("write failed: " + jsonl_path);
}

std::vector<RunRecord> load_records(const std::string& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + csv_path);
    std::string line;
    bool saw_header = false;
    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == kCsvHeader) {  // repeated headers allowed: concatenation-safe
            saw_header = true;
            continue;
        }
        if (!saw_header)
            throw std::runtime_error("records: unsupported schema in " + csv_path +
                                     " (expected header '" + std::string(kCsvHeader) + "')");
        std::vector<std::string_view> fields;
        size_t start = 0;
        const std::string_view lv = line;
        for (size_t i = 0; i <= lv.size(); ++i) {
            if (i == lv.size() || lv[i] == ',') {
                fields.push_back(lv.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 14)
            throw std::runtime_error("records: malformed row '" + line + "'");
        RunRecord r;
        r.replication = static_cast<int>(parse_int_strict(fields[0], "records"));
        r.strategy = std::string(fields[1]);
        r.rule = std::string(fields[2]);
        r.ur = parse_double_strict(fields[3], "records");
        r.rr = parse_double_strict(fields[4], "records");
        r.uragg = parse_double_strict(fields[5], "records");
        r.vs = parse_double_strict(fields[6], "records");
        r.ejr = parse_int_strict(fields[7], "records") != 0;
        r.pjr = parse_int_strict(fields[8], "records") != 0;
        r.minority_preserved = static_cast<int>(parse_int_strict(fields[9], "records"));
        r.variance = parse_double_strict(fields[10], "records");
        r.disagreement = parse_double_strict(fields[11], "records");
        r.attempts = static_cast<int>(parse_int_strict(fields[12], "records"));
        r.ms = parse_double_strict(fields[13], "records");
        out.push_back(std::move(r));
    }
    if (!saw_header)
        throw std::runtime_error("records: unsupported schema in " + csv_path +
                                 " (expected header '" + std::string(kCsvHeader) + "')");
    return out;
}

std::string report_text(const AggregateReport& report) {
    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "experiment report: %d replications\n", report.replications);
    out += buf;
    for (const std::string& rule : report.rules) {
        out += "\nrule " + rule + "\n";
        std::snprintf(buf, sizeof(buf), "  %-14s", "strategy");
        out += buf;
        for (const std::string& obj : report.objectives) {
            std::snprintf(buf, sizeof(buf), " %-18s", obj.c_str());
            out += buf;
        }
        out += '\n';
        for (const std::string& strategy : report.strategies) {
            std::snprintf(buf, sizeof(buf), "  %-14s", strategy.c_str());
            out += buf;
            for (const std::string& obj : report.objectives) {
                const Stat& st = report.stat(strategy, rule, obj);
                std::snprintf(buf, sizeof(buf), " %8.4f (%.4f) ", st.mean, st.se);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

std::string report_json(const AggregateReport& report) {
    json j;
    j["schema"] = "delib-report-v1";
    j["replications"] = report.replications;
    j["strategies"] = report.strategies;
    j["rules"] = report.rules;
    j["objectives"] = report.objectives;
    json aggregates = json::array();
    for (const AggregateCell& cell : report.cells) {
        json c;
        c["strategy"] = cell.strategy;
        c["rule"] = cell.rule;
        json metrics;
        for (size_t o = 0; o < report.objectives.size(); ++o) {
            const Stat& st = cell.stats[o];
            metrics[report.objectives[o]] = {
                {"mean", st.mean}, {"se", st.se}, {"count", st.count}};
        }
        c["metrics"] = std::move(metrics);
        aggregates.push_back(std::move(c));
    }
    j["aggregates"] = std::move(aggregates);
    json sig = json::array();
    for (const SignificanceEntry& e : report.significance) {
        json s;
        s["rule"] = e.rule;
        s["objective"] = e.objective;
        s["a"] = e.a;
        s["b"] = e.b;
        s["insufficient"] = e.insufficient;
        if (!e.insufficient) {
            // +/-inf from degenerate t statistics has no JSON representation.
            s["t"] = std::isfinite(e.tests.t_statistic) ? json(e.tests.t_statistic) : json();
            s["t_pvalue"] = e.tests.t_pvalue;
            s["t_degenerate"] = e.tests.t_degenerate;
            s["wilcoxon"] = e.tests.wilcoxon_statistic;
            s["wilcoxon_pvalue"] = e.tests.wilcoxon_pvalue;
            s["wilcoxon_degenerate"] = e.tests.wilcoxon_degenerate;
        }
        sig.push_back(std::move(s));
    }
    j["significance"] = std::move(sig);
    return j.dump(2) + "\n";
}

AggregateReport run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    const size_t per_rep = (1 + cfg.strategies.size()) * cfg.rules.size();
    std::vector<RunRecord> records(per_rep * static_cast<size_t>(cfg.replications));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const int rep = next.fetch_add(1);
            if (rep >= cfg.replications) break;
            try {
                std::vector<RunRecord> rs = run_replication(cfg, rep);
                std::move(rs.begin(), rs.end(),
                          records.begin() + static_cast<ptrdiff_t>(per_rep) * rep);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };

    const int n_threads = std::clamp(threads, 1, std::max(1, cfg.replications));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads) - 1);
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    AggregateReport report = aggregate_records(records);

    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir.empty() ? "out" : cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                     ec.message());
    persist_records(records, (dir / "records.csv").string(), (dir / "records.jsonl").string());
    {
        const fs::path path = dir / "report.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << report_json(report);
        if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
    }
    {
        const fs::path path = dir / "report.txt";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << report_text(report);
        if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
    }
    return report;
}

}  // namespace delib
